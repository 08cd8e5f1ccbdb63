use thiserror::Error;

use crate::baselines::BaselineError;
use crate::ca::CaError;
use crate::io::IoError;
use crate::learn::LearnError;
use crate::sequences::SequenceError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Any failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ca(#[from] CaError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Io(#[from] IoError),
}
