//! Ingestion, synthetic benchmark generation, dataset splits, and
//! persistence of datasets, models and results.

mod annotation;
mod dataset;
mod fasta;
mod model;
mod results;
mod split;
mod synthetic;

pub use annotation::{read_annotations, AnnotationRecord};
pub use dataset::{read_dataset, write_dataset};
pub use fasta::{read_fasta, FastaRecord};
pub use model::{load_model, save_model, Model, ModelFile, ModelMetadata, SCHEMA_VERSION};
pub use results::{plot_csv, read_results, write_results, ResultRow, RESULTS_HEADER};
pub use split::split;
pub use synthetic::{default_coding_table, generate_synthetic, SyntheticSpec, BENCHMARK_LENGTHS};

use thiserror::Error;

use crate::baselines::BaselineError;
use crate::sequences::SequenceError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed FASTA at line {line}: {reason}")]
    MalformedFasta { line: usize, reason: String },
    #[error("malformed annotation at line {line}: {reason}")]
    MalformedAnnotation { line: usize, reason: String },
    #[error("malformed dataset at line {line}: {reason}")]
    MalformedDataset { line: usize, reason: String },
    #[error("malformed results CSV at line {line}: {reason}")]
    MalformedResults { line: usize, reason: String },
    #[error("invalid synthetic spec: {0}")]
    BadSpec(String),
    #[error("dataset too small to split: {0}")]
    TooSmall(String),
    #[error("model schema version {found} is not supported (expected {expected})")]
    SchemaMismatch { found: u64, expected: u64 },
    #[error("window length {found} does not match the model's window length {expected}")]
    WindowLength { expected: usize, found: usize },
    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}
