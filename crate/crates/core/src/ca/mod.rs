//! Fuzzy cellular automata engine.
//!
//! Cells hold membership degrees in `[0, 1]`. Every supported rule is a
//! bounded-sum OR over a subset of the 3-neighbourhood, optionally negated
//! (`1 - x`). The lattice has a null boundary: missing neighbours read as 0.

mod attractor;
mod basins;
mod descriptor;
mod rule;
mod state;

pub use attractor::{
    default_max_steps, run_to_attractor, AttractorId, AttractorResult, AttractorSearch,
    DEFAULT_QUANTUM, MAX_STEPS_CAP,
};
pub use basins::{enumerate_binary_basins, BasinCensus, MAX_ENUMERATION_CELLS};
pub use descriptor::FmacaDescriptor;
pub use rule::{apply_rule, Neighborhood, RuleId, RuleVector};
pub use state::{FuzzyConfiguration, FuzzyState};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaError {
    #[error("rule {0} is not one of the 16 supported OR/NOR rules")]
    UnsupportedRule(u32),
    #[error("fuzzy state {0} is outside [0, 1]")]
    InvalidState(f64),
    #[error("dimension mismatch: automaton has {expected} cells, configuration has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no attractor reached within {max_steps} steps")]
    NonConvergent { max_steps: usize },
    #[error("binary basin enumeration supports at most {max} cells, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("dependency matrix entry ({row}, {col}) lies outside the 3-neighbourhood band")]
    NotBanded { row: usize, col: usize },
    #[error("malformed dependency matrix: {0}")]
    MalformedMatrix(String),
    #[error("an automaton needs at least one cell")]
    Empty,
    #[error("invalid attractor search parameters: {0}")]
    InvalidSearch(String),
}
