//! Learning layer: k-means, GA synthesis of automata, and the recursive
//! attractor-basin tree classifier.

mod evaluate;
mod fitness;
mod ga;
mod kmeans;
mod tree;

pub use evaluate::{evaluate, AccuracyReport};
pub use fitness::{distribute, fitness, fitness_of_distribution, BasinDistribution};
pub use ga::{synthesize_fmaca, synthesize_with_search, GaConfig, GaOutcome, Objective};
pub use kmeans::{distinct_kmeans, kmeans, KMeansResult, ELBOW_THRESHOLD, RESTARTS};
pub use tree::{build_tree, Classification, FmacaTree, KProposal, PathStep, TreeConfig, TreeNode};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ca::{AttractorSearch, CaError, FuzzyConfiguration};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnError {
    #[error("no points to cluster")]
    EmptyInput,
    #[error("k = {k} is invalid for {n} points")]
    BadK { k: usize, n: usize },
    #[error("all points must share one nonzero dimension")]
    RaggedInput,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("empty test set")]
    EmptyTestSet,
    #[error("example {index} has {found} cells, expected {expected}")]
    InconsistentDimensions { index: usize, expected: usize, found: usize },
    #[error("label {label} is outside the {classes} declared classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ca(#[from] CaError),
}

/// One training or test example: an encoded window and its class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub config: FuzzyConfiguration,
    pub label: usize,
}

impl LabeledExample {
    pub fn new(config: FuzzyConfiguration, label: usize) -> Self {
        LabeledExample { config, label }
    }
}

/// Default attractor search for a set of examples, sized from their smallest
/// nonzero cell value.
pub fn search_for(examples: &[LabeledExample]) -> AttractorSearch {
    let n = examples.first().map_or(1, |e| e.config.len());
    let eps = examples
        .iter()
        .flat_map(|e| e.config.cells().iter().copied())
        .filter(|&v| v > 0.0)
        .fold(1.0f64, f64::min);
    AttractorSearch::with_resolution(n, eps)
}

/// Common length of all configurations.
pub(crate) fn check_dimensions(examples: &[LabeledExample]) -> Result<usize, LearnError> {
    let n = examples.first().ok_or(LearnError::EmptyTrainingSet)?.config.len();
    for (index, e) in examples.iter().enumerate() {
        if e.config.len() != n {
            return Err(LearnError::InconsistentDimensions { index, expected: n, found: e.config.len() });
        }
    }
    Ok(n)
}

/// Majority label of `counts`; ties go to the smaller label.
pub(crate) fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (label, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = label;
        }
    }
    best
}

/// Independent child seed for unit `stream` of a run seeded with `master`.
pub(crate) fn derive_seed(master: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
