use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::IoError;
use crate::baselines::CodonTable;
use crate::sequences::{Codon, Label, LabeledWindow, Origin, Strand};

/// Window lengths used by the benchmark tables and graphs.
pub const BENCHMARK_LENGTHS: [usize; 4] = [54, 108, 162, 252];

const BASES: [char; 4] = ['A', 'C', 'G', 'T'];

/// Parameters of the synthetic coding / non-coding benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub length: usize,
    pub n_coding: usize,
    pub n_noncoding: usize,
    pub coding_table: CodonTable,
    /// Probabilities of `A, C, G, T` in non-coding windows.
    pub noncoding_bases: [f64; 4],
    pub seed: u64,
    /// Append the reverse complement of every window.
    pub add_revcomp: bool,
}

impl SyntheticSpec {
    /// Default codon usage, uniform non-coding bases, reverse complements on.
    pub fn new(length: usize, n_coding: usize, n_noncoding: usize, seed: u64) -> Self {
        SyntheticSpec {
            length,
            n_coding,
            n_noncoding,
            coding_table: default_coding_table(),
            noncoding_bases: [0.25; 4],
            seed,
            add_revcomp: true,
        }
    }

    pub fn validate(&self) -> Result<(), IoError> {
        if self.length == 0 || !self.length.is_multiple_of(3) {
            return Err(IoError::BadSpec(format!("length {} must be a positive multiple of 3", self.length)));
        }
        if self.n_coding == 0 || self.n_noncoding == 0 {
            return Err(IoError::BadSpec("both class counts must be positive".into()));
        }
        let sum: f64 = self.noncoding_bases.iter().sum();
        if self.noncoding_bases.iter().any(|&p| !p.is_finite() || p < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err(IoError::BadSpec(format!("non-coding base distribution sums to {sum}")));
        }
        Ok(())
    }

    /// KL divergence of the coding table from uniform codon usage, in nats.
    pub fn coding_divergence(&self) -> f64 {
        self.coding_table.kl_from_uniform()
    }
}

/// A skewed, gene-like codon usage: position-specific base preferences (GC
/// rich third position, purine rich first) with stop codons suppressed.
/// About 0.67 nats from uniform.
pub fn default_coding_table() -> CodonTable {
    const FIRST: [f64; 4] = [0.25, 0.15, 0.50, 0.10];
    const SECOND: [f64; 4] = [0.35, 0.20, 0.10, 0.35];
    const THIRD: [f64; 4] = [0.05, 0.45, 0.45, 0.05];
    let weights: Vec<f64> = Codon::all()
        .map(|c| {
            let i = c.index();
            let w = FIRST[i >> 4] * SECOND[(i >> 2) & 3] * THIRD[i & 3];
            if matches!(c.to_string().as_str(), "TAA" | "TAG" | "TGA") {
                w * 0.1
            } else {
                w
            }
        })
        .collect();
    CodonTable::from_weights(&weights).expect("weights are positive")
}

/// Draw the benchmark: each coding window is `length / 3` independent codons
/// from the coding table, each non-coding window `length` independent bases.
/// Coding windows come first, then non-coding, then (optionally) the reverse
/// complement of every window in the same order. Deterministic in `seed`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Vec<LabeledWindow>, IoError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let codons = WeightedIndex::new(spec.coding_table.frequencies()).expect("valid table");
    let bases = WeightedIndex::new(spec.noncoding_bases).map_err(|e| IoError::BadSpec(e.to_string()))?;

    let mut out = Vec::with_capacity((spec.n_coding + spec.n_noncoding) * 2);
    let origin = |kind: &str, i: usize| Origin {
        seq_id: format!("synthetic-{kind}-{i}"),
        offset: 1,
        strand: Strand::Forward,
    };
    for i in 0..spec.n_coding {
        let s: String = (0..spec.length / 3)
            .map(|_| Codon::from_index(codons.sample(&mut rng)).expect("index < 64").to_string())
            .collect();
        out.push(LabeledWindow::new(&s, Label::Coding, origin("coding", i))?);
    }
    for i in 0..spec.n_noncoding {
        let s: String = (0..spec.length).map(|_| BASES[bases.sample(&mut rng)]).collect();
        out.push(LabeledWindow::new(&s, Label::Noncoding, origin("noncoding", i))?);
    }
    if spec.add_revcomp {
        let reversed: Vec<_> = out.iter().map(LabeledWindow::reverse_complement).collect();
        out.extend(reversed);
    }
    Ok(out)
}
