//! Training and scoring of every supported algorithm behind one interface,
//! shared by the command line and the benchmark tests.

use std::fmt;
use std::str::FromStr;

use log::info;

use crate::baselines::{estimate_codon_table, HexamerModel, LpModel, NaiveBayesModel};
use crate::io::{generate_synthetic, Model, ModelFile, ModelMetadata, ResultRow, SyntheticSpec};
use crate::learn::{build_tree, AccuracyReport, LabeledExample, LearnError, TreeConfig};
use crate::sequences::{encode, EncodingScheme, Label, LabeledWindow};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Fmaca,
    Lp,
    Nb,
    Dicodon,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Fmaca, Algorithm::Lp, Algorithm::Nb, Algorithm::Dicodon];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fmaca => "fmaca",
            Algorithm::Lp => "lp",
            Algorithm::Nb => "nb",
            Algorithm::Dicodon => "dicodon",
        }
    }

    /// Row title in printed accuracy tables.
    pub fn title(self) -> &'static str {
        match self {
            Algorithm::Fmaca => "FMACA",
            Algorithm::Lp => "Codon LLR",
            Algorithm::Nb => "Naive Bayes",
            Algorithm::Dicodon => "Dicodon",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected fmaca, lp, nb or dicodon)"))
    }
}

/// Window encoding requested for FMACA training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EncodingChoice {
    /// One cell per base.
    #[default]
    Base,
    /// One cell per codon, scaled by the training coding table.
    Codon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOptions {
    pub encoding: EncodingChoice,
    pub tree: TreeConfig,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions { encoding: EncodingChoice::Base, tree: TreeConfig::default() }
    }
}

fn window_length(windows: &[LabeledWindow]) -> Result<usize> {
    let first = windows.first().ok_or(LearnError::EmptyTrainingSet)?.len();
    if let Some((index, w)) = windows.iter().enumerate().find(|(_, w)| w.len() != first) {
        return Err(LearnError::InconsistentDimensions { index, expected: first, found: w.len() }.into());
    }
    Ok(first)
}

/// Encode labelled windows as CA training examples.
pub fn to_examples(windows: &[LabeledWindow], scheme: &EncodingScheme) -> Result<Vec<LabeledExample>> {
    windows
        .iter()
        .map(|w| Ok(LabeledExample::new(encode(w, scheme)?, w.label.index())))
        .collect()
}

/// Train one algorithm on `train` and package it with its metadata.
pub fn train_model(algorithm: Algorithm, train: &[LabeledWindow], opts: &TrainOptions) -> Result<ModelFile> {
    let length = window_length(train)?;
    let seed = opts.tree.ga.seed;
    let (model, encoding) = match algorithm {
        Algorithm::Fmaca => {
            let scheme = match opts.encoding {
                EncodingChoice::Base => EncodingScheme::BaseQuartile,
                EncodingChoice::Codon => EncodingScheme::CodonFreq(estimate_codon_table(train, Label::Coding)?),
            };
            let examples = to_examples(train, &scheme)?;
            let tree = build_tree(&examples, 2, &opts.tree)?;
            info!("fmaca tree: depth {}, {} leaves", tree.depth(), tree.root.leaf_count());
            (Model::FmacaTree(tree), Some(scheme))
        }
        Algorithm::Lp => (Model::Lp(LpModel::train(train)?), None),
        Algorithm::Nb => (Model::Nb(NaiveBayesModel::train(train)?), None),
        Algorithm::Dicodon => (Model::Hexamer(HexamerModel::train(train)?), None),
    };
    Ok(ModelFile::new(model, ModelMetadata { seed, encoding, length }))
}

/// Confusion counts of `model` over `test`.
pub fn evaluate_model(model: &ModelFile, test: &[LabeledWindow]) -> Result<AccuracyReport> {
    let mut pairs = Vec::with_capacity(test.len());
    for w in test {
        pairs.push((w.label.index(), model.classify(&w.bases)?.index()));
    }
    Ok(AccuracyReport::from_predictions(2, pairs)?)
}

/// Results-file row for one evaluation.
pub fn result_row(algorithm: Algorithm, length: usize, seed: u64, report: &AccuracyReport) -> ResultRow {
    ResultRow {
        algorithm: algorithm.name().to_string(),
        length,
        coding_acc: report.coding().unwrap_or(0.0),
        noncoding_acc: report.noncoding().unwrap_or(0.0),
        overall_acc: report.overall(),
        seed,
    }
}

/// Accuracy of always predicting the most frequent training label.
pub fn majority_baseline(train: &[LabeledWindow], test: &[LabeledWindow]) -> f64 {
    let coding = train.iter().filter(|w| w.label == Label::Coding).count();
    let guess = if 2 * coding > train.len() { Label::Coding } else { Label::Noncoding };
    test.iter().filter(|w| w.label == guess).count() as f64 / test.len() as f64
}

/// Seed of the test half of [`synthetic_benchmark`], kept apart from the
/// training stream so neighbouring seeds never share windows.
pub fn test_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

/// Independent synthetic train and test sets with the default codon usage,
/// each with reverse complements appended. Also returns the coding table's
/// divergence from uniform in nats.
pub fn synthetic_benchmark(
    length: usize,
    train_per_class: usize,
    test_per_class: usize,
    seed: u64,
) -> Result<(Vec<LabeledWindow>, Vec<LabeledWindow>, f64)> {
    let train_spec = SyntheticSpec::new(length, train_per_class, train_per_class, seed);
    let test_spec = SyntheticSpec::new(length, test_per_class, test_per_class, test_seed(seed));
    let train = generate_synthetic(&train_spec)?;
    let test = generate_synthetic(&test_spec)?;
    Ok((train, test, train_spec.coding_divergence()))
}
