//! Statistical comparators: codon log-likelihood ratio, multinomial naive
//! Bayes over codons, and dicodon (hexamer) log-likelihood ratio.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sequences::{split_codons, split_hexamers, Codon, Label, LabeledWindow, SequenceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BaselineError {
    #[error("no {0} windows to estimate from")]
    NoData(Label),
    #[error("training data has no {0} windows")]
    MissingClass(Label),
    #[error("invalid frequency table: {0}")]
    InvalidTable(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

const TABLE_TOLERANCE: f64 = 1e-9;

fn validate_frequencies(freq: &[f64], expected: usize) -> Result<(), BaselineError> {
    if freq.len() != expected {
        return Err(BaselineError::InvalidTable(format!(
            "expected {expected} entries, got {}",
            freq.len()
        )));
    }
    if let Some((i, f)) = freq.iter().enumerate().find(|(_, f)| !(**f > 0.0 && f.is_finite())) {
        return Err(BaselineError::InvalidTable(format!("entry {i} is {f}, must be positive")));
    }
    let sum: f64 = freq.iter().sum();
    if (sum - 1.0).abs() > TABLE_TOLERANCE {
        return Err(BaselineError::InvalidTable(format!("entries sum to {sum}")));
    }
    Ok(())
}

/// Frequencies of all 64 codons; strictly positive, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CodonTable {
    freq: Vec<f64>,
}

impl CodonTable {
    pub fn new(freq: [f64; 64]) -> Result<Self, BaselineError> {
        CodonTable::from_vec(freq.to_vec())
    }

    pub fn from_vec(freq: Vec<f64>) -> Result<Self, BaselineError> {
        validate_frequencies(&freq, 64)?;
        Ok(CodonTable { freq })
    }

    /// Build a table from relative weights (normalized here).
    pub fn from_weights(weights: &[f64]) -> Result<Self, BaselineError> {
        let total: f64 = weights.iter().sum();
        CodonTable::from_vec(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform() -> Self {
        CodonTable { freq: vec![1.0 / 64.0; 64] }
    }

    pub fn get(&self, codon: Codon) -> f64 {
        self.freq[codon.index()]
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.freq
    }

    pub fn max(&self) -> f64 {
        self.freq.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.freq.iter().copied().fold(f64::MAX, f64::min)
    }

    /// Kullback-Leibler divergence from the uniform table, in nats.
    pub fn kl_from_uniform(&self) -> f64 {
        self.freq.iter().map(|&p| p * (p * 64.0).ln()).sum()
    }
}

impl TryFrom<Vec<f64>> for CodonTable {
    type Error = BaselineError;
    fn try_from(v: Vec<f64>) -> Result<Self, BaselineError> {
        CodonTable::from_vec(v)
    }
}

impl From<CodonTable> for Vec<f64> {
    fn from(t: CodonTable) -> Vec<f64> {
        t.freq
    }
}

fn codon_counts<'a>(
    windows: impl Iterator<Item = &'a LabeledWindow>,
) -> Result<(Vec<u64>, usize), BaselineError> {
    let mut counts = vec![0u64; 64];
    let mut n = 0;
    for w in windows {
        for c in split_codons(&w.bases)? {
            counts[c.index()] += 1;
        }
        n += 1;
    }
    Ok((counts, n))
}

fn laplace(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    let denom = (total + counts.len() as u64) as f64;
    counts.iter().map(|&c| (c + 1) as f64 / denom).collect()
}

/// Laplace-smoothed codon frequencies `(count + 1) / (total + 64)` over the
/// frame-0 codons of every window carrying `label`.
pub fn estimate_codon_table(windows: &[LabeledWindow], label: Label) -> Result<CodonTable, BaselineError> {
    let (counts, n) = codon_counts(windows.iter().filter(|w| w.label == label))?;
    if n == 0 {
        return Err(BaselineError::NoData(label));
    }
    Ok(CodonTable { freq: laplace(&counts) })
}

/// Null model for the codon log-likelihood ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Background {
    /// The same frequency for every codon, e.g. `1/64` or a rounded `0.0156`.
    Uniform(f64),
    Table(CodonTable),
}

impl Background {
    fn get(&self, codon: Codon) -> f64 {
        match self {
            Background::Uniform(f) => *f,
            Background::Table(t) => t.get(codon),
        }
    }
}

impl Default for Background {
    fn default() -> Self {
        Background::Uniform(1.0 / 64.0)
    }
}

/// Both products of the codon log-likelihood ratio, in log10 space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpBreakdown {
    pub log10_coding: f64,
    pub log10_background: f64,
}

impl LpBreakdown {
    pub fn lp(&self) -> f64 {
        self.log10_coding - self.log10_background
    }

    pub fn coding_probability(&self) -> f64 {
        10f64.powf(self.log10_coding)
    }

    pub fn background_probability(&self) -> f64 {
        10f64.powf(self.log10_background)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub coding: CodonTable,
    pub background: Background,
}

impl LpModel {
    pub fn new(coding: CodonTable, background: Background) -> Result<Self, BaselineError> {
        if let Background::Uniform(f) = background {
            if !(f > 0.0 && f <= 1.0) {
                return Err(BaselineError::InvalidTable(format!("background frequency {f}")));
            }
        }
        Ok(LpModel { coding, background })
    }

    /// Coding table from the coding windows, uniform `1/64` background.
    pub fn train(windows: &[LabeledWindow]) -> Result<Self, BaselineError> {
        LpModel::new(estimate_codon_table(windows, Label::Coding)?, Background::default())
    }

    pub fn breakdown(&self, bases: &str) -> Result<LpBreakdown, BaselineError> {
        let mut b = LpBreakdown { log10_coding: 0.0, log10_background: 0.0 };
        for c in split_codons(bases)? {
            b.log10_coding += self.coding.get(c).log10();
            b.log10_background += self.background.get(c).log10();
        }
        Ok(b)
    }

    /// `LP(S) = sum_i log10 F(c_i) - log10 F0(c_i)`.
    pub fn score(&self, bases: &str) -> Result<f64, BaselineError> {
        Ok(self.breakdown(bases)?.lp())
    }

    /// Coding iff `LP > 0`; an exact zero is noncoding.
    pub fn classify(&self, bases: &str) -> Result<Label, BaselineError> {
        Ok(if self.score(bases)? > 0.0 { Label::Coding } else { Label::Noncoding })
    }
}

pub fn lp_score(model: &LpModel, bases: &str) -> Result<f64, BaselineError> {
    model.score(bases)
}

pub fn lp_classify(model: &LpModel, bases: &str) -> Result<Label, BaselineError> {
    model.classify(bases)
}

/// Multinomial naive Bayes over frame-0 codons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    /// Natural-log codon frequencies, indexed by `Label::index()`.
    pub log_freq: [Vec<f64>; 2],
    pub log_prior: [f64; 2],
}

impl NaiveBayesModel {
    pub fn from_tables(noncoding: &CodonTable, coding: &CodonTable, coding_prior: f64) -> Self {
        let logs = |t: &CodonTable| t.frequencies().iter().map(|f| f.ln()).collect::<Vec<_>>();
        NaiveBayesModel {
            log_freq: [logs(noncoding), logs(coding)],
            log_prior: [(1.0 - coding_prior).ln(), coding_prior.ln()],
        }
    }

    /// Per-class Laplace-smoothed tables and empirical class priors.
    pub fn train(windows: &[LabeledWindow]) -> Result<Self, BaselineError> {
        let mut tables = Vec::with_capacity(2);
        let mut counts = [0usize; 2];
        for label in Label::ALL {
            let (c, n) = codon_counts(windows.iter().filter(|w| w.label == label))?;
            if n == 0 {
                return Err(BaselineError::MissingClass(label));
            }
            counts[label.index()] = n;
            tables.push(CodonTable { freq: laplace(&c) });
        }
        let prior = counts[1] as f64 / (counts[0] + counts[1]) as f64;
        Ok(NaiveBayesModel::from_tables(&tables[0], &tables[1], prior))
    }

    pub fn log_posteriors(&self, bases: &str) -> Result<[f64; 2], BaselineError> {
        let mut score = self.log_prior;
        for c in split_codons(bases)? {
            score[0] += self.log_freq[0][c.index()];
            score[1] += self.log_freq[1][c.index()];
        }
        Ok(score)
    }

    /// Argmax of the class scores; ties go to noncoding.
    pub fn classify(&self, bases: &str) -> Result<Label, BaselineError> {
        let [non, coding] = self.log_posteriors(bases)?;
        Ok(if coding > non { Label::Coding } else { Label::Noncoding })
    }
}

pub fn nb_train(windows: &[LabeledWindow]) -> Result<NaiveBayesModel, BaselineError> {
    NaiveBayesModel::train(windows)
}

pub fn nb_classify(model: &NaiveBayesModel, bases: &str) -> Result<Label, BaselineError> {
    model.classify(bases)
}

/// Frequencies of all 4096 hexamers; strictly positive, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HexamerTable {
    freq: Vec<f64>,
}

impl HexamerTable {
    pub const SIZE: usize = 4096;

    pub fn from_vec(freq: Vec<f64>) -> Result<Self, BaselineError> {
        validate_frequencies(&freq, Self::SIZE)?;
        Ok(HexamerTable { freq })
    }

    pub fn uniform() -> Self {
        HexamerTable { freq: vec![1.0 / Self::SIZE as f64; Self::SIZE] }
    }

    /// Hexamer index `0..4096`; base-4 digits with `A < C < G < T`.
    pub fn get(&self, hexamer: usize) -> f64 {
        self.freq[hexamer]
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.freq
    }
}

impl TryFrom<Vec<f64>> for HexamerTable {
    type Error = BaselineError;
    fn try_from(v: Vec<f64>) -> Result<Self, BaselineError> {
        HexamerTable::from_vec(v)
    }
}

impl From<HexamerTable> for Vec<f64> {
    fn from(t: HexamerTable) -> Vec<f64> {
        t.freq
    }
}

/// Laplace-smoothed frequencies of frame-0, non-overlapping hexamers.
pub fn estimate_hexamer_table(windows: &[LabeledWindow], label: Label) -> Result<HexamerTable, BaselineError> {
    let mut counts = vec![0u64; HexamerTable::SIZE];
    let mut n = 0;
    for w in windows.iter().filter(|w| w.label == label) {
        for h in split_hexamers(&w.bases)? {
            counts[h] += 1;
        }
        n += 1;
    }
    if n == 0 {
        return Err(BaselineError::NoData(label));
    }
    Ok(HexamerTable { freq: laplace(&counts) })
}

/// Dicodon usage: hexamer log-likelihood ratio of coding against background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexamerModel {
    pub coding: HexamerTable,
    pub background: HexamerTable,
}

impl HexamerModel {
    /// Coding table from coding windows, background from noncoding windows.
    pub fn train(windows: &[LabeledWindow]) -> Result<Self, BaselineError> {
        let coding = estimate_hexamer_table(windows, Label::Coding)
            .map_err(|_| BaselineError::MissingClass(Label::Coding))?;
        let background = estimate_hexamer_table(windows, Label::Noncoding)
            .map_err(|_| BaselineError::MissingClass(Label::Noncoding))?;
        Ok(HexamerModel { coding, background })
    }

    pub fn score(&self, bases: &str) -> Result<f64, BaselineError> {
        hexamer_score(&self.coding, &self.background, bases)
    }

    pub fn classify(&self, bases: &str) -> Result<Label, BaselineError> {
        Ok(if self.score(bases)? > 0.0 { Label::Coding } else { Label::Noncoding })
    }
}

pub fn hexamer_score(table: &HexamerTable, background: &HexamerTable, bases: &str) -> Result<f64, BaselineError> {
    Ok(split_hexamers(bases)?
        .into_iter()
        .map(|h| table.get(h).log10() - background.get(h).log10())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{Origin, Strand};
    use proptest::prelude::*;

    fn window(bases: &str, label: Label) -> LabeledWindow {
        LabeledWindow::new(bases, label, Origin { seq_id: "t".into(), offset: 1, strand: Strand::Forward }).unwrap()
    }

    fn codon(s: &str) -> usize {
        Codon::parse(s).unwrap().index()
    }

    /// F(AGG) = 0.22, F(ACC) = 0.38, remaining mass spread evenly.
    fn example_table() -> CodonTable {
        let mut w = vec![0.40 / 62.0; 64];
        w[codon("AGG")] = 0.22;
        w[codon("ACC")] = 0.38;
        CodonTable::from_vec(w).unwrap()
    }

    #[test]
    fn table_validation() {
        assert!(CodonTable::from_vec(vec![1.0 / 64.0; 63]).is_err());
        let mut w = vec![1.0 / 64.0; 64];
        w[0] = 0.0;
        assert!(CodonTable::from_vec(w).is_err());
        assert!(CodonTable::from_vec(vec![0.0156; 64]).is_err());
        assert!(CodonTable::uniform().kl_from_uniform().abs() < 1e-15);
    }

    #[test]
    fn estimation_needs_data() {
        assert_eq!(estimate_codon_table(&[], Label::Coding), Err(BaselineError::NoData(Label::Coding)));
        let only_non = vec![window("AAA", Label::Noncoding)];
        assert_eq!(estimate_codon_table(&only_non, Label::Coding), Err(BaselineError::NoData(Label::Coding)));
    }

    #[test]
    fn estimation_of_balanced_corpus_is_uniform() {
        let all: String = Codon::all().map(|c| c.to_string()).collect();
        let t = estimate_codon_table(&[window(&all, Label::Coding)], Label::Coding).unwrap();
        assert!(t.frequencies().iter().all(|&f| (f - 0.015625).abs() < 1e-15));
    }

    #[test]
    fn laplace_smoothing_by_hand() {
        let t = estimate_codon_table(&[window("AGGAGG", Label::Coding)], Label::Coding).unwrap();
        for c in Codon::all() {
            let expected = if c.to_string() == "AGG" { 3.0 / 66.0 } else { 1.0 / 66.0 };
            assert!((t.get(c) - expected).abs() < 1e-15);
        }
        let sum: f64 = t.frequencies().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn codon_llr_example() {
        let model = LpModel::new(example_table(), Background::Uniform(0.0156)).unwrap();
        let b = model.breakdown("AGGACC").unwrap();
        assert!((b.coding_probability() - 0.0836).abs() < 1e-12);
        assert!((b.background_probability() / 2.4336e-4 - 1.0).abs() < 1e-9);
        assert!((b.lp() - (0.0836f64 / 0.00024336).log10()).abs() < 1e-12);
        assert!((b.lp() - 2.5359).abs() < 1e-3);
        assert_eq!(model.classify("AGGACC").unwrap(), Label::Coding);

        let exact = LpModel::new(example_table(), Background::default()).unwrap();
        assert!((exact.score("AGGACC").unwrap() - 2.53456).abs() < 1e-4);
    }

    #[test]
    fn codon_llr_edge_cases() {
        let same = LpModel::new(CodonTable::uniform(), Background::default()).unwrap();
        assert_eq!(same.score("AGGACCTTT").unwrap(), 0.0);
        assert_eq!(same.classify("AGGACCTTT").unwrap(), Label::Noncoding);
        assert_eq!(same.score("").unwrap(), 0.0);
        assert!(matches!(same.score("AGGA"), Err(BaselineError::Sequence(SequenceError::BadLength { .. }))));
        assert!(matches!(same.score("AGN"), Err(BaselineError::Sequence(SequenceError::AmbiguousBase { .. }))));

        // AAA and CCC rarer than 1/64 under the coding table: LP is negative.
        let mut w = vec![1.0; 64];
        w[codon("AAA")] = 0.1;
        w[codon("CCC")] = 0.1;
        let rare = LpModel::new(CodonTable::from_weights(&w).unwrap(), Background::default()).unwrap();
        let f = rare.coding.get(Codon::parse("AAA").unwrap());
        assert!(f < 1.0 / 64.0);
        let by_hand = 2.0 * (f.log10() - (1.0f64 / 64.0).log10());
        assert!((rare.score("AAACCC").unwrap() - by_hand).abs() < 1e-12);
        assert_eq!(rare.classify("AAACCC").unwrap(), Label::Noncoding);
    }

    #[test]
    fn naive_bayes_needs_both_classes() {
        let only = vec![window("AAA", Label::Coding)];
        assert_eq!(nb_train(&only), Err(BaselineError::MissingClass(Label::Noncoding)));
    }

    #[test]
    fn naive_bayes_symmetric_data_ties_to_noncoding() {
        let data = vec![window("AAACCC", Label::Coding), window("AAACCC", Label::Noncoding)];
        let m = nb_train(&data).unwrap();
        assert_eq!(m.classify("AAACCC").unwrap(), Label::Noncoding);
        assert_eq!(m.classify("GGG").unwrap(), Label::Noncoding);
    }

    #[test]
    fn naive_bayes_learns_enriched_codon() {
        let data = vec![
            window("AGGAGGTTT", Label::Coding),
            window("AGGCCCTTT", Label::Coding),
            window("CCCTTTGGG", Label::Noncoding),
            window("TTTGGGCCC", Label::Noncoding),
        ];
        let m = nb_train(&data).unwrap();
        // coding: AGG 3+1 of 6+64; noncoding: AGG 0+1 of 6+64. Equal priors.
        let [non, coding] = m.log_posteriors("AGGAGGAGG").unwrap();
        assert!((coding - non - 3.0 * 4f64.ln()).abs() < 1e-12);
        assert_eq!(m.classify("AGGAGGAGG").unwrap(), Label::Coding);
        assert_eq!(m.classify("AGGAGGTTT").unwrap(), Label::Coding);
    }

    #[test]
    fn hexamer_llr() {
        let u = HexamerTable::uniform();
        assert_eq!(hexamer_score(&u, &u, "AGGACC").unwrap(), 0.0);
        // AAAAAA four times as frequent as in the background, same normalizer.
        let total = 4.0 + 4095.0;
        let enriched =
            HexamerTable::from_vec((0..4096).map(|i| if i == 0 { 4.0 / total } else { 1.0 / total }).collect()).unwrap();
        let background = HexamerTable::from_vec(
            (0..4096).map(|i| if i == 0 { 1.0 / total } else { (total - 1.0) / total / 4095.0 }).collect(),
        )
        .unwrap();
        assert!((hexamer_score(&enriched, &background, "AAAAAA").unwrap() - 4f64.log10()).abs() < 1e-12);
        assert!(matches!(hexamer_score(&u, &u, "AAAAAAAAA"), Err(BaselineError::Sequence(SequenceError::BadLength { .. }))));
    }

    fn codon_string(max: usize) -> impl Strategy<Value = String> {
        prop::collection::vec(0usize..64, 0..max)
            .prop_map(|v| v.into_iter().map(|i| Codon::from_index(i).unwrap().to_string()).collect())
    }

    fn random_table() -> impl Strategy<Value = CodonTable> {
        prop::collection::vec(0.01..1.0f64, 64).prop_map(|w| CodonTable::from_weights(&w).unwrap())
    }

    proptest! {
        #[test]
        fn lp_is_additive(t in random_table(), a in codon_string(20), b in codon_string(20)) {
            let m = LpModel::new(t, Background::default()).unwrap();
            let joined = format!("{a}{b}");
            let lhs = m.score(&joined).unwrap();
            let rhs = m.score(&a).unwrap() + m.score(&b).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn naive_bayes_agrees_with_lp_under_equal_priors(t in random_table(), s in codon_string(30)) {
            let lp = LpModel::new(t.clone(), Background::Table(CodonTable::uniform())).unwrap();
            let nb = NaiveBayesModel::from_tables(&CodonTable::uniform(), &t, 0.5);
            prop_assert_eq!(lp.classify(&s).unwrap(), nb.classify(&s).unwrap());
        }

        #[test]
        fn lp_decision_matches_scaled_probability_ratio(t in random_table(), s in codon_string(12), k in 0.1..10.0f64) {
            let m = LpModel::new(t.clone(), Background::default()).unwrap();
            let codons = split_codons(&s).unwrap();
            let p: f64 = codons.iter().map(|&c| t.get(c)).product();
            let p0 = (1.0f64 / 64.0).powi(codons.len() as i32);
            let lp = m.score(&s).unwrap();
            // away from the tie, sign(log(kP / kP0)) is the decision
            prop_assume!(lp.abs() > 1e-9);
            prop_assert_eq!(m.classify(&s).unwrap() == Label::Coding, k * p > k * p0);
        }

        #[test]
        fn estimated_tables_are_valid(seqs in prop::collection::vec(codon_string(10), 1..10)) {
            let windows: Vec<_> = seqs.iter().map(|s| window(s, Label::Coding)).collect();
            let t = estimate_codon_table(&windows, Label::Coding).unwrap();
            let sum: f64 = t.frequencies().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            prop_assert!(t.frequencies().iter().all(|&f| f > 0.0));
        }
    }
}
