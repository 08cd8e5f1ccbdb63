use serde::Serialize;

use super::{FmacaTree, LabeledExample, LearnError};

/// Accuracy split by true class, in the shape of a coding / non-coding table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyReport {
    /// `confusion[truth][predicted]`.
    pub confusion: Vec<Vec<usize>>,
}

impl AccuracyReport {
    pub fn from_predictions(
        n_classes: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, LearnError> {
        let mut confusion = vec![vec![0; n_classes]; n_classes];
        let mut any = false;
        for (truth, predicted) in pairs {
            for label in [truth, predicted] {
                if label >= n_classes {
                    return Err(LearnError::LabelOutOfRange { label, classes: n_classes });
                }
            }
            confusion[truth][predicted] += 1;
            any = true;
        }
        if !any {
            return Err(LearnError::EmptyTestSet);
        }
        Ok(AccuracyReport { confusion })
    }

    pub fn total(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }

    /// Accuracy over the examples whose true class is `label`; `None` if
    /// there are none.
    pub fn class_accuracy(&self, label: usize) -> Option<f64> {
        let row = self.confusion.get(label)?;
        let n: usize = row.iter().sum();
        (n > 0).then(|| row[label] as f64 / n as f64)
    }

    pub fn overall(&self) -> f64 {
        let correct: usize = (0..self.confusion.len()).map(|i| self.confusion[i][i]).sum();
        correct as f64 / self.total() as f64
    }

    /// Class 1 in the genomics pipeline.
    pub fn coding(&self) -> Option<f64> {
        self.class_accuracy(1)
    }

    pub fn noncoding(&self) -> Option<f64> {
        self.class_accuracy(0)
    }
}

pub fn evaluate(tree: &FmacaTree, test: &[LabeledExample]) -> Result<AccuracyReport, LearnError> {
    if test.is_empty() {
        return Err(LearnError::EmptyTestSet);
    }
    let mut pairs = Vec::with_capacity(test.len());
    for e in test {
        pairs.push((e.label, tree.classify(&e.config)?.label));
    }
    AccuracyReport::from_predictions(tree.n_classes, pairs)
}
