use serde::{Deserialize, Serialize};
use std::fmt;

use super::CaError;

/// A single membership degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FuzzyState(f64);

impl FuzzyState {
    pub const ZERO: FuzzyState = FuzzyState(0.0);
    pub const ONE: FuzzyState = FuzzyState(1.0);

    pub fn new(value: f64) -> Result<Self, CaError> {
        if (0.0..=1.0).contains(&value) {
            Ok(FuzzyState(value))
        } else {
            Err(CaError::InvalidState(value))
        }
    }

    /// Bounded sum of already-valid states; the result is valid by construction.
    pub(crate) fn saturating(value: f64) -> Self {
        FuzzyState(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        FuzzyState(1.0 - self.0)
    }
}

impl TryFrom<f64> for FuzzyState {
    type Error = CaError;
    fn try_from(v: f64) -> Result<Self, CaError> {
        FuzzyState::new(v)
    }
}

impl From<FuzzyState> for f64 {
    fn from(s: FuzzyState) -> f64 {
        s.0
    }
}

/// The state of a whole automaton: one fuzzy value per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FuzzyConfiguration {
    cells: Vec<f64>,
}

impl FuzzyConfiguration {
    pub fn new(cells: Vec<f64>) -> Result<Self, CaError> {
        if let Some(&bad) = cells.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(CaError::InvalidState(bad));
        }
        Ok(FuzzyConfiguration { cells })
    }

    pub fn zeros(n: usize) -> Self {
        FuzzyConfiguration { cells: vec![0.0; n] }
    }

    /// Caller guarantees every value is in `[0, 1]`.
    pub(crate) fn from_raw(cells: Vec<f64>) -> Self {
        debug_assert!(cells.iter().all(|v| (0.0..=1.0).contains(v)));
        FuzzyConfiguration { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn get(&self, i: usize) -> Option<FuzzyState> {
        self.cells.get(i).map(|&v| FuzzyState(v))
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.cells
    }

    /// Each cell divided by `quantum` and rounded to the nearest integer.
    pub fn quantize(&self, quantum: f64) -> Vec<i64> {
        quantize_into(&self.cells, quantum)
    }
}

pub(crate) fn quantize_into(cells: &[f64], quantum: f64) -> Vec<i64> {
    cells.iter().map(|v| (v / quantum).round() as i64).collect()
}

impl TryFrom<Vec<f64>> for FuzzyConfiguration {
    type Error = CaError;
    fn try_from(v: Vec<f64>) -> Result<Self, CaError> {
        FuzzyConfiguration::new(v)
    }
}

impl From<FuzzyConfiguration> for Vec<f64> {
    fn from(c: FuzzyConfiguration) -> Vec<f64> {
        c.cells
    }
}

/// Two-decimal, space separated; the format used by trajectory printouts.
impl fmt::Display for FuzzyConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v:.2}")?;
        }
        Ok(())
    }
}
