use serde::{Deserialize, Serialize};

use super::{CaError, FuzzyConfiguration, Neighborhood, RuleId};

/// A hybrid null-boundary fuzzy CA in matrix form.
///
/// Row `i` of the dependency matrix `T` marks the cells that cell `i` reads;
/// it is banded to `{i-1, i, i+1}`. `F[i]` marks a complemented rule. Out of
/// range neighbours are dropped at construction, so the leftmost cell never
/// depends on a left neighbour and the rightmost never on a right one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<RuleId>", into = "Vec<RuleId>")]
pub struct FmacaDescriptor {
    deps: Vec<Neighborhood>,
    complement: Vec<bool>,
}

impl FmacaDescriptor {
    /// Build the dependency matrix and complement vector of a rule vector.
    pub fn from_rules(rules: &[RuleId]) -> Result<Self, CaError> {
        if rules.is_empty() {
            return Err(CaError::Empty);
        }
        let n = rules.len();
        let deps = rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d = r.dependencies();
                Neighborhood::from_flags(d.left() && i > 0, d.center(), d.right() && i + 1 < n)
            })
            .collect();
        let complement = rules.iter().map(|r| r.is_complemented()).collect();
        Ok(FmacaDescriptor { deps, complement })
    }

    pub fn from_codes(codes: &[u32]) -> Result<Self, CaError> {
        let rules = codes
            .iter()
            .map(|&c| RuleId::from_code(c))
            .collect::<Result<Vec<_>, _>>()?;
        FmacaDescriptor::from_rules(&rules)
    }

    /// Build from an explicit `n x n` 0/1 matrix and complement vector.
    pub fn from_matrix(matrix: &[Vec<u8>], complement: &[bool]) -> Result<Self, CaError> {
        let n = matrix.len();
        if n == 0 {
            return Err(CaError::Empty);
        }
        if complement.len() != n {
            return Err(CaError::DimensionMismatch { expected: n, found: complement.len() });
        }
        let mut deps = Vec::with_capacity(n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(CaError::MalformedMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 if j + 1 >= i && j <= i + 1 => {}
                    1 => return Err(CaError::NotBanded { row: i, col: j }),
                    other => {
                        return Err(CaError::MalformedMatrix(format!(
                            "entry ({i}, {j}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
            let left = i > 0 && row[i - 1] == 1;
            let right = i + 1 < n && row[i + 1] == 1;
            deps.push(Neighborhood::from_flags(left, row[i] == 1, right));
        }
        Ok(FmacaDescriptor { deps, complement: complement.to_vec() })
    }

    /// Every cell keeps its own state.
    pub fn identity(n: usize) -> Self {
        FmacaDescriptor { deps: vec![Neighborhood::CENTER; n], complement: vec![false; n] }
    }

    pub fn n(&self) -> usize {
        self.deps.len()
    }

    pub fn dependency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.n();
        self.deps
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut row = vec![0u8; n];
                if d.left() {
                    row[i - 1] = 1;
                }
                if d.center() {
                    row[i] = 1;
                }
                if d.right() {
                    row[i + 1] = 1;
                }
                row
            })
            .collect()
    }

    pub fn complement_vector(&self) -> &[bool] {
        &self.complement
    }

    pub fn dependencies(&self) -> &[Neighborhood] {
        &self.deps
    }

    /// Canonical rule vector; boundary cells never reference missing neighbours.
    pub fn rules(&self) -> Vec<RuleId> {
        self.deps
            .iter()
            .zip(&self.complement)
            .map(|(&d, &c)| RuleId::new(d, c))
            .collect()
    }

    pub fn rule_codes(&self) -> Vec<u32> {
        self.rules().into_iter().map(u32::from).collect()
    }

    /// One synchronous update: `q_i = min(1, sum_j T[i][j] p_j)`, negated where `F[i]`.
    pub fn step(&self, p: &FuzzyConfiguration) -> Result<FuzzyConfiguration, CaError> {
        self.check_len(p.len())?;
        let mut out = vec![0.0; self.n()];
        self.step_cells(p.cells(), &mut out);
        Ok(FuzzyConfiguration::from_raw(out))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<(), CaError> {
        if len != self.n() {
            return Err(CaError::DimensionMismatch { expected: self.n(), found: len });
        }
        Ok(())
    }

    pub(crate) fn step_cells(&self, src: &[f64], dst: &mut [f64]) {
        for (i, (d, out)) in self.deps.iter().zip(dst.iter_mut()).enumerate() {
            let mut sum = 0.0;
            if d.left() {
                sum += src[i - 1];
            }
            if d.center() {
                sum += src[i];
            }
            if d.right() {
                sum += src[i + 1];
            }
            let g = if sum > 1.0 { 1.0 } else { sum };
            *out = if self.complement[i] { 1.0 - g } else { g };
        }
    }
}

impl TryFrom<Vec<RuleId>> for FmacaDescriptor {
    type Error = CaError;
    fn try_from(rules: Vec<RuleId>) -> Result<Self, CaError> {
        FmacaDescriptor::from_rules(&rules)
    }
}

impl From<FmacaDescriptor> for Vec<RuleId> {
    fn from(d: FmacaDescriptor) -> Vec<RuleId> {
        d.rules()
    }
}
