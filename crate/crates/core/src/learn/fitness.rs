use rayon::prelude::*;
use std::collections::BTreeMap;

use super::{majority, search_for, LabeledExample, LearnError};
use crate::ca::{AttractorId, AttractorSearch, CaError, FmacaDescriptor};

/// Class histogram of the examples that fell into each attractor basin.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BasinDistribution {
    pub histograms: BTreeMap<AttractorId, Vec<usize>>,
    pub total: usize,
}

impl BasinDistribution {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (AttractorId, usize)>, n_classes: usize) -> Self {
        let mut dist = BasinDistribution::default();
        for (id, label) in pairs {
            let h = dist.histograms.entry(id).or_insert_with(|| vec![0; n_classes]);
            if label >= h.len() {
                h.resize(label + 1, 0);
            }
            h[label] += 1;
            dist.total += 1;
        }
        dist
    }

    pub fn occupied_basins(&self) -> usize {
        self.histograms.len()
    }

    /// Fraction of examples belonging to their basin's majority class.
    pub fn purity(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let agree: usize = self.histograms.values().map(|h| h.iter().copied().max().unwrap_or(0)).sum();
        agree as f64 / self.total as f64
    }

    pub fn majority_label(&self, id: AttractorId) -> Option<usize> {
        self.histograms.get(&id).map(|h| majority(h))
    }
}

/// `purity * min(1, occupied / k_target)`.
pub fn fitness_of_distribution(dist: &BasinDistribution, k_target: usize) -> f64 {
    let quota = if k_target == 0 {
        1.0
    } else {
        (dist.occupied_basins() as f64 / k_target as f64).min(1.0)
    };
    dist.purity() * quota
}

/// Attractor of every example under `desc`, in input order.
pub fn distribute(
    desc: &FmacaDescriptor,
    examples: &[LabeledExample],
    search: &AttractorSearch,
) -> Result<Vec<AttractorId>, CaError> {
    examples
        .par_iter()
        .map(|e| search.run(desc, &e.config).map(|r| r.attractor_id))
        .collect()
}

/// Basin purity of `examples` under `desc`, discounted when fewer than
/// `k_target` basins are occupied.
pub fn fitness(desc: &FmacaDescriptor, examples: &[LabeledExample], k_target: usize) -> Result<f64, LearnError> {
    if examples.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    let n_classes = examples.iter().map(|e| e.label + 1).max().unwrap_or(1);
    let ids = distribute(desc, examples, &search_for(examples))?;
    let dist = BasinDistribution::from_pairs(ids.into_iter().zip(examples.iter().map(|e| e.label)), n_classes);
    Ok(fitness_of_distribution(&dist, k_target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::FuzzyConfiguration;

    fn dist(basins: &[&[usize]]) -> BasinDistribution {
        BasinDistribution::from_pairs(
            basins
                .iter()
                .enumerate()
                .flat_map(|(b, h)| h.iter().enumerate().flat_map(move |(label, &c)| std::iter::repeat_n((AttractorId(b as u64), label), c))),
            2,
        )
    }

    #[test]
    fn fitness_formula_examples() {
        let d = dist(&[&[5, 0], &[1, 4]]);
        assert_eq!(d.total, 10);
        assert!((d.purity() - 0.9).abs() < 1e-15);
        assert!((fitness_of_distribution(&d, 2) - 0.9).abs() < 1e-15);

        let pure = dist(&[&[7, 0]]);
        assert_eq!(fitness_of_distribution(&pure, 1), 1.0);

        let mixed = dist(&[&[3, 3]]);
        assert_eq!(fitness_of_distribution(&mixed, 2), 0.25);
    }

    #[test]
    fn fitness_runs_the_automaton() {
        let ex = |v: &[f64], l| LabeledExample::new(FuzzyConfiguration::new(v.to_vec()).unwrap(), l);
        let examples = vec![ex(&[0.0, 1.0], 0), ex(&[0.0, 1.0], 0), ex(&[1.0, 0.0], 1)];
        let identity = FmacaDescriptor::identity(2);
        assert_eq!(fitness(&identity, &examples, 2).unwrap(), 1.0);
        let zero = FmacaDescriptor::from_codes(&[0, 0]).unwrap();
        let f = fitness(&zero, &examples, 2).unwrap();
        assert!((f - 2.0 / 3.0 * 0.5).abs() < 1e-15);
        assert_eq!(fitness(&identity, &[], 2), Err(LearnError::EmptyTrainingSet));
    }
}
