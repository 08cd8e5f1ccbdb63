use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::fitness::{distribute, fitness_of_distribution, BasinDistribution};
use super::{check_dimensions, majority, search_for, LabeledExample, LearnError};
use crate::ca::{AttractorSearch, FmacaDescriptor, RuleId};

/// What the GA maximizes for a candidate automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Basin purity of all examples times the basin-count quota.
    Resubstitution,
    /// Basins are labelled from one half of each class; the score is the
    /// accuracy of those labels on the other half (unseen basins fall back to
    /// the majority class), times the quota. Falls back to
    /// `Resubstitution` when a class has fewer than two examples.
    HoldOut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub elitism: usize,
    pub tournament_size: usize,
    pub seed: u64,
    pub objective: Objective,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            generations: 50,
            crossover_rate: 0.8,
            mutation_rate: 0.05,
            elitism: 2,
            tournament_size: 3,
            seed: 7,
            objective: Objective::HoldOut,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |m: String| Err(LearnError::InvalidConfig(m));
        if self.population_size < 2 {
            return bad(format!("population_size must be at least 2, got {}", self.population_size));
        }
        if self.elitism >= self.population_size {
            return bad(format!("elitism {} must be below population_size {}", self.elitism, self.population_size));
        }
        for (name, rate) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("{name} must be within [0, 1], got {rate}"));
            }
        }
        if self.tournament_size == 0 {
            return bad("tournament_size must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub descriptor: FmacaDescriptor,
    pub fitness: f64,
    /// Best fitness in the population, initial population first.
    pub best_per_generation: Vec<f64>,
}

type Chromosome = Vec<RuleId>;

struct Evaluator<'a> {
    examples: &'a [LabeledExample],
    k_target: usize,
    n_classes: usize,
    search: AttractorSearch,
    /// `Some(is_validation)` under the hold-out objective.
    holdout: Option<Vec<bool>>,
}

impl<'a> Evaluator<'a> {
    fn new(examples: &'a [LabeledExample], k_target: usize, search: AttractorSearch, cfg: &GaConfig) -> Self {
        let n_classes = examples.iter().map(|e| e.label + 1).max().unwrap_or(1);
        let holdout = match cfg.objective {
            Objective::Resubstitution => None,
            Objective::HoldOut => holdout_mask(examples, n_classes, cfg.seed),
        };
        Evaluator { examples, k_target, n_classes, search, holdout }
    }

    fn score(&self, desc: &FmacaDescriptor) -> f64 {
        // Non-convergent descriptors score zero.
        let Ok(ids) = distribute(desc, self.examples, &self.search) else {
            return 0.0;
        };
        let labels = self.examples.iter().map(|e| e.label);
        match &self.holdout {
            None => {
                let dist = BasinDistribution::from_pairs(ids.into_iter().zip(labels), self.n_classes);
                fitness_of_distribution(&dist, self.k_target)
            }
            Some(is_val) => {
                let fit = BasinDistribution::from_pairs(
                    ids.iter().zip(labels.clone()).zip(is_val).filter(|(_, &v)| !v).map(|((&id, l), _)| (id, l)),
                    self.n_classes,
                );
                let mut class_counts = vec![0; self.n_classes];
                for (l, _) in labels.clone().zip(is_val).filter(|(_, &v)| !v) {
                    class_counts[l] += 1;
                }
                let fallback = majority(&class_counts);
                let (mut correct, mut total) = (0usize, 0usize);
                for ((id, l), _) in ids.iter().zip(labels).zip(is_val).filter(|(_, &v)| v) {
                    total += 1;
                    if fit.majority_label(*id).unwrap_or(fallback) == l {
                        correct += 1;
                    }
                }
                let quota = (fit.occupied_basins() as f64 / self.k_target.max(1) as f64).min(1.0);
                correct as f64 / total as f64 * quota
            }
        }
    }
}

/// Stratified half split: within each class, a seeded shuffle sends the first
/// `ceil(n/2)` examples to fitting and the rest to validation.
fn holdout_mask(examples: &[LabeledExample], n_classes: usize, seed: u64) -> Option<Vec<bool>> {
    let mut by_class = vec![Vec::new(); n_classes];
    for (i, e) in examples.iter().enumerate() {
        by_class[e.label].push(i);
    }
    if by_class.iter().any(|c| c.len() == 1) || examples.len() < 4 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0048_4f4c_444f_5554);
    let mut mask = vec![false; examples.len()];
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &i in &members[members.len().div_ceil(2)..] {
            mask[i] = true;
        }
    }
    Some(mask)
}

fn random_chromosome(n: usize, rng: &mut ChaCha8Rng) -> Chromosome {
    (0..n).map(|_| RuleId::ALL[rng.gen_range(0..RuleId::ALL.len())]).collect()
}

fn canonical(ch: &Chromosome) -> FmacaDescriptor {
    FmacaDescriptor::from_rules(ch).expect("chromosomes are nonempty")
}

/// Fitness of every individual; cached by canonical descriptor so elites and
/// duplicates are evaluated once.
fn evaluate_population(
    pop: &[Chromosome],
    eval: &Evaluator<'_>,
    cache: &mut HashMap<FmacaDescriptor, f64>,
) -> Vec<f64> {
    let descs: Vec<FmacaDescriptor> = pop.iter().map(canonical).collect();
    let mut pending: Vec<&FmacaDescriptor> = descs.iter().filter(|d| !cache.contains_key(*d)).collect();
    pending.sort_by_key(|d| d.rule_codes());
    pending.dedup();
    let scored: Vec<(FmacaDescriptor, f64)> =
        pending.par_iter().map(|d| ((*d).clone(), eval.score(d))).collect();
    cache.extend(scored);
    descs.iter().map(|d| cache[d]).collect()
}

fn tournament(fits: &[f64], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut best = rng.gen_range(0..fits.len());
    for _ in 1..size {
        let c = rng.gen_range(0..fits.len());
        if fits[c] > fits[best] || (fits[c] == fits[best] && c < best) {
            best = c;
        }
    }
    best
}

fn best_index(fits: &[f64]) -> usize {
    let mut best = 0;
    for (i, &f) in fits.iter().enumerate() {
        if f > fits[best] {
            best = i;
        }
    }
    best
}

/// Search for an automaton whose attractor basins separate the classes of
/// `examples` into (at least) `k` basins.
///
/// Chromosomes carry one rule per cell, so every individual is a valid
/// banded dependency matrix plus complement vector. Deterministic in
/// `cfg.seed`; fitness evaluation runs in parallel.
pub fn synthesize_fmaca(examples: &[LabeledExample], k: usize, cfg: &GaConfig) -> Result<GaOutcome, LearnError> {
    if examples.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    synthesize_with_search(examples, k, cfg, &search_for(examples))
}

pub fn synthesize_with_search(
    examples: &[LabeledExample],
    k: usize,
    cfg: &GaConfig,
    search: &AttractorSearch,
) -> Result<GaOutcome, LearnError> {
    cfg.validate()?;
    let n = check_dimensions(examples)?;
    let eval = Evaluator::new(examples, k, *search, cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cache = HashMap::new();

    let mut pop: Vec<Chromosome> = (0..cfg.population_size).map(|_| random_chromosome(n, &mut rng)).collect();
    let mut fits = evaluate_population(&pop, &eval, &mut cache);
    let mut best_per_generation = vec![fits[best_index(&fits)]];
    let mut best = pop[best_index(&fits)].clone();
    let mut best_fit = fits[best_index(&fits)];

    for _ in 0..cfg.generations {
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| fits[b].total_cmp(&fits[a]).then(a.cmp(&b)));
        let mut next: Vec<Chromosome> = order[..cfg.elitism].iter().map(|&i| pop[i].clone()).collect();
        while next.len() < cfg.population_size {
            let mut a = pop[tournament(&fits, cfg.tournament_size, &mut rng)].clone();
            let mut b = pop[tournament(&fits, cfg.tournament_size, &mut rng)].clone();
            if n > 1 && rng.gen::<f64>() < cfg.crossover_rate {
                let point = rng.gen_range(1..n);
                a[point..].swap_with_slice(&mut b[point..]);
            }
            for child in [&mut a, &mut b] {
                for gene in child.iter_mut() {
                    if rng.gen::<f64>() < cfg.mutation_rate {
                        *gene = RuleId::ALL[rng.gen_range(0..RuleId::ALL.len())];
                    }
                }
            }
            next.push(a);
            if next.len() < cfg.population_size {
                next.push(b);
            }
        }
        pop = next;
        fits = evaluate_population(&pop, &eval, &mut cache);
        let gen_best = best_index(&fits);
        best_per_generation.push(fits[gen_best]);
        if fits[gen_best] > best_fit {
            best_fit = fits[gen_best];
            best = pop[gen_best].clone();
        }
    }

    Ok(GaOutcome { descriptor: canonical(&best), fitness: best_fit, best_per_generation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::FuzzyConfiguration;
    use crate::learn::fitness;

    fn ex(v: &[f64], l: usize) -> LabeledExample {
        LabeledExample::new(FuzzyConfiguration::new(v.to_vec()).unwrap(), l)
    }

    fn two_fixed_points() -> Vec<LabeledExample> {
        let mut out = Vec::new();
        for _ in 0..6 {
            out.push(ex(&[0.0, 1.0 / 3.0, 1.0, 0.0], 0));
            out.push(ex(&[1.0, 0.0, 2.0 / 3.0, 1.0 / 3.0], 1));
        }
        out
    }

    #[test]
    fn config_validation() {
        assert!(GaConfig::default().validate().is_ok());
        let bad = [
            GaConfig { population_size: 1, elitism: 0, ..GaConfig::default() },
            GaConfig { elitism: 50, ..GaConfig::default() },
            GaConfig { mutation_rate: 1.5, ..GaConfig::default() },
            GaConfig { crossover_rate: -0.1, ..GaConfig::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(LearnError::InvalidConfig(_))));
        }
    }

    #[test]
    fn separable_classes_reach_full_fitness() {
        let examples = two_fixed_points();
        // the identity automaton is in the search space and scores 1.0
        assert_eq!(fitness(&FmacaDescriptor::identity(4), &examples, 2).unwrap(), 1.0);
        for objective in [Objective::Resubstitution, Objective::HoldOut] {
            let cfg = GaConfig { objective, ..GaConfig::default() };
            let out = synthesize_fmaca(&examples, 2, &cfg).unwrap();
            assert_eq!(out.fitness, 1.0);
            assert_eq!(fitness(&out.descriptor, &examples, 2).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_class_is_trivially_pure() {
        let examples: Vec<_> = (0..5).map(|i| ex(&[i as f64 / 5.0, 0.5], 0)).collect();
        let out = synthesize_fmaca(&examples, 1, &GaConfig::default()).unwrap();
        assert_eq!(out.fitness, 1.0);
    }

    #[test]
    fn degenerate_population_still_returns() {
        let cfg = GaConfig { population_size: 2, generations: 0, elitism: 1, ..GaConfig::default() };
        let out = synthesize_fmaca(&two_fixed_points(), 2, &cfg).unwrap();
        assert_eq!(out.best_per_generation.len(), 1);
        assert_eq!(out.descriptor.n(), 4);
        assert!((0.0..=1.0).contains(&out.fitness));
    }

    #[test]
    fn empty_training_set_is_rejected() {
        assert_eq!(synthesize_fmaca(&[], 2, &GaConfig::default()), Err(LearnError::EmptyTrainingSet));
    }

    fn noisy_examples() -> Vec<LabeledExample> {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        (0..40)
            .map(|i| {
                let cells: Vec<f64> = (0..10).map(|_| rng.gen_range(0..4) as f64 / 3.0).collect();
                ex(&cells, i % 2)
            })
            .collect()
    }

    #[test]
    fn deterministic_and_elitist() {
        let examples = noisy_examples();
        let cfg = GaConfig { generations: 15, population_size: 20, ..GaConfig::default() };
        let a = synthesize_fmaca(&examples, 2, &cfg).unwrap();
        let b = synthesize_fmaca(&examples, 2, &cfg).unwrap();
        assert_eq!(a, b);
        for w in a.best_per_generation.windows(2) {
            assert!(w[1] >= w[0], "{:?}", a.best_per_generation);
        }
        let other = synthesize_fmaca(&examples, 2, &GaConfig { seed: 8, ..cfg }).unwrap();
        assert_eq!(other.best_per_generation.len(), 16);
    }
}
