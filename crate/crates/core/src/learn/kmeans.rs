use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{derive_seed, LearnError};

/// Restarts per candidate k in [`distinct_kmeans`].
pub const RESTARTS: usize = 5;
/// Elbow threshold on the MSE gain, as a fraction of the one-cluster MSE.
pub const ELBOW_THRESHOLD: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub k: usize,
    pub centers: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    /// Sum of squared distances of each point to its assigned center.
    pub ss_within: f64,
    /// `ss_within / ((N - k) * b)` with `b` the vector dimension.
    pub mse: f64,
    pub iterations: usize,
    /// `ss_within` after every assignment step, initial assignment first.
    pub ss_history: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn validate(points: &[Vec<f64>], k: usize) -> Result<usize, LearnError> {
    let first = points.first().ok_or(LearnError::EmptyInput)?;
    let dim = first.len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(LearnError::RaggedInput);
    }
    if k == 0 || k >= points.len() {
        return Err(LearnError::BadK { k, n: points.len() });
    }
    Ok(dim)
}

/// k-means++ seeding.
fn init_centers(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centers = vec![points[rng.gen_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let idx = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = points.len() - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.gen_range(0..points.len())
        };
        let c = points[idx].clone();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centers.push(c);
    }
    centers
}

/// Nearest center under squared Euclidean distance; ties go to the lower index.
fn assign(points: &[Vec<f64>], centers: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let mut ss = 0.0;
    let assignments = points
        .iter()
        .map(|p| {
            let mut best = 0;
            let mut best_d = sq_dist(p, &centers[0]);
            for (j, c) in centers.iter().enumerate().skip(1) {
                let d = sq_dist(p, c);
                if d < best_d {
                    best = j;
                    best_d = d;
                }
            }
            ss += best_d;
            best
        })
        .collect();
    (assignments, ss)
}

/// Means of the assigned points; an empty cluster keeps its previous center.
/// Sums are shifted by the cluster's first member so identical points give
/// their own value back exactly.
fn update(points: &[Vec<f64>], assignments: &[usize], centers: &mut [Vec<f64>]) {
    let dim = points[0].len();
    let mut pivots: Vec<Option<&Vec<f64>>> = vec![None; centers.len()];
    let mut sums = vec![vec![0.0; dim]; centers.len()];
    let mut counts = vec![0usize; centers.len()];
    for (p, &a) in points.iter().zip(assignments) {
        let pivot = *pivots[a].get_or_insert(p);
        counts[a] += 1;
        for ((s, v), r) in sums[a].iter_mut().zip(p).zip(pivot) {
            *s += v - r;
        }
    }
    for (((c, s), &n), pivot) in centers.iter_mut().zip(sums).zip(&counts).zip(pivots) {
        if let Some(pivot) = pivot {
            *c = s.into_iter().zip(pivot).map(|(v, r)| r + v / n as f64).collect();
        }
    }
}

fn mse(ss: f64, n: usize, k: usize, dim: usize) -> f64 {
    ss / ((n - k) * dim) as f64
}

/// Lloyd iteration from k-means++ seeds until the assignment stops changing
/// or `max_iters` updates have run.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, max_iters: usize) -> Result<KMeansResult, LearnError> {
    let dim = validate(points, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = init_centers(points, k, &mut rng);
    let (mut assignments, mut ss) = assign(points, &centers);
    let mut ss_history = vec![ss];
    let mut iterations = 0;
    while iterations < max_iters {
        update(points, &assignments, &mut centers);
        let (next, next_ss) = assign(points, &centers);
        iterations += 1;
        ss = next_ss;
        ss_history.push(ss);
        if next == assignments {
            break;
        }
        assignments = next;
    }
    Ok(KMeansResult {
        k,
        centers,
        assignments,
        ss_within: ss,
        mse: mse(ss, points.len(), k, dim),
        iterations,
        ss_history,
    })
}

const DISTINCT_MAX_ITERS: usize = 100;

fn best_of_restarts(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansResult, LearnError> {
    let mut best: Option<KMeansResult> = None;
    for r in 0..RESTARTS {
        let run = kmeans(points, k, derive_seed(seed, (k * RESTARTS + r) as u64), DISTINCT_MAX_ITERS)?;
        if best.as_ref().is_none_or(|b| run.ss_within < b.ss_within) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// k-means without a fixed cluster count.
///
/// Runs k = 2..=k_max (best of [`RESTARTS`] runs each) and stops at the
/// elbow: the first k whose MSE gain over k-1 is below [`ELBOW_THRESHOLD`]
/// of the one-cluster MSE selects k-1. Without an elbow, k_max is returned.
pub fn distinct_kmeans(points: &[Vec<f64>], k_max: usize, seed: u64) -> Result<KMeansResult, LearnError> {
    let dim = validate(points, k_max)?;
    if k_max < 2 {
        return Err(LearnError::BadK { k: k_max, n: points.len() });
    }
    let n = points.len();
    let mean: Vec<f64> = (0..dim).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n as f64).collect();
    let total_mse = mse(points.iter().map(|p| sq_dist(p, &mean)).sum(), n, 1, dim);

    let mut prev = best_of_restarts(points, 2, seed)?;
    for k in 3..=k_max {
        let cur = best_of_restarts(points, k, seed)?;
        let gain = if total_mse > 0.0 { (prev.mse - cur.mse) / total_mse } else { 0.0 };
        if gain < ELBOW_THRESHOLD {
            return Ok(prev);
        }
        prev = cur;
    }
    Ok(prev)
}
