use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use std::fmt;
use std::str::FromStr;

use super::{CaError, FmacaDescriptor, FuzzyConfiguration};

/// Grid used to compare states when looking for a revisit.
pub const DEFAULT_QUANTUM: f64 = 1e-9;
/// Hard upper bound for the default step budget.
pub const MAX_STEPS_CAP: usize = 10_000;

/// Phase-independent identity of an attractor cycle.
///
/// Derived from the quantized cycle rotated to start at its lexicographically
/// smallest state, so every run that lands on the same cycle reports the same
/// id whatever its entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttractorId(pub u64);

impl AttractorId {
    /// `cycle` holds quantized states in trajectory order.
    pub(crate) fn of_cycle(cycle: &[Vec<i64>]) -> AttractorId {
        let start = (0..cycle.len()).min_by(|&a, &b| cycle[a].cmp(&cycle[b])).unwrap_or(0);
        let mut hasher = Sha256::new();
        hasher.update((cycle.first().map_or(0, Vec::len) as u64).to_le_bytes());
        hasher.update((cycle.len() as u64).to_le_bytes());
        for k in 0..cycle.len() {
            for v in &cycle[(start + k) % cycle.len()] {
                hasher.update(v.to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        AttractorId(u64::from_be_bytes(bytes))
    }
}

impl fmt::Display for AttractorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl FromStr for AttractorId {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        u64::from_str_radix(s, 16).map(AttractorId)
    }
}

impl Serialize for AttractorId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AttractorId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractorResult {
    /// Steps taken before the trajectory first enters the cycle.
    pub transient_length: usize,
    pub period: usize,
    /// The cycle in trajectory order, starting at the entry state.
    pub cycle_states: Vec<FuzzyConfiguration>,
    pub attractor_id: AttractorId,
}

/// Step budget and comparison grid for attractor detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttractorSearch {
    pub max_steps: usize,
    pub quantum: f64,
}

impl AttractorSearch {
    pub fn new(max_steps: usize, quantum: f64) -> Result<Self, CaError> {
        if max_steps == 0 {
            return Err(CaError::InvalidSearch("max_steps must be at least 1".into()));
        }
        if !(quantum > 0.0 && quantum.is_finite()) {
            return Err(CaError::InvalidSearch(format!("quantum must be positive, got {quantum}")));
        }
        Ok(AttractorSearch { max_steps, quantum })
    }

    /// Default budget for a configuration family whose smallest nonzero value is `resolution`.
    pub fn with_resolution(n: usize, resolution: f64) -> Self {
        AttractorSearch { max_steps: max_steps_for(n, resolution), quantum: DEFAULT_QUANTUM }
    }

    pub fn run(
        &self,
        desc: &FmacaDescriptor,
        p0: &FuzzyConfiguration,
    ) -> Result<AttractorResult, CaError> {
        run_to_attractor(desc, p0, self.max_steps, self.quantum)
    }
}

fn max_steps_for(n: usize, resolution: f64) -> usize {
    let per_cell = if resolution > 0.0 { (1.0 / resolution).ceil() } else { 1.0 };
    let budget = 4.0 * n as f64 * per_cell;
    if budget >= MAX_STEPS_CAP as f64 {
        MAX_STEPS_CAP
    } else {
        (budget as usize).max(1)
    }
}

/// `4 * n * ceil(1/eps)` capped at [`MAX_STEPS_CAP`], where `eps` is the
/// smallest nonzero cell of `p0` (1 when all cells are zero).
pub fn default_max_steps(n: usize, p0: &FuzzyConfiguration) -> usize {
    let eps = p0
        .cells()
        .iter()
        .copied()
        .filter(|&v| v > 0.0)
        .fold(1.0f64, f64::min);
    max_steps_for(n, eps)
}

fn matches(cells: &[f64], quantized: &[i64], quantum: f64) -> bool {
    cells.iter().zip(quantized).all(|(v, q)| (v / quantum).round() as i64 == *q)
}

/// Iterate `desc` from `p0` until a quantized state repeats.
///
/// Uses Brent's cycle finder on the quantized trajectory, so memory does not
/// grow with the transient length. Fails with `NonConvergent` when the first
/// revisit would happen after `max_steps` steps.
pub fn run_to_attractor(
    desc: &FmacaDescriptor,
    p0: &FuzzyConfiguration,
    max_steps: usize,
    quantum: f64,
) -> Result<AttractorResult, CaError> {
    AttractorSearch::new(max_steps, quantum)?;
    desc.check_len(p0.len())?;
    let n = desc.n();
    let non_convergent = CaError::NonConvergent { max_steps };

    // Phase 1: period.
    let mut tortoise = p0.quantize(quantum);
    let mut hare = p0.cells().to_vec();
    let mut scratch = vec![0.0; n];
    desc.step_cells(&hare, &mut scratch);
    std::mem::swap(&mut hare, &mut scratch);
    let mut power = 1usize;
    let mut period = 1usize;
    let mut steps = 1usize;
    let limit = max_steps.saturating_mul(3).saturating_add(3);
    while !matches(&hare, &tortoise, quantum) {
        if power == period {
            tortoise = crate::ca::state::quantize_into(&hare, quantum);
            power *= 2;
            period = 0;
        }
        desc.step_cells(&hare, &mut scratch);
        std::mem::swap(&mut hare, &mut scratch);
        period += 1;
        steps += 1;
        if steps > limit {
            return Err(non_convergent);
        }
    }

    // Phase 2: transient length.
    let mut slow = p0.cells().to_vec();
    let mut fast = p0.cells().to_vec();
    for _ in 0..period {
        desc.step_cells(&fast, &mut scratch);
        std::mem::swap(&mut fast, &mut scratch);
    }
    let mut transient = 0usize;
    while !matches(&fast, &crate::ca::state::quantize_into(&slow, quantum), quantum) {
        desc.step_cells(&slow, &mut scratch);
        std::mem::swap(&mut slow, &mut scratch);
        desc.step_cells(&fast, &mut scratch);
        std::mem::swap(&mut fast, &mut scratch);
        transient += 1;
        if transient + period > max_steps {
            return Err(non_convergent);
        }
    }
    if transient + period > max_steps {
        return Err(non_convergent);
    }

    let mut cycle_states = Vec::with_capacity(period);
    let mut quantized = Vec::with_capacity(period);
    for _ in 0..period {
        quantized.push(crate::ca::state::quantize_into(&slow, quantum));
        cycle_states.push(FuzzyConfiguration::from_raw(slow.clone()));
        desc.step_cells(&slow, &mut scratch);
        std::mem::swap(&mut slow, &mut scratch);
    }
    Ok(AttractorResult {
        transient_length: transient,
        period,
        attractor_id: AttractorId::of_cycle(&quantized),
        cycle_states,
    })
}
