use std::collections::BTreeMap;

use super::{AttractorId, CaError, FmacaDescriptor, FuzzyConfiguration, DEFAULT_QUANTUM};

pub const MAX_ENUMERATION_CELLS: usize = 16;

/// Basin membership of every binary seed of an automaton.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinCensus {
    pub n: usize,
    /// Indexed by seed bit pattern; bit `i` is the state of cell `i`.
    pub assignments: Vec<AttractorId>,
    /// Basin size per attractor.
    pub basin_sizes: BTreeMap<AttractorId, usize>,
}

impl BasinCensus {
    pub fn distinct_attractors(&self) -> usize {
        self.basin_sizes.len()
    }

    pub fn seed(&self, pattern: usize) -> FuzzyConfiguration {
        binary_config(self.n, pattern)
    }
}

pub(crate) fn binary_config(n: usize, pattern: usize) -> FuzzyConfiguration {
    FuzzyConfiguration::from_raw((0..n).map(|i| ((pattern >> i) & 1) as f64).collect())
}

/// Exhaustive basin census over all `2^n` binary seeds.
///
/// Works on bit patterns and the functional graph of the Boolean map, never
/// through the fuzzy stepping code, so it serves as an independent check of
/// [`run_to_attractor`](super::run_to_attractor). Ids are computed on the
/// default quantum grid.
pub fn enumerate_binary_basins(desc: &FmacaDescriptor) -> Result<BasinCensus, CaError> {
    let n = desc.n();
    if n > MAX_ENUMERATION_CELLS {
        return Err(CaError::TooLarge { n, max: MAX_ENUMERATION_CELLS });
    }
    let size = 1usize << n;
    let next: Vec<u32> = (0..size as u32).map(|s| boolean_step(desc, s)).collect();

    const UNSEEN: u32 = u32::MAX;
    const ON_PATH: u32 = u32::MAX - 1;
    // slot per state: index into `ids`, or a marker
    let mut basin = vec![UNSEEN; size];
    let mut ids: Vec<AttractorId> = Vec::new();
    let one = (1.0 / DEFAULT_QUANTUM).round() as i64;
    let mut path = Vec::new();
    for start in 0..size as u32 {
        if basin[start as usize] != UNSEEN {
            continue;
        }
        path.clear();
        let mut s = start;
        while basin[s as usize] == UNSEEN {
            basin[s as usize] = ON_PATH;
            path.push(s);
            s = next[s as usize];
        }
        let slot = if basin[s as usize] == ON_PATH {
            // new cycle: the suffix of the path from `s`
            let pos = path.iter().position(|&p| p == s).expect("cycle entry on path");
            let cycle: Vec<Vec<i64>> = path[pos..]
                .iter()
                .map(|&c| (0..n).map(|i| ((c >> i) & 1) as i64 * one).collect())
                .collect();
            ids.push(AttractorId::of_cycle(&cycle));
            (ids.len() - 1) as u32
        } else {
            basin[s as usize]
        };
        for &p in &path {
            basin[p as usize] = slot;
        }
    }

    let assignments: Vec<AttractorId> = basin.iter().map(|&b| ids[b as usize]).collect();
    let mut basin_sizes = BTreeMap::new();
    for id in &assignments {
        *basin_sizes.entry(*id).or_insert(0) += 1;
    }
    Ok(BasinCensus { n, assignments, basin_sizes })
}

fn boolean_step(desc: &FmacaDescriptor, state: u32) -> u32 {
    let n = desc.n();
    let mut out = 0u32;
    for (i, (d, &comp)) in desc.dependencies().iter().zip(desc.complement_vector()).enumerate() {
        let bit = |j: usize| (state >> j) & 1;
        let mut v = 0;
        if d.left() {
            v |= bit(i - 1);
        }
        if d.center() {
            v |= bit(i);
        }
        if d.right() && i + 1 < n {
            v |= bit(i + 1);
        }
        if comp {
            v ^= 1;
        }
        out |= v << i;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::run_to_attractor;

    #[test]
    fn identity_has_one_attractor_per_seed() {
        let census = enumerate_binary_basins(&FmacaDescriptor::from_codes(&[204, 204]).unwrap()).unwrap();
        assert_eq!(census.distinct_attractors(), 4);
    }

    #[test]
    fn constant_zero_collapses_everything() {
        let d = FmacaDescriptor::from_codes(&[0, 0]).unwrap();
        let census = enumerate_binary_basins(&d).unwrap();
        assert_eq!(census.distinct_attractors(), 1);
        let r = run_to_attractor(&d, &census.seed(3), 10, DEFAULT_QUANTUM).unwrap();
        assert_eq!(r.cycle_states[0].cells(), &[0.0, 0.0]);
        assert_eq!(census.assignments[3], r.attractor_id);
    }

    #[test]
    fn example_automaton_census() {
        // <238,254,238,252>: cells 0-1 and 2-3 form two OR blocks, cell 1 also
        // reads cell 2. Hand census of the 16 seeds: (0,0,0,0) fixed; any
        // nonzero in cells 2-3 floods everything to (1,1,1,1); a nonzero only
        // in cells 0-1 ends at (1,1,0,0).
        let d = FmacaDescriptor::from_codes(&[238, 254, 238, 252]).unwrap();
        let census = enumerate_binary_basins(&d).unwrap();
        assert_eq!(census.distinct_attractors(), 3);
        let mut sizes: Vec<usize> = census.basin_sizes.values().copied().collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 12]);
        for pattern in 0..16 {
            let r = run_to_attractor(&d, &census.seed(pattern), 64, DEFAULT_QUANTUM).unwrap();
            assert_eq!(census.assignments[pattern], r.attractor_id, "seed {pattern:04b}");
        }
    }

    #[test]
    fn too_large_is_rejected() {
        let d = FmacaDescriptor::identity(17);
        assert_eq!(enumerate_binary_basins(&d), Err(CaError::TooLarge { n: 17, max: 16 }));
        assert!(enumerate_binary_basins(&FmacaDescriptor::identity(16)).is_ok());
    }
}
