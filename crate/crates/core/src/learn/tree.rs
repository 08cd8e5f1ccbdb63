use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::ga::{synthesize_with_search, GaConfig};
use super::kmeans::distinct_kmeans;
use super::{check_dimensions, derive_seed, distribute, majority, search_for, LabeledExample, LearnError};
use crate::ca::{AttractorId, AttractorSearch, CaError, FmacaDescriptor, FuzzyConfiguration};

/// How many basins the GA is asked for at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KProposal {
    /// The number of classes present at the node.
    ClassCount,
    /// Cluster count of the node's configurations from distinct k-means,
    /// capped by the number of classes present.
    DistinctKMeans { k_max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub ga: GaConfig,
    /// `None` grows until every basin is pure or too small.
    pub max_depth: Option<usize>,
    pub min_node: usize,
    pub k_proposal: KProposal,
    /// Derived from the training examples when absent.
    pub search: Option<AttractorSearch>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            ga: GaConfig::default(),
            max_depth: Some(8),
            min_node: 4,
            k_proposal: KProposal::ClassCount,
            search: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        label: usize,
    },
    Internal {
        descriptor: FmacaDescriptor,
        children: BTreeMap<AttractorId, TreeNode>,
        /// Majority class of the node's training subset.
        fallback_label: usize,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { children, .. } => 1 + children.values().map(TreeNode::depth).max().unwrap_or(0),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { children, .. } => children.values().map(TreeNode::leaf_count).sum(),
        }
    }
}

/// A tree of automata: each internal node routes a configuration by the
/// attractor it reaches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmacaTree {
    pub root: TreeNode,
    pub n_cells: usize,
    pub n_classes: usize,
    pub search: AttractorSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStep {
    /// Followed the child of this basin.
    Basin(AttractorId),
    /// The attractor was not seen in training (or none was reached in
    /// budget); the node's fallback label was used.
    Fallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: usize,
    pub path: Vec<PathStep>,
}

impl FmacaTree {
    pub fn classify(&self, config: &FuzzyConfiguration) -> Result<Classification, LearnError> {
        if config.len() != self.n_cells {
            return Err(CaError::DimensionMismatch { expected: self.n_cells, found: config.len() }.into());
        }
        let mut node = &self.root;
        let mut path = Vec::new();
        loop {
            match node {
                TreeNode::Leaf { label } => return Ok(Classification { label: *label, path }),
                TreeNode::Internal { descriptor, children, fallback_label } => {
                    let child = self
                        .search
                        .run(descriptor, config)
                        .ok()
                        .and_then(|r| children.get(&r.attractor_id).map(|c| (r.attractor_id, c)));
                    match child {
                        Some((id, c)) => {
                            path.push(PathStep::Basin(id));
                            node = c;
                        }
                        None => {
                            path.push(PathStep::Fallback);
                            return Ok(Classification { label: *fallback_label, path });
                        }
                    }
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Fraction of `examples` the tree labels correctly.
    pub fn accuracy(&self, examples: &[LabeledExample]) -> Result<f64, LearnError> {
        if examples.is_empty() {
            return Err(LearnError::EmptyTestSet);
        }
        let mut correct = 0;
        for e in examples {
            if self.classify(&e.config)?.label == e.label {
                correct += 1;
            }
        }
        Ok(correct as f64 / examples.len() as f64)
    }
}

struct Builder<'a> {
    examples: &'a [LabeledExample],
    n_classes: usize,
    cfg: &'a TreeConfig,
    search: AttractorSearch,
    next_node: u64,
}

impl Builder<'_> {
    fn build(&mut self, members: &[usize], depth: usize) -> Result<TreeNode, LearnError> {
        let mut counts = vec![0usize; self.n_classes];
        for &i in members {
            counts[self.examples[i].label] += 1;
        }
        let present = counts.iter().filter(|&&c| c > 0).count();
        let label = majority(&counts);
        if present <= 1
            || self.cfg.max_depth.is_some_and(|d| depth >= d)
            || members.len() < self.cfg.min_node
        {
            return Ok(TreeNode::Leaf { label });
        }

        let node_id = self.next_node;
        self.next_node += 1;
        let subset: Vec<LabeledExample> = members.iter().map(|&i| self.examples[i].clone()).collect();
        let k = self.propose_k(&subset, present, node_id);
        let ga = GaConfig { seed: derive_seed(self.cfg.ga.seed, node_id), ..self.cfg.ga.clone() };
        let outcome = synthesize_with_search(&subset, k, &ga, &self.search)?;
        log::debug!(
            "node {node_id} depth {depth}: {} examples, k {k}, fitness {:.4}",
            members.len(),
            outcome.fitness
        );

        let mut split = self.split(&outcome.descriptor, &subset);
        let mut descriptor = outcome.descriptor;
        if split.as_ref().is_none_or(|s| s.len() < 2) {
            // No usable partition: fall back to the identity automaton, which
            // separates every pair of distinct configurations.
            descriptor = FmacaDescriptor::identity(subset[0].config.len());
            split = self.split(&descriptor, &subset);
        }
        let groups = match split {
            Some(g) if g.len() >= 2 => g,
            _ => return Ok(TreeNode::Leaf { label }),
        };

        let mut children = BTreeMap::new();
        for (id, local) in groups {
            let global: Vec<usize> = local.into_iter().map(|j| members[j]).collect();
            children.insert(id, self.build(&global, depth + 1)?);
        }
        Ok(TreeNode::Internal { descriptor, children, fallback_label: label })
    }

    /// Basin -> member positions within `subset`; `None` if any example
    /// fails to converge.
    fn split(&self, desc: &FmacaDescriptor, subset: &[LabeledExample]) -> Option<BTreeMap<AttractorId, Vec<usize>>> {
        let ids = distribute(desc, subset, &self.search).ok()?;
        let mut groups: BTreeMap<AttractorId, Vec<usize>> = BTreeMap::new();
        for (j, id) in ids.into_iter().enumerate() {
            groups.entry(id).or_default().push(j);
        }
        Some(groups)
    }

    fn propose_k(&self, subset: &[LabeledExample], present: usize, node_id: u64) -> usize {
        match self.cfg.k_proposal {
            KProposal::ClassCount => present,
            KProposal::DistinctKMeans { k_max } => {
                let points: Vec<Vec<f64>> = subset.iter().map(|e| e.config.cells().to_vec()).collect();
                match distinct_kmeans(&points, k_max, derive_seed(self.cfg.ga.seed ^ 0x6b6d, node_id)) {
                    Ok(r) => r.k.min(present),
                    Err(_) => present,
                }
            }
        }
    }
}

/// Recursive partitioning: synthesize an automaton for the node, distribute
/// the examples into its basins, label pure basins, and recurse into the
/// impure ones until they are pure, `max_depth` is reached, or fewer than
/// `min_node` examples remain (those become majority leaves).
pub fn build_tree(examples: &[LabeledExample], n_classes: usize, cfg: &TreeConfig) -> Result<FmacaTree, LearnError> {
    let n_cells = check_dimensions(examples)?;
    if let Some(e) = examples.iter().find(|e| e.label >= n_classes) {
        return Err(LearnError::LabelOutOfRange { label: e.label, classes: n_classes });
    }
    cfg.ga.validate()?;
    let search = cfg.search.unwrap_or_else(|| search_for(examples));
    let mut builder = Builder { examples, n_classes, cfg, search, next_node: 0 };
    let members: Vec<usize> = (0..examples.len()).collect();
    let root = builder.build(&members, 0)?;
    Ok(FmacaTree { root, n_cells, n_classes, search })
}
