//! Variable grouping: the linkage-measure GA and baseline groupers.

mod baselines;
mod linkage;
mod lmm;

use serde::{Deserialize, Serialize};

pub use baselines::{dg_decompose, limd_decompose, random_grouping, random_grouping_with, DEFAULT_EPSILON};
pub use linkage::{group_deltas, linkage_measure, linkage_residual, LinkageSample, DEFAULT_DELTA_FRAC};
pub use lmm::{ega_generation, lmm_decompose, reserve_elite, LabelFitness, LmmParams, MEASURE_NOISE};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Output of a decomposition method.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult<T> {
    pub grouping: Grouping,
    /// Evaluations charged to the decomposition stage by this call.
    pub fes_consumed: u64,
    pub detected_fully_separable: bool,
    /// Best linkage measure after initialization and after each GA generation.
    pub measure_history: Vec<f64>,
    pub budget_exhausted: bool,
    /// Evaluated base points `(x, f(x))`, reusable as seed solutions.
    pub base_points: Vec<(Vec<T>, Vec<T>)>,
}

/// A partition of variable indices into sub-problems, stored as one label per variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grouping {
    labels: Vec<u32>,
    groups: Vec<Vec<usize>>,
}

impl Grouping {
    /// Decodes labels into groups, ordered by their smallest member.
    pub fn from_labels(labels: Vec<u32>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty("labels"));
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = std::collections::HashMap::new();
        for (i, &l) in labels.iter().enumerate() {
            let g = *slot.entry(l).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i);
        }
        Ok(Self { labels, groups })
    }

    /// Builds a grouping from explicit groups, which must partition `0..dim`.
    pub fn from_groups(dim: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut labels = vec![u32::MAX; dim];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                if i >= dim {
                    return Err(Error::InvalidArgument(format!("index {i} out of range for dimension {dim}")));
                }
                if labels[i] != u32::MAX {
                    return Err(Error::InvalidArgument(format!("index {i} appears in more than one group")));
                }
                labels[i] = g as u32;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == u32::MAX) {
            return Err(Error::InvalidArgument(format!("index {i} is not covered by any group")));
        }
        Self::from_labels(labels)
    }

    pub fn singletons(dim: usize) -> Self {
        Self::from_labels((0..dim as u32).collect()).expect("non-empty")
    }

    pub fn single(dim: usize) -> Self {
        Self::from_labels(vec![0; dim]).expect("non-empty")
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_fully_separable(&self) -> bool {
        self.groups.len() == self.labels.len()
    }
}

/// Adds `delta` to `s` at `indices`, flipping the sign on any coordinate that would leave the box.
pub fn perturb<T: Scalar>(s: &[T], indices: &[usize], delta: T, lower: &[T], upper: &[T]) -> Result<Vec<T>> {
    if delta == T::zero() {
        return Err(Error::InvalidArgument("perturbation delta must be non-zero".into()));
    }
    let deltas = vec![delta; s.len()];
    perturb_each(s, indices, &deltas, lower, upper)
}

/// Like [`perturb`] with a per-coordinate delta.
pub fn perturb_each<T: Scalar>(s: &[T], indices: &[usize], deltas: &[T], lower: &[T], upper: &[T]) -> Result<Vec<T>> {
    let mut out = s.to_vec();
    for &i in indices {
        if i >= s.len() {
            return Err(Error::InvalidArgument(format!("index {i} out of range for dimension {}", s.len())));
        }
        let d = deltas[i];
        let up = s[i] + d;
        out[i] = if up > upper[i] || up < lower[i] {
            (s[i] - d).max(lower[i]).min(upper[i])
        } else {
            up
        };
    }
    Ok(out)
}

/// Connected components of an undirected graph given as an edge predicate over `0..n`.
pub(crate) fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for &(a, b) in edges {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}
