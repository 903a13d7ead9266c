use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::nsga2::{crowding_distance, dominate, Dominance};
use crate::scalar::Scalar;

pub const DEFAULT_ARCHIVE_CAPACITY: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry<T> {
    pub x: Vec<T>,
    pub objectives: Vec<T>,
}

/// Bounded set of mutually non-dominated full solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoArchive<T> {
    entries: Vec<ArchiveEntry<T>>,
    capacity: usize,
}

impl<T: Scalar> ParetoArchive<T> {
    pub fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::new(),
            capacity: capacity.max(1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry<T>] {
        &self.entries
    }

    pub fn objectives(&self) -> Vec<Vec<T>> {
        self.entries.iter().map(|e| e.objectives.clone()).collect()
    }

    /// Inserts candidates, keeping the non-dominated union and truncating by crowding.
    ///
    /// A candidate whose objective vector equals an incumbent's is dropped.
    pub fn update<I>(&mut self, candidates: I)
    where
        I: IntoIterator<Item = (Vec<T>, Vec<T>)>,
    {
        for (x, objectives) in candidates {
            self.insert(x, objectives);
        }
        self.truncate();
    }

    fn insert(&mut self, x: Vec<T>, objectives: Vec<T>) {
        if objectives.iter().any(|v| !v.is_finite()) {
            return;
        }
        let mut rejected = false;
        self.entries.retain(|e| {
            if rejected {
                return true;
            }
            if e.objectives == objectives {
                rejected = true;
                return true;
            }
            match dominate(&e.objectives, &objectives) {
                Ok(Dominance::Dominates) => {
                    rejected = true;
                    true
                }
                Ok(Dominance::DominatedBy) => false,
                _ => true,
            }
        });
        if !rejected {
            self.entries.push(ArchiveEntry { x, objectives });
        }
    }

    fn truncate(&mut self) {
        if self.entries.len() <= self.capacity {
            return;
        }
        let objs = self.objectives();
        let all: Vec<usize> = (0..objs.len()).collect();
        let cd = crowding_distance(&objs, &all);
        let mut order = all;
        order.sort_by(|&a, &b| cd[b].partial_cmp(&cd[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
        let mut keep = vec![false; objs.len()];
        for &i in order.iter().take(self.capacity) {
            keep[i] = true;
        }
        let mut idx = 0;
        self.entries.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(points: &[[f64; 2]]) -> ParetoArchive<f64> {
        let mut a = ParetoArchive::new(10);
        a.update(points.iter().map(|p| (vec![], p.to_vec())));
        a
    }

    #[test]
    fn dominated_candidate_is_ignored() {
        let mut a = arc(&[[1.0, 1.0]]);
        a.update([(vec![], vec![2.0, 2.0])]);
        assert_eq!(a.objectives(), vec![vec![1.0, 1.0]]);
    }

    #[test]
    fn dominating_candidate_evicts() {
        let mut a = arc(&[[1.0, 3.0], [3.0, 1.0], [2.0, 2.0]]);
        a.update([(vec![], vec![1.5, 1.5])]);
        assert_eq!(a.objectives(), vec![vec![1.0, 3.0], vec![3.0, 1.0], vec![1.5, 1.5]]);
    }

    #[test]
    fn capacity_keeps_extremes() {
        let mut a = ParetoArchive::new(3);
        a.update((0..=10).map(|i| {
            let t = i as f64 / 10.0;
            (vec![t], vec![t, 1.0 - t])
        }));
        assert_eq!(a.len(), 3);
        let firsts: Vec<f64> = a.objectives().iter().map(|o| o[0]).collect();
        assert!(firsts.contains(&0.0) && firsts.contains(&1.0));
    }

    #[test]
    fn reupdate_is_idempotent() {
        let mut a = arc(&[[1.0, 3.0], [3.0, 1.0]]);
        let before = a.clone();
        let again: Vec<_> = before.entries().iter().map(|e| (e.x.clone(), e.objectives.clone())).collect();
        a.update(again);
        assert_eq!(a, before);
    }
}
