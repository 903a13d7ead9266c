//! Non-dominated filtering, sorting, and crowding.

use std::cmp::Ordering;

use super::dominance::{compare, Dominance};
use crate::scalar::Scalar;

/// Result of [`quick_search`]: indices of non-dominated members in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuickSearch {
    pub indices: Vec<usize>,
    /// Number of pairwise dominance checks performed.
    pub comparisons: usize,
}

/// Finds the non-dominated members of a population.
///
/// Every member starts flagged as non-dominated. Member `i` is compared only
/// against later members still flagged; it stops at the first member that
/// dominates it, and clears the flag of every member it dominates.
pub fn quick_search<T: PartialOrd>(objectives: &[Vec<T>]) -> QuickSearch {
    let n = objectives.len();
    let mut alive = vec![true; n];
    let mut comparisons = 0;
    for i in 0..n {
        if !alive[i] {
            continue;
        }
        for j in i + 1..n {
            if !alive[j] {
                continue;
            }
            comparisons += 1;
            match compare(&objectives[i], &objectives[j]) {
                Dominance::DominatedBy => {
                    alive[i] = false;
                    break;
                }
                Dominance::Dominates => alive[j] = false,
                Dominance::Incomparable => {}
            }
        }
    }
    QuickSearch {
        indices: (0..n).filter(|&i| alive[i]).collect(),
        comparisons,
    }
}

/// Indices of the non-dominated points.
pub fn nondominated_indices<T: PartialOrd>(points: &[Vec<T>]) -> Vec<usize> {
    quick_search(points).indices
}

/// Deb's fast non-dominated sort. Returns fronts of indices, best first.
pub fn fast_nondominated_sort<T: PartialOrd>(objectives: &[Vec<T>]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            match compare(&objectives[p], &objectives[q]) {
                Dominance::Dominates => {
                    dominated_by_me[p].push(q);
                    domination_count[q] += 1;
                }
                Dominance::DominatedBy => {
                    dominated_by_me[q].push(p);
                    domination_count[p] += 1;
                }
                Dominance::Incomparable => {}
            }
        }
    }
    for (p, &count) in domination_count.iter().enumerate() {
        if count == 0 {
            current.push(p);
        }
    }
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by_me[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance of each member of `front` (indices into `objectives`).
///
/// Boundary members get +inf; an objective with zero range contributes nothing.
#[allow(clippy::needless_range_loop)]
pub fn crowding_distance<T: Scalar>(objectives: &[Vec<T>], front: &[usize]) -> Vec<T> {
    let n = front.len();
    let mut distance = vec![T::zero(); n];
    if n == 0 {
        return distance;
    }
    if n <= 2 {
        return vec![T::infinity(); n];
    }
    let m = objectives[front[0]].len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| {
            objectives[front[a]][k]
                .partial_cmp(&objectives[front[b]][k])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let lo = objectives[front[order[0]]][k];
        let hi = objectives[front[order[n - 1]]][k];
        distance[order[0]] = T::infinity();
        distance[order[n - 1]] = T::infinity();
        let range = hi - lo;
        if range <= T::zero() {
            continue;
        }
        for w in 1..n - 1 {
            let gap = objectives[front[order[w + 1]]][k] - objectives[front[order[w - 1]]][k];
            distance[order[w]] = distance[order[w]] + gap / range;
        }
    }
    distance
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_search_examples() {
        let o = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 3.0]];
        assert_eq!(quick_search(&o).indices, vec![0, 2]);
        let same = vec![vec![1.0, 1.0]; 4];
        assert_eq!(quick_search(&same).indices, vec![0, 1, 2, 3]);
        assert_eq!(quick_search(&[vec![5.0, 5.0]]).indices, vec![0]);
    }

    #[test]
    fn chain_is_linear() {
        let chain: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64, i as f64]).collect();
        let qs = quick_search(&chain);
        assert_eq!(qs.indices, vec![0]);
        assert!(qs.comparisons <= 100);
        let rev: Vec<Vec<f64>> = chain.into_iter().rev().collect();
        let qs = quick_search(&rev);
        assert_eq!(qs.indices, vec![99]);
        assert!(qs.comparisons <= 2 * 100);
    }

    #[test]
    fn fnds_examples() {
        let chain = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        assert_eq!(fast_nondominated_sort(&chain), vec![vec![0], vec![1], vec![2]]);
        let anti = vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]];
        assert_eq!(fast_nondominated_sort(&anti), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn crowding_examples() {
        let o = vec![vec![0.0_f64, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]];
        let d = crowding_distance(&o, &[0, 1, 2]);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-15);
        let two = crowding_distance(&o, &[0, 1]);
        assert!(two.iter().all(|v| v.is_infinite()));
        let dup = vec![vec![1.0_f64, 1.0]; 5];
        let d = crowding_distance(&dup, &[0, 1, 2, 3, 4]);
        assert_eq!(d.iter().filter(|v| v.is_finite()).count(), 3);
        assert!(d.iter().filter(|v| v.is_finite()).all(|&v| v == 0.0));
    }
}
