#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `a` is no worse everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Exhaustive O(N^2) non-dominated filter.
pub fn brute_nondominated(points: &[Vec<f64>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !(0..points.len()).any(|j| j != i && dominates(&points[j], &points[i])))
        .collect()
}

/// Fronts by repeatedly peeling off the non-dominated remainder.
pub fn brute_fronts(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| j != i && dominates(&points[j], &points[i])))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

pub fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Population with values on a coarse grid so ties and duplicates occur.
pub fn random_population(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..m).map(|_| rng.random_range(0..10) as f64 / 10.0).collect())
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every set partition of `0..n`, as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, max: u32, n: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=max + 1 {
            prefix.push(label);
            extend(prefix, max.max(label), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    extend(&mut prefix, 0, n, &mut out);
    out
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Squared distance from `x` to the line through `p` with direction `d`.
pub fn line_distance_sq(x: &[f64], p: &[f64], d: &[f64]) -> f64 {
    let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u: Vec<f64> = d.iter().map(|v| v / norm).collect();
    let w: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
    let along: f64 = w.iter().zip(&u).map(|(a, b)| a * b).sum();
    w.iter().zip(&u).map(|(a, b)| (a - along * b).powi(2)).sum()
}
