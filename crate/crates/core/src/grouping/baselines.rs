use rand::seq::SliceRandom;
use rand::Rng;

use super::linkage::{LinkageSample, DEFAULT_DELTA_FRAC};
use super::{components, DecompositionResult, Grouping};
use crate::budget::{EvaluationBudget, Stage};
use crate::error::{Error, Result};
use crate::nsga2::random_vectors;
use crate::problems::Objective;
use crate::rng::{stream_rng, STREAM_DECOMPOSITION};
use crate::scalar::Scalar;

/// Interaction threshold for the pairwise nonlinearity check.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Shuffles the indices and deals them round-robin into `m` groups, so every group is non-empty.
pub fn random_grouping_with<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Grouping> {
    if m == 0 || m > d {
        return Err(Error::InvalidArgument(format!(
            "random grouping needs 1 <= m <= D, got m = {m}, D = {d}"
        )));
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut labels = vec![0u32; d];
    for (pos, &i) in order.iter().enumerate() {
        labels[i] = (pos % m) as u32;
    }
    Grouping::from_labels(labels)
}

pub fn random_grouping(d: usize, m: usize, seed: u64) -> Result<Grouping> {
    random_grouping_with(d, m, &mut stream_rng(seed, STREAM_DECOMPOSITION))
}

/// Evaluates every pair perturbation around each sample and merges pairs flagged by `interacts`.
///
/// `interacts` receives `(f(s), f(s_i), f(s_j), f(s_ij))` for one sample.
fn pairwise_scan<T, O, F>(
    problem: &O,
    sample_count: usize,
    budget: &EvaluationBudget,
    seed: u64,
    interacts: F,
) -> Result<DecompositionResult<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
    F: Fn(&[T], &[T], &[T], &[T]) -> bool,
{
    let d = problem.dim();
    let start = budget.used_decomposition();
    let mut rng = stream_rng(seed, STREAM_DECOMPOSITION);
    let all: Vec<usize> = (0..d).collect();
    let bases = random_vectors(sample_count, problem.lower(), &all, problem.lower(), problem.upper(), &mut rng);
    let mut samples = Vec::with_capacity(sample_count);
    for s in bases {
        samples.push(LinkageSample::with_singles(problem, s, T::lit(DEFAULT_DELTA_FRAC), budget)?);
    }
    let base_points = samples.iter().map(|s| (s.s.clone(), s.f_s.clone())).collect();
    let mut edges = Vec::new();
    let mut exhausted = false;
    'outer: for i in 0..d {
        for j in i + 1..d {
            let mut linked = false;
            for sample in &samples {
                if budget.charge(Stage::Decomposition, 1).is_err() {
                    exhausted = true;
                    break 'outer;
                }
                let f_ij = problem.evaluate(&sample.point(problem, &[i, j])?)?;
                linked |= interacts(&sample.f_s, &sample.f_single[i], &sample.f_single[j], &f_ij);
            }
            if linked {
                edges.push((i, j));
            }
        }
    }
    let grouping = Grouping::from_groups(d, components(d, &edges))?;
    Ok(DecompositionResult {
        detected_fully_separable: grouping.is_fully_separable(),
        grouping,
        fes_consumed: budget.used_decomposition() - start,
        measure_history: Vec::new(),
        budget_exhausted: exhausted,
        base_points,
    })
}

/// Differential grouping: one base point, pairs merged when `|d_ij - (d_i + d_j)| > epsilon` in any objective.
pub fn dg_decompose<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    epsilon: T,
    budget: &EvaluationBudget,
    seed: u64,
) -> Result<DecompositionResult<T>> {
    pairwise_scan(problem, 1, budget, seed, |f, fi, fj, fij| {
        (0..f.len()).any(|k| ((fij[k] - f[k]) - ((fi[k] - f[k]) + (fj[k] - f[k]))).abs() > epsilon)
    })
}

/// Sample count used by [`limd_decompose`].
pub const LIMD_SAMPLES: usize = 2;

/// Monotonicity detection over two base points.
///
/// When both single moves change an objective in the same direction, the
/// joint move must continue that direction past both; otherwise the pair is
/// merged. Pairs where either single move leaves the objective unchanged or
/// the two move it in opposite directions carry no evidence and stay apart.
pub fn limd_decompose<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    budget: &EvaluationBudget,
    seed: u64,
) -> Result<DecompositionResult<T>> {
    pairwise_scan(problem, LIMD_SAMPLES, budget, seed, limd_interacts)
}

pub(crate) fn limd_interacts<T: Scalar>(f: &[T], fi: &[T], fj: &[T], fij: &[T]) -> bool {
    (0..f.len()).any(|k| {
        if f[k] < fi[k] && f[k] < fj[k] {
            !(fi[k] < fij[k] && fj[k] < fij[k])
        } else if f[k] > fi[k] && f[k] > fj[k] {
            !(fi[k] > fij[k] && fj[k] > fij[k])
        } else {
            false
        }
    })
}
