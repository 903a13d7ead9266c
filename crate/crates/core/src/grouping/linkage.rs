use std::collections::HashMap;

use super::{perturb_each, Grouping};
use crate::budget::{EvaluationBudget, Stage};
use crate::error::{Error, Result};
use crate::problems::Objective;
use crate::scalar::Scalar;

/// Perturbation step as a fraction of each variable's range.
pub const DEFAULT_DELTA_FRAC: f64 = 0.1;

/// A base point with its cached single-variable and all-variable perturbation values.
///
/// The base evaluation `f(s)` is charged to the optimization stage (the
/// caller may reuse the point as a seed solution); every perturbed
/// evaluation is charged to decomposition.
#[derive(Debug, Clone)]
pub struct LinkageSample<T> {
    pub s: Vec<T>,
    /// Signed per-coordinate step, already flipped where `s + delta` would leave the box.
    pub delta: Vec<T>,
    pub f_s: Vec<T>,
    pub f_single: Vec<Vec<T>>,
    pub f_all: Option<Vec<T>>,
    cache: HashMap<Vec<usize>, Vec<T>>,
}

fn charge_and_eval<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    x: &[T],
    budget: &EvaluationBudget,
    stage: Stage,
) -> Result<Vec<T>> {
    budget.charge(stage, 1)?;
    problem.evaluate(x)
}

impl<T: Scalar> LinkageSample<T> {
    /// Evaluates `f(s)`, every single-variable perturbation, and the all-variable perturbation.
    pub fn new<O: Objective<T> + ?Sized>(problem: &O, s: Vec<T>, delta_frac: T, budget: &EvaluationBudget) -> Result<Self> {
        let mut sample = Self::with_singles(problem, s, delta_frac, budget)?;
        let all: Vec<usize> = (0..sample.s.len()).collect();
        let x = sample.point(problem, &all)?;
        sample.f_all = Some(charge_and_eval(problem, &x, budget, Stage::Decomposition)?);
        Ok(sample)
    }

    /// Like [`LinkageSample::new`] without the all-variable perturbation.
    pub fn with_singles<O: Objective<T> + ?Sized>(
        problem: &O,
        s: Vec<T>,
        delta_frac: T,
        budget: &EvaluationBudget,
    ) -> Result<Self> {
        let d = problem.dim();
        if s.len() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: s.len() });
        }
        if delta_frac.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidArgument("perturbation fraction must be positive".into()));
        }
        let (lower, upper) = (problem.lower(), problem.upper());
        let delta: Vec<T> = (0..d)
            .map(|i| {
                let step = delta_frac * (upper[i] - lower[i]);
                if s[i] + step > upper[i] {
                    -step
                } else {
                    step
                }
            })
            .collect();
        let f_s = charge_and_eval(problem, &s, budget, Stage::Optimization)?;
        if budget.remaining() < d as u64 {
            return Err(Error::BudgetExhausted {
                used: budget.used(),
                limit: budget.limit(),
            });
        }
        let mut sample = Self {
            s,
            delta,
            f_s,
            f_single: Vec::with_capacity(d),
            f_all: None,
            cache: HashMap::new(),
        };
        for i in 0..d {
            let x = sample.point(problem, &[i])?;
            let f = charge_and_eval(problem, &x, budget, Stage::Decomposition)?;
            sample.f_single.push(f);
        }
        Ok(sample)
    }

    /// The base point perturbed on `indices`.
    pub fn point<O: Objective<T> + ?Sized>(&self, problem: &O, indices: &[usize]) -> Result<Vec<T>> {
        perturb_each(&self.s, indices, &self.delta, problem.lower(), problem.upper())
    }

    /// `f(perturb(s, group)) - f(s)`; single variables and the full set reuse cached values.
    pub fn group_delta<O: Objective<T> + ?Sized>(
        &mut self,
        problem: &O,
        group: &[usize],
        budget: &EvaluationBudget,
    ) -> Result<Vec<T>> {
        let f = if group.len() == 1 {
            self.f_single[group[0]].clone()
        } else if group.len() == self.s.len() && self.f_all.is_some() {
            self.f_all.clone().expect("checked")
        } else {
            let mut key = group.to_vec();
            key.sort_unstable();
            match self.cache.get(&key) {
                Some(f) => f.clone(),
                None => {
                    let x = self.point(problem, &key)?;
                    let f = charge_and_eval(problem, &x, budget, Stage::Decomposition)?;
                    self.cache.insert(key, f.clone());
                    f
                }
            }
        };
        Ok(f.iter().zip(&self.f_s).map(|(&a, &b)| a - b).collect())
    }

    /// Evaluations spent on multi-variable groups so far.
    pub fn cached_groups(&self) -> usize {
        self.cache.len()
    }
}

/// Per-group objective deltas of one sample.
pub fn group_deltas<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    sample: &mut LinkageSample<T>,
    grouping: &Grouping,
    budget: &EvaluationBudget,
) -> Result<Vec<Vec<T>>> {
    grouping
        .groups()
        .iter()
        .map(|g| sample.group_delta(problem, g, budget))
        .collect()
}

/// `|delta_all - sum_g delta_g|` per objective.
pub fn linkage_residual<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    sample: &mut LinkageSample<T>,
    grouping: &Grouping,
    budget: &EvaluationBudget,
) -> Result<Vec<T>> {
    if grouping.group_count() < 2 {
        return Err(Error::SingleGroup);
    }
    if grouping.dim() != sample.s.len() {
        return Err(Error::DimensionMismatch {
            expected: sample.s.len(),
            actual: grouping.dim(),
        });
    }
    let all: Vec<usize> = (0..sample.s.len()).collect();
    let total = sample.group_delta(problem, &all, budget)?;
    let mut sum = vec![T::zero(); total.len()];
    for d in group_deltas(problem, sample, grouping, budget)? {
        for (acc, v) in sum.iter_mut().zip(d) {
            *acc = *acc + v;
        }
    }
    Ok(total.iter().zip(sum).map(|(&t, s)| (t - s).abs()).collect())
}

/// Weighted residual summed over samples and divided by the group count.
pub fn linkage_measure<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    samples: &mut [LinkageSample<T>],
    grouping: &Grouping,
    weights: &[T],
    budget: &EvaluationBudget,
) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::Empty("linkage samples"));
    }
    if weights.iter().any(|&w| w < T::zero()) || (weights.iter().copied().sum::<T>() - T::one()).abs() > T::lit(1e-6) {
        return Err(Error::InvalidArgument("weights must be non-negative and sum to 1".into()));
    }
    let mut total = T::zero();
    for sample in samples.iter_mut() {
        let r = linkage_residual(problem, sample, grouping, budget)?;
        if r.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                actual: r.len(),
            });
        }
        total = total + r.iter().zip(weights).map(|(&ri, &w)| w * ri).sum::<T>();
    }
    Ok(total / T::from_count(grouping.group_count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::FnObjective;

    fn toy() -> FnObjective<f64, impl Fn(&[f64]) -> Vec<f64> + Sync> {
        FnObjective::uniform(3, 0.0, 10.0, 1, |x: &[f64]| vec![x[0] * x[1] + x[2]])
    }

    fn sample_at_ones<O: Objective<f64>>(p: &O, budget: &EvaluationBudget) -> LinkageSample<f64> {
        // range 10 with fraction 0.1 gives delta = 1
        LinkageSample::new(p, vec![1.0; 3], 0.1, budget).unwrap()
    }

    #[test]
    fn deltas_and_residuals_match_hand_evaluation() {
        let p = toy();
        let b = EvaluationBudget::unlimited();
        let mut s = sample_at_ones(&p, &b);
        let pair = Grouping::from_groups(3, vec![vec![0, 1], vec![2]]).unwrap();
        let d = group_deltas(&p, &mut s, &pair, &b).unwrap();
        assert_eq!(d, vec![vec![3.0], vec![1.0]]);
        assert_eq!(linkage_residual(&p, &mut s, &pair, &b).unwrap(), vec![0.0]);
        let singles = Grouping::singletons(3);
        assert_eq!(linkage_residual(&p, &mut s, &singles, &b).unwrap(), vec![1.0]);
        let m = linkage_measure(&p, std::slice::from_mut(&mut s), &singles, &[1.0], &b).unwrap();
        assert!((m - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            linkage_residual(&p, &mut s, &Grouping::single(3), &b),
            Err(Error::SingleGroup)
        );
    }

    #[test]
    fn sample_cost_and_group_cache() {
        let p = toy();
        let b = EvaluationBudget::unlimited();
        let mut s = sample_at_ones(&p, &b);
        assert_eq!(b.used_optimization(), 1);
        assert_eq!(b.used_decomposition(), 4);
        let pair = Grouping::from_groups(3, vec![vec![1, 0], vec![2]]).unwrap();
        linkage_residual(&p, &mut s, &pair, &b).unwrap();
        linkage_residual(&p, &mut s, &pair, &b).unwrap();
        assert_eq!(b.used_decomposition(), 5);
    }

    #[test]
    fn weighted_penalty_arithmetic() {
        let p = FnObjective::uniform(2, 0.0, 10.0, 2, |x: &[f64]| vec![x[0] + x[1], x[0] * x[1]]);
        let b = EvaluationBudget::unlimited();
        let mut s = LinkageSample::new(&p, vec![1.0, 1.0], 0.1, &b).unwrap();
        let g = Grouping::singletons(2);
        // residuals (0, 1) with equal weights over two groups
        let m = linkage_measure(&p, std::slice::from_mut(&mut s), &g, &[0.5, 0.5], &b).unwrap();
        assert!((m - 0.25).abs() < 1e-15);
        assert!(linkage_measure(&p, std::slice::from_mut(&mut s), &g, &[0.7, 0.7], &b).is_err());
    }

    #[test]
    fn delta_flips_at_upper_bound() {
        let p = toy();
        let b = EvaluationBudget::unlimited();
        let s = LinkageSample::new(&p, vec![10.0, 0.0, 9.5], 0.1, &b).unwrap();
        assert_eq!(s.delta, vec![-1.0, 1.0, -1.0]);
    }
}
