//! Cooperative coevolution: sub-problems optimized in turn against a context population.
//!
//! Each sub-population member is a full decision vector; only the active
//! group's coordinates vary. After every generation the selected population
//! becomes the context that the next sub-problem builds on.

mod archive;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use archive::{ArchiveEntry, ParetoArchive, DEFAULT_ARCHIVE_CAPACITY};

use crate::budget::{EvaluationBudget, Stage};
use crate::error::{Error, Result};
use crate::grouping::{random_grouping_with, Grouping};
use crate::hybrid::{estimate_point_average, estimate_point_least_squares, gaussian_samples, Estimator, MovePair};
use crate::nsga2::{
    assign_rank_and_crowding, dominate, environmental_selection, evaluate_all, make_offspring, quick_search,
    random_vectors, Dominance, Individual, Nsga2Params, Offspring,
};
use crate::problems::Objective;
use crate::rng::{stream_rng, STREAM_CONTEXT, STREAM_OPTIMIZATION, STREAM_REGROUP};
use crate::scalar::Scalar;

/// Overwrites `group`'s coordinates of `context` with `sub`.
pub fn assemble<T: Scalar>(sub: &[T], group: &[usize], context: &[T]) -> Result<Vec<T>> {
    if sub.len() != group.len() {
        return Err(Error::DimensionMismatch {
            expected: group.len(),
            actual: sub.len(),
        });
    }
    let mut seen = vec![false; context.len()];
    let mut out = context.to_vec();
    for (&i, &v) in group.iter().zip(sub) {
        if i >= context.len() || seen[i] {
            return Err(Error::InvalidArgument(format!("group index {i} is out of range or repeated")));
        }
        seen[i] = true;
        out[i] = v;
    }
    Ok(out)
}

/// Full-dimension vectors that complete partial solutions, plus which group last wrote each coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextPopulation<T> {
    members: Vec<Vec<T>>,
    provenance: Vec<Option<usize>>,
}

impl<T: Scalar> ContextPopulation<T> {
    pub fn new(initial: Vec<T>) -> Self {
        let d = initial.len();
        Self {
            members: vec![initial],
            provenance: vec![None; d],
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member `k`, cycling when `k` exceeds the population size.
    pub fn get(&self, k: usize) -> &[T] {
        &self.members[k % self.members.len()]
    }

    pub fn members(&self) -> &[Vec<T>] {
        &self.members
    }

    pub fn provenance(&self) -> &[Option<usize>] {
        &self.provenance
    }

    /// Replaces the members after sub-problem `group_id` wrote `group`.
    pub fn replace(&mut self, members: Vec<Vec<T>>, group_id: usize, group: &[usize]) {
        if !members.is_empty() {
            self.members = members;
        }
        for &i in group {
            self.provenance[i] = Some(group_id);
        }
    }
}

/// Gaussian elite sampling applied inside each generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridParams {
    /// Standard deviation as a fraction of each variable's range.
    pub sigma_frac: f64,
    pub estimator: Estimator,
    /// Samples per generation as a fraction of the population size.
    pub sample_frac: f64,
}

impl Default for HybridParams {
    fn default() -> Self {
        Self {
            sigma_frac: 0.05,
            estimator: Estimator::PfAverage,
            sample_frac: 0.1,
        }
    }
}

impl HybridParams {
    pub fn sample_count(&self, pop_size: usize) -> usize {
        ((pop_size as f64 * self.sample_frac).floor() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcParams {
    pub nsga2: Nsga2Params,
    pub hybrid: Option<HybridParams>,
    pub archive_capacity: usize,
    /// Sweeps over all groups; budget is shared evenly across every visit.
    pub passes: usize,
    /// Draw a fresh random grouping with this many groups before every pass after the first.
    pub regroup: Option<usize>,
}

impl Default for CcParams {
    fn default() -> Self {
        Self {
            nsga2: Nsga2Params::default(),
            hybrid: None,
            archive_capacity: DEFAULT_ARCHIVE_CAPACITY,
            passes: 1,
            regroup: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CcOutcome<T> {
    pub archive: ParetoArchive<T>,
    pub population: Vec<Individual<T>>,
    pub context: ContextPopulation<T>,
    pub generations: usize,
    /// Best-so-far archive after initialization and after every generation, when recording is enabled.
    pub trace: Vec<Vec<Vec<T>>>,
}

fn archive_extend<T: Scalar>(archive: &mut ParetoArchive<T>, members: &[Individual<T>]) {
    archive.update(members.iter().map(|i| (i.x.clone(), i.objectives.clone())));
}

/// Sub-vectors of `xs` restricted to `active`.
fn project<T: Scalar>(xs: &[&[T]], active: &[usize]) -> Vec<Vec<T>> {
    xs.iter().map(|x| active.iter().map(|&i| x[i]).collect()).collect()
}

/// Elite samples for one generation, assembled against the current front's context.
#[allow(clippy::too_many_arguments)]
fn elite_samples<T: Scalar, R: Rng + ?Sized>(
    offspring: &[Individual<T>],
    children: &[Offspring<T>],
    parents: &[Individual<T>],
    active: &[usize],
    lower: &[T],
    upper: &[T],
    hybrid: &HybridParams,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<T>>> {
    if offspring.is_empty() || active.is_empty() {
        return Ok(Vec::new());
    }
    let objs: Vec<Vec<T>> = offspring.iter().map(|i| i.objectives.clone()).collect();
    let front = quick_search(&objs).indices;
    let front_x: Vec<&[T]> = front.iter().map(|&k| offspring[k].x.as_slice()).collect();
    let average = || estimate_point_average(&project(&front_x, active)).map(|e| e.point);
    let center = match hybrid.estimator {
        Estimator::PfAverage => average()?,
        Estimator::LeastSquares => {
            let pairs: Vec<MovePair<T>> = offspring
                .iter()
                .zip(children)
                .filter(|(o, c)| dominate(&o.objectives, &parents[c.beaten].objectives) == Ok(Dominance::Dominates))
                .filter_map(|(o, c)| {
                    let sub = project(&[parents[c.beaten].x.as_slice(), o.x.as_slice()], active);
                    MovePair::new(sub[0].clone(), sub[1].clone()).ok()
                })
                .collect();
            match estimate_point_least_squares(&pairs) {
                Ok(e) => e.point,
                Err(_) => average()?,
            }
        }
    };
    let sub_lower: Vec<T> = active.iter().map(|&i| lower[i]).collect();
    let sub_upper: Vec<T> = active.iter().map(|&i| upper[i]).collect();
    let center: Vec<T> = center
        .iter()
        .enumerate()
        .map(|(k, &c)| c.max(sub_lower[k]).min(sub_upper[k]))
        .collect();
    let sigma: Vec<T> = (0..active.len())
        .map(|k| T::lit(hybrid.sigma_frac) * (sub_upper[k] - sub_lower[k]))
        .collect();
    gaussian_samples(&center, count, &sigma, &sub_lower, &sub_upper, rng)
        .iter()
        .enumerate()
        .map(|(k, sub)| assemble(sub, active, front_x[k % front_x.len()]))
        .collect()
}

/// Runs cooperative coevolution over `grouping` until every visit is done or the budget is spent.
///
/// `seeds` are already-evaluated solutions (for example decomposition base
/// points) that enter the archive before optimization starts.
pub fn cc_optimize<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    grouping: &Grouping,
    params: &CcParams,
    budget: &EvaluationBudget,
    seed: u64,
    seeds: &[(Vec<T>, Vec<T>)],
) -> Result<CcOutcome<T>> {
    cc_optimize_traced(problem, grouping, params, budget, seed, seeds, false)
}

/// [`cc_optimize`] that optionally records the archive objectives after every generation.
pub fn cc_optimize_traced<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    grouping: &Grouping,
    params: &CcParams,
    budget: &EvaluationBudget,
    seed: u64,
    seeds: &[(Vec<T>, Vec<T>)],
    record: bool,
) -> Result<CcOutcome<T>> {
    params.nsga2.validate()?;
    let d = problem.dim();
    if grouping.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: grouping.dim(),
        });
    }
    if params.passes == 0 {
        return Err(Error::InvalidArgument("pass count must be >= 1".into()));
    }
    let (lower, upper) = (problem.lower(), problem.upper());
    let s = params.nsga2.pop_size;
    let egs_count = params.hybrid.as_ref().map_or(0, |h| h.sample_count(s));
    let gen_cost = (s + egs_count) as u64;

    let mut rng = stream_rng(seed, STREAM_OPTIMIZATION);
    let mut regroup_rng = stream_rng(seed, STREAM_REGROUP);
    let all: Vec<usize> = (0..d).collect();
    let initial = random_vectors(1, lower, &all, lower, upper, &mut stream_rng(seed, STREAM_CONTEXT)).remove(0);
    let mut context = ContextPopulation::new(initial);
    let mut archive = ParetoArchive::new(params.archive_capacity);
    archive.update(seeds.iter().cloned());
    let mut trace = Vec::new();
    if record {
        trace.push(archive.objectives());
    }

    let mut population: Vec<Individual<T>> = Vec::new();
    let mut groups: Vec<Vec<usize>> = grouping.groups().to_vec();
    let mut generations = 0;
    let mut exhausted = false;
    'passes: for pass in 0..params.passes {
        if pass > 0 {
            if let Some(m) = params.regroup {
                groups = random_grouping_with(d, m.min(d), &mut regroup_rng)?.groups().to_vec();
            }
        }
        let per_pass = params.regroup.map_or(groups.len(), |m| m.min(d));
        for (gi, active) in groups.iter().enumerate() {
            if exhausted || budget.is_exhausted() {
                break 'passes;
            }
            let visits_left = (groups.len() - gi) as u64 + (params.passes - pass - 1) as u64 * per_pass as u64;
            let share = budget.remaining() / visits_left;
            let before = budget.used();
            if pass == 0 {
                let init: Vec<Vec<T>> = (0..s)
                    .map(|k| random_vectors(1, context.get(k), active, lower, upper, &mut rng).remove(0))
                    .collect();
                let (evaluated, truncated) = evaluate_all(problem, init, budget, Stage::Optimization)?;
                archive_extend(&mut archive, &evaluated);
                exhausted |= truncated;
                population = environmental_selection(evaluated, s);
                context.replace(population.iter().map(|i| i.x.clone()).collect(), gi, active);
                if record {
                    trace.push(archive.objectives());
                }
            }
            let spent = budget.used() - before;
            let cap = if visits_left == 1 {
                u64::MAX
            } else {
                share.saturating_sub(spent) / gen_cost
            };
            let mut g = 0;
            while g < cap && !exhausted && population.len() >= 2 && budget.remaining() >= gen_cost {
                let children = make_offspring(&population, s, active, lower, upper, &params.nsga2, &mut rng);
                let (offspring, truncated) = evaluate_all(
                    problem,
                    children.iter().map(|c| c.x.clone()).collect(),
                    budget,
                    Stage::Optimization,
                )?;
                exhausted |= truncated;
                archive_extend(&mut archive, &offspring);
                let mut pool = population.clone();
                pool.extend(offspring.iter().cloned());
                if let Some(h) = &params.hybrid {
                    if !exhausted {
                        let samples = elite_samples(
                            &offspring,
                            &children,
                            &population,
                            active,
                            lower,
                            upper,
                            h,
                            egs_count,
                            &mut rng,
                        )?;
                        let (evaluated, truncated) = evaluate_all(problem, samples, budget, Stage::Optimization)?;
                        exhausted |= truncated;
                        archive_extend(&mut archive, &evaluated);
                        pool.extend(evaluated);
                    }
                }
                population = environmental_selection(pool, s);
                context.replace(population.iter().map(|i| i.x.clone()).collect(), gi, active);
                generations += 1;
                g += 1;
                if record {
                    trace.push(archive.objectives());
                }
            }
        }
    }
    if !population.is_empty() {
        assign_rank_and_crowding(&mut population);
    }
    Ok(CcOutcome {
        archive,
        population,
        context,
        generations,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assemble_examples() {
        assert_eq!(assemble(&[9.0], &[0], &[1.0, 2.0, 3.0]).unwrap(), vec![9.0, 2.0, 3.0]);
        assert_eq!(assemble(&[7.0, 8.0, 9.0], &[0, 1, 2], &[1.0, 2.0, 3.0]).unwrap(), vec![7.0, 8.0, 9.0]);
        let ctx = [0.0; 4];
        let a = assemble(&[5.0], &[3], &assemble(&[1.0, 2.0], &[0, 2], &ctx).unwrap()).unwrap();
        let b = assemble(&[1.0, 2.0], &[0, 2], &assemble(&[5.0], &[3], &ctx).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(assemble(&[1.0, 2.0], &[0, 0], &ctx).is_err());
        assert!(assemble(&[1.0], &[0, 1], &ctx).is_err());
    }

    #[test]
    fn context_tracks_provenance() {
        let mut c = ContextPopulation::new(vec![0.0; 3]);
        c.replace(vec![vec![1.0; 3], vec![2.0; 3]], 4, &[1]);
        assert_eq!(c.provenance(), &[None, Some(4), None]);
        assert_eq!(c.get(3), &[2.0; 3]);
    }
}
