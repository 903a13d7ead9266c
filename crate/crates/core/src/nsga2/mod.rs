//! NSGA-II: dominance, sorting, crowding, variation, and environmental selection.
//!
//! Individuals always carry full decision vectors. Variation touches only the
//! coordinates in an `active` index set, which is how cooperative
//! coevolution restricts the search to one sub-problem while the remaining
//! coordinates act as context.

mod dominance;
mod operators;
mod sort;

use std::cmp::Ordering;

use rand::Rng;

pub use dominance::{dominate, Dominance};
pub use operators::{clip, polynomial_mutation, sbx};
pub use sort::{crowding_distance, fast_nondominated_sort, nondominated_indices, quick_search, QuickSearch};

use crate::budget::{EvaluationBudget, Stage};
use crate::cc::ParetoArchive;
use crate::error::{Error, Result};
use crate::problems::Objective;
use crate::rng::{stream_rng, uniform, STREAM_OPTIMIZATION};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Individual<T> {
    pub x: Vec<T>,
    pub objectives: Vec<T>,
    /// 1-based front index, 0 until sorted.
    pub rank: usize,
    pub crowding: T,
}

impl<T: Scalar> Individual<T> {
    pub fn new(x: Vec<T>, objectives: Vec<T>) -> Self {
        Self {
            x,
            objectives,
            rank: 0,
            crowding: T::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population<T> {
    pub members: Vec<Individual<T>>,
    pub generation: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nsga2Params {
    pub pop_size: usize,
    pub crossover_rate: f64,
    /// Probability that an offspring is mutated at all.
    pub mutation_rate: f64,
    pub eta_crossover: f64,
    pub eta_mutation: f64,
}

impl Default for Nsga2Params {
    fn default() -> Self {
        Self {
            pop_size: 50,
            crossover_rate: 0.9,
            mutation_rate: 0.2,
            eta_crossover: 20.0,
            eta_mutation: 20.0,
        }
    }
}

impl Nsga2Params {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::InvalidArgument(format!(
                "population size must be >= 2, got {}",
                self.pop_size
            )));
        }
        for (name, v) in [
            ("crossover rate", self.crossover_rate),
            ("mutation rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }
}

/// A child decision vector and the parents it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Offspring<T> {
    pub x: Vec<T>,
    /// Population index of the parent whose context coordinates the child inherits.
    pub parent: usize,
    /// Population index of the tournament loser beaten by that parent.
    pub beaten: usize,
}

fn crowded_better<T: Scalar>(a: &Individual<T>, b: &Individual<T>) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.partial_cmp(&a.crowding).unwrap_or(Ordering::Equal))
}

/// Binary tournament on (rank, crowding). Returns `(winner, loser)`; exact ties are broken uniformly.
pub fn tournament<T: Scalar, R: Rng + ?Sized>(members: &[Individual<T>], rng: &mut R) -> (usize, usize) {
    let n = members.len();
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    match crowded_better(&members[a], &members[b]) {
        Ordering::Less => (a, b),
        Ordering::Greater => (b, a),
        Ordering::Equal => {
            if rng.random::<bool>() {
                (a, b)
            } else {
                (b, a)
            }
        }
    }
}

/// Mating attempts per requested child before clones of a parent are accepted.
pub const CLONE_RETRIES: usize = 20;

/// Produces `count` children by tournament selection, SBX, and polynomial mutation on `active`.
///
/// A child identical to one of its parents is discarded and mating repeated,
/// up to [`CLONE_RETRIES`] attempts per child.
pub fn make_offspring<T: Scalar, R: Rng + ?Sized>(
    members: &[Individual<T>],
    count: usize,
    active: &[usize],
    lower: &[T],
    upper: &[T],
    params: &Nsga2Params,
    rng: &mut R,
) -> Vec<Offspring<T>> {
    let mut out = Vec::with_capacity(count + 1);
    let per_var = if active.is_empty() { 0.0 } else { 1.0 / active.len() as f64 };
    let eta_c = T::lit(params.eta_crossover);
    let eta_m = T::lit(params.eta_mutation);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        let allow_clones = attempts > CLONE_RETRIES * count;
        let (w1, l1) = tournament(members, rng);
        let (w2, l2) = tournament(members, rng);
        let (mut c1, mut c2) = if rng.random::<f64>() < params.crossover_rate {
            sbx(&members[w1].x, &members[w2].x, active, lower, upper, eta_c, rng)
        } else {
            (members[w1].x.clone(), members[w2].x.clone())
        };
        for c in [&mut c1, &mut c2] {
            if rng.random::<f64>() < params.mutation_rate {
                polynomial_mutation(c, active, lower, upper, eta_m, per_var, rng);
            }
            clip(c, lower, upper);
        }
        for (c, parent, beaten) in [(c1, w1, l1), (c2, w2, l2)] {
            let clone = c == members[w1].x || c == members[w2].x;
            if allow_clones || !clone {
                out.push(Offspring { x: c, parent, beaten });
            }
        }
    }
    out.truncate(count);
    out
}

/// Sorts `pool` into fronts and assigns rank and crowding to every member.
pub fn assign_rank_and_crowding<T: Scalar>(pool: &mut [Individual<T>]) -> Vec<Vec<usize>> {
    let objs: Vec<Vec<T>> = pool.iter().map(|i| i.objectives.clone()).collect();
    let fronts = fast_nondominated_sort(&objs);
    for (r, front) in fronts.iter().enumerate() {
        let cd = crowding_distance(&objs, front);
        for (&idx, d) in front.iter().zip(cd) {
            pool[idx].rank = r + 1;
            pool[idx].crowding = d;
        }
    }
    fronts
}

/// Keeps `size` members of `pool`: whole fronts first, then the least crowded of the cut front.
pub fn environmental_selection<T: Scalar>(mut pool: Vec<Individual<T>>, size: usize) -> Vec<Individual<T>> {
    let fronts = assign_rank_and_crowding(&mut pool);
    let mut keep: Vec<usize> = Vec::with_capacity(size);
    for front in fronts {
        if keep.len() + front.len() <= size {
            keep.extend(front);
            if keep.len() == size {
                break;
            }
            continue;
        }
        let mut cut = front;
        cut.sort_by(|&a, &b| {
            pool[b]
                .crowding
                .partial_cmp(&pool[a].crowding)
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        keep.extend(cut.into_iter().take(size - keep.len()));
        break;
    }
    keep.sort_unstable();
    let mut slots: Vec<Option<Individual<T>>> = pool.into_iter().map(Some).collect();
    let mut selected: Vec<Individual<T>> = keep.into_iter().map(|i| slots[i].take().expect("unique index")).collect();
    // crowding is recomputed within the survivors so tournaments see the new population
    assign_rank_and_crowding(&mut selected);
    selected
}

/// Outcome of one NSGA-II generation.
#[derive(Debug, Clone)]
pub struct GenerationOutcome<T> {
    pub population: Vec<Individual<T>>,
    /// Evaluated offspring (possibly fewer than requested when the budget ran out).
    pub offspring: Vec<Individual<T>>,
    pub truncated: bool,
}

/// Evaluates candidates in order until the budget refuses a charge.
pub fn evaluate_all<T: Scalar, O: Objective<T> + ?Sized>(
    objective: &O,
    candidates: Vec<Vec<T>>,
    budget: &EvaluationBudget,
    stage: Stage,
) -> Result<(Vec<Individual<T>>, bool)> {
    let mut out = Vec::with_capacity(candidates.len());
    for x in candidates {
        if budget.charge(stage, 1).is_err() {
            return Ok((out, true));
        }
        let f = objective.evaluate(&x)?;
        out.push(Individual::new(x, f));
    }
    Ok((out, false))
}

/// One generation: variation on `active`, evaluation, and (mu + lambda) survival.
pub fn nsga2_generation<T: Scalar, O: Objective<T> + ?Sized, R: Rng + ?Sized>(
    objective: &O,
    population: Vec<Individual<T>>,
    active: &[usize],
    params: &Nsga2Params,
    budget: &EvaluationBudget,
    rng: &mut R,
) -> Result<GenerationOutcome<T>> {
    let size = population.len();
    let children = make_offspring(
        &population,
        size,
        active,
        objective.lower(),
        objective.upper(),
        params,
        rng,
    );
    let (offspring, truncated) = evaluate_all(
        objective,
        children.into_iter().map(|c| c.x).collect(),
        budget,
        Stage::Optimization,
    )?;
    let mut pool = population;
    pool.extend(offspring.iter().cloned());
    Ok(GenerationOutcome {
        population: environmental_selection(pool, size),
        offspring,
        truncated,
    })
}

/// Uniform random vectors on `active` coordinates; other coordinates are copied from `base`.
pub fn random_vectors<T: Scalar, R: Rng + ?Sized>(
    count: usize,
    base: &[T],
    active: &[usize],
    lower: &[T],
    upper: &[T],
    rng: &mut R,
) -> Vec<Vec<T>> {
    (0..count)
        .map(|_| {
            let mut x = base.to_vec();
            for &i in active {
                x[i] = uniform(rng, lower[i], upper[i]);
            }
            x
        })
        .collect()
}

/// Result of a plain full-space NSGA-II run.
#[derive(Debug, Clone)]
pub struct Nsga2Outcome<T> {
    pub population: Vec<Individual<T>>,
    pub archive: ParetoArchive<T>,
    pub generations: usize,
}

/// Plain NSGA-II over all variables until the budget is spent.
pub fn optimize<T: Scalar, O: Objective<T> + ?Sized>(
    objective: &O,
    params: &Nsga2Params,
    archive_capacity: usize,
    budget: &EvaluationBudget,
    seed: u64,
) -> Result<Nsga2Outcome<T>> {
    params.validate()?;
    let mut rng = stream_rng(seed, STREAM_OPTIMIZATION);
    let d = objective.dim();
    let active: Vec<usize> = (0..d).collect();
    let base = objective.lower().to_vec();
    let init = random_vectors(params.pop_size, &base, &active, objective.lower(), objective.upper(), &mut rng);
    let (mut population, mut exhausted) = evaluate_all(objective, init, budget, Stage::Optimization)?;
    let mut archive = ParetoArchive::new(archive_capacity);
    archive.update(population.iter().map(|i| (i.x.clone(), i.objectives.clone())));
    assign_rank_and_crowding(&mut population);
    let mut generations = 0;
    while !exhausted && population.len() >= 2 && budget.remaining() >= params.pop_size as u64 {
        let out = nsga2_generation(objective, population, &active, params, budget, &mut rng)?;
        archive.update(out.offspring.iter().map(|i| (i.x.clone(), i.objectives.clone())));
        population = out.population;
        exhausted = out.truncated;
        generations += 1;
    }
    Ok(Nsga2Outcome {
        population,
        archive,
        generations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_problem;

    fn ind(f: &[f64]) -> Individual<f64> {
        Individual::new(vec![0.0], f.to_vec())
    }

    #[test]
    fn selection_truncates_cut_front_by_crowding() {
        // five mutually non-dominated points, keep three: both extremes plus the most isolated interior
        let pool: Vec<_> = [[0.0, 4.0], [0.1, 3.9], [2.0, 2.0], [3.9, 0.1], [4.0, 0.0]]
            .iter()
            .map(|f| ind(f))
            .collect();
        let kept = environmental_selection(pool, 3);
        let firsts: Vec<f64> = kept.iter().map(|i| i.objectives[0]).collect();
        assert_eq!(firsts, vec![0.0, 2.0, 4.0]);
    }

    #[test]
    fn selection_prefers_better_fronts() {
        let pool: Vec<_> = [[1.0, 1.0], [2.0, 2.0], [0.5, 3.0], [3.0, 3.0]]
            .iter()
            .map(|f| ind(f))
            .collect();
        let kept = environmental_selection(pool, 2);
        assert!(kept.iter().all(|i| i.rank == 1));
    }

    #[test]
    fn no_variation_keeps_best_front() {
        let p: crate::problems::Problem<f64> = make_problem("ZDT1", 5, 2).unwrap();
        let params = Nsga2Params {
            pop_size: 10,
            crossover_rate: 0.0,
            mutation_rate: 0.0,
            ..Default::default()
        };
        let budget = EvaluationBudget::unlimited();
        let mut rng = stream_rng(1, 0);
        let active: Vec<usize> = (0..5).collect();
        let init = random_vectors(10, &[0.0; 5], &active, p.lower(), p.upper(), &mut rng);
        let (mut pop, _) = evaluate_all(&p, init, &budget, Stage::Optimization).unwrap();
        assign_rank_and_crowding(&mut pop);
        let best: Vec<Vec<f64>> = pop.iter().filter(|i| i.rank == 1).map(|i| i.objectives.clone()).collect();
        for _ in 0..5 {
            pop = nsga2_generation(&p, pop, &active, &params, &budget, &mut rng).unwrap().population;
            for b in &best {
                assert!(pop.iter().any(|i| &i.objectives == b));
            }
        }
    }

    #[test]
    fn tournament_prefers_lower_rank() {
        let mut rng = stream_rng(5, 0);
        let mut a = ind(&[0.0, 0.0]);
        a.rank = 1;
        let mut b = ind(&[1.0, 1.0]);
        b.rank = 2;
        let members = vec![a, b];
        for _ in 0..50 {
            let (w, l) = tournament(&members, &mut rng);
            if w != l {
                assert_eq!((w, l), (0, 1));
            }
        }
    }

    #[test]
    fn optimize_respects_budget() {
        let p: crate::problems::Problem<f64> = make_problem("ZDT2", 10, 2).unwrap();
        let budget = EvaluationBudget::new(1234);
        let out = optimize(&p, &Nsga2Params::default(), 100, &budget, 3).unwrap();
        assert!(budget.used() <= 1234);
        assert!(out.generations > 0);
        assert!(!out.archive.is_empty());
    }
}
