//! Decomposition by minimizing the penalized linkage measure with an elitist GA.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::linkage::{linkage_measure, LinkageSample, DEFAULT_DELTA_FRAC};
use super::{DecompositionResult, Grouping};
use crate::budget::EvaluationBudget;
use crate::error::{Error, Result};
use crate::nsga2::random_vectors;
use crate::problems::Objective;
use crate::rng::{stream_rng, STREAM_DECOMPOSITION};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LmmParams {
    pub pop_size: usize,
    pub generations: usize,
    /// Labels are drawn from `0..2^gene_length`.
    pub gene_length: u32,
    pub samples: usize,
    pub crossover_rate: f64,
    /// Fully-separable pre-check threshold on the linkage measure.
    pub threshold: f64,
    pub delta_frac: f64,
}

impl Default for LmmParams {
    fn default() -> Self {
        Self {
            pop_size: 20,
            generations: 20,
            gene_length: 6,
            samples: 3,
            crossover_rate: 0.9,
            threshold: 0.01,
            delta_frac: DEFAULT_DELTA_FRAC,
        }
    }
}

impl LmmParams {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::InvalidArgument("LMM population size must be >= 2".into()));
        }
        if !(1..=31).contains(&self.gene_length) {
            return Err(Error::InvalidArgument(format!(
                "gene length must lie in 1..=31, got {}",
                self.gene_length
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("sample count must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::InvalidArgument("crossover rate must lie in [0, 1]".into()));
        }
        if !(self.delta_frac > 0.0 && self.delta_frac <= 1.0) {
            return Err(Error::InvalidArgument("delta fraction must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn label_count(&self) -> u32 {
        1u32 << self.gene_length
    }
}

/// Relative rounding-noise floor on the linkage measure.
pub const MEASURE_NOISE: f64 = 1e-9;

/// GA fitness of a label vector: lower measure wins, then more groups.
///
/// Measures below [`MEASURE_NOISE`] times the largest `|f(s)|` are stored as
/// zero, so groupings whose residual is only rounding noise tie and the finer
/// one wins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelFitness {
    pub measure: f64,
    pub groups: usize,
}

impl LabelFitness {
    pub fn cmp_better(&self, other: &Self) -> Ordering {
        self.measure
            .partial_cmp(&other.measure)
            .unwrap_or(Ordering::Equal)
            .then(other.groups.cmp(&self.groups))
    }
}

/// Selection, one-point crossover, and uniform relabel mutation over a label population.
pub fn ega_generation<R: Rng + ?Sized>(
    population: &[Vec<u32>],
    fitnesses: &[LabelFitness],
    label_count: u32,
    crossover_rate: f64,
    mutation_rate: f64,
    rng: &mut R,
) -> Vec<Vec<u32>> {
    let n = population.len();
    let pick = |rng: &mut R| {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if fitnesses[b].cmp_better(&fitnesses[a]) == Ordering::Less {
            b
        } else {
            a
        }
    };
    let mut next = Vec::with_capacity(n + 1);
    while next.len() < n {
        let p1 = &population[pick(rng)];
        let p2 = &population[pick(rng)];
        let (mut c1, mut c2) = (p1.clone(), p2.clone());
        let d = p1.len();
        if d > 1 && rng.random::<f64>() < crossover_rate {
            let cut = rng.random_range(1..d);
            c1[cut..].copy_from_slice(&p2[cut..]);
            c2[cut..].copy_from_slice(&p1[cut..]);
        }
        for c in [&mut c1, &mut c2] {
            for gene in c.iter_mut() {
                if rng.random::<f64>() < mutation_rate {
                    *gene = rng.random_range(0..label_count);
                }
            }
        }
        next.push(c1);
        next.push(c2);
    }
    next.truncate(n);
    next
}

/// Copies the elite over the worst member unless an equal-or-better copy is already present.
pub fn reserve_elite(population: &mut [Vec<u32>], fitnesses: &mut [LabelFitness], elite: &[u32], elite_fitness: LabelFitness) {
    if population.iter().any(|p| p == elite) {
        return;
    }
    let worst = (0..population.len())
        .max_by(|&a, &b| fitnesses[a].cmp_better(&fitnesses[b]).then(a.cmp(&b)))
        .expect("non-empty population");
    population[worst] = elite.to_vec();
    fitnesses[worst] = elite_fitness;
}

fn fitness_of<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    samples: &mut [LinkageSample<T>],
    grouping: &Grouping,
    weights: &[T],
    floor: f64,
    budget: &EvaluationBudget,
) -> Result<LabelFitness> {
    let groups = grouping.group_count();
    if groups < 2 {
        return Ok(LabelFitness {
            measure: f64::INFINITY,
            groups,
        });
    }
    let measure = linkage_measure(problem, samples, grouping, weights, budget)?;
    Ok(LabelFitness {
        measure: Some(measure.to_f64_lossy()).filter(|&m| m >= floor).unwrap_or(0.0),
        groups,
    })
}

/// Searches for the grouping with the smallest linkage measure.
///
/// Samples are built first; if the all-singletons grouping already scores
/// below `threshold` it is returned without running the GA.
pub fn lmm_decompose<T: Scalar, O: Objective<T> + ?Sized>(
    problem: &O,
    params: &LmmParams,
    budget: &EvaluationBudget,
    seed: u64,
) -> Result<DecompositionResult<T>> {
    params.validate()?;
    let d = problem.dim();
    let m = problem.num_objectives();
    let start = budget.used_decomposition();
    let mut rng = stream_rng(seed, STREAM_DECOMPOSITION);
    let weights = vec![T::one() / T::from_count(m); m];
    let all: Vec<usize> = (0..d).collect();
    let bases = random_vectors(params.samples, problem.lower(), &all, problem.lower(), problem.upper(), &mut rng);
    let mut samples = Vec::with_capacity(bases.len());
    for s in bases {
        samples.push(LinkageSample::new(problem, s, T::lit(params.delta_frac), budget)?);
    }
    let base_points: Vec<(Vec<T>, Vec<T>)> = samples.iter().map(|s| (s.s.clone(), s.f_s.clone())).collect();

    let scale = samples
        .iter()
        .flat_map(|s| s.f_s.iter())
        .map(|v| v.to_f64_lossy().abs())
        .fold(1.0, f64::max);
    let floor = MEASURE_NOISE * scale;
    let singles = Grouping::singletons(d);
    let mut best_grouping = singles.clone();
    let mut best = fitness_of(problem, &mut samples, &singles, &weights, floor, budget)?;
    let finish = |grouping: Grouping, history: Vec<f64>, separable: bool, exhausted: bool| DecompositionResult {
        grouping,
        fes_consumed: budget.used_decomposition() - start,
        detected_fully_separable: separable,
        measure_history: history,
        budget_exhausted: exhausted,
        base_points: base_points.clone(),
    };
    if best.measure < params.threshold {
        return Ok(finish(singles, vec![best.measure], true, false));
    }

    let labels = params.label_count();
    let mutation_rate = 1.0 / d as f64;
    let mut history = Vec::with_capacity(params.generations + 1);
    let mut population: Vec<Vec<u32>> = (0..params.pop_size)
        .map(|_| (0..d).map(|_| rng.random_range(0..labels)).collect())
        .collect();
    let mut exhausted = false;
    let mut fitnesses = Vec::with_capacity(population.len());
    for p in &population {
        let g = Grouping::from_labels(p.clone())?;
        match fitness_of(problem, &mut samples, &g, &weights, floor, budget) {
            Ok(f) => fitnesses.push(f),
            Err(Error::BudgetExhausted { .. }) => {
                exhausted = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    population.truncate(fitnesses.len());
    if population.is_empty() {
        return Ok(finish(best_grouping, vec![best.measure], false, true));
    }
    let better_of = |pop: &[Vec<u32>], fits: &[LabelFitness]| {
        (0..pop.len())
            .min_by(|&a, &b| fits[a].cmp_better(&fits[b]).then(a.cmp(&b)))
            .expect("non-empty")
    };
    let mut elite_idx = better_of(&population, &fitnesses);
    let mut elite = (population[elite_idx].clone(), fitnesses[elite_idx]);
    if elite.1.cmp_better(&best) == Ordering::Less {
        best = elite.1;
        best_grouping = Grouping::from_labels(elite.0.clone())?;
    }
    history.push(best.measure);

    for _ in 0..params.generations {
        if exhausted {
            break;
        }
        let offspring = ega_generation(&population, &fitnesses, labels, params.crossover_rate, mutation_rate, &mut rng);
        let mut next = Vec::with_capacity(offspring.len());
        let mut next_fit = Vec::with_capacity(offspring.len());
        for child in offspring {
            let g = Grouping::from_labels(child.clone())?;
            match fitness_of(problem, &mut samples, &g, &weights, floor, budget) {
                Ok(f) => {
                    next.push(child);
                    next_fit.push(f);
                }
                Err(Error::BudgetExhausted { .. }) => {
                    exhausted = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if next.is_empty() {
            break;
        }
        reserve_elite(&mut next, &mut next_fit, &elite.0, elite.1);
        population = next;
        fitnesses = next_fit;
        elite_idx = better_of(&population, &fitnesses);
        elite = (population[elite_idx].clone(), fitnesses[elite_idx]);
        if elite.1.cmp_better(&best) == Ordering::Less {
            best = elite.1;
            best_grouping = Grouping::from_labels(elite.0.clone())?;
        }
        history.push(best.measure);
    }
    Ok(finish(best_grouping, history, false, exhausted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn fit(m: f64) -> LabelFitness {
        LabelFitness { measure: m, groups: 2 }
    }

    #[test]
    fn identical_population_without_mutation_is_fixed() {
        let pop = vec![vec![1, 2, 3, 1]; 6];
        let fits = vec![fit(0.5); 6];
        let mut rng = stream_rng(3, 0);
        let next = ega_generation(&pop, &fits, 64, 0.9, 0.0, &mut rng);
        assert_eq!(next, pop);
    }

    #[test]
    fn elite_replaces_worst() {
        let mut pop = vec![vec![0, 1], vec![1, 0], vec![1, 1]];
        let mut fits = vec![fit(0.3), fit(0.9), fit(0.2)];
        reserve_elite(&mut pop, &mut fits, &[0, 0], fit(0.1));
        assert_eq!(pop[1], vec![0, 0]);
        assert_eq!(fits[1].measure, 0.1);
    }

    #[test]
    fn ties_prefer_more_groups() {
        let a = LabelFitness { measure: 0.2, groups: 3 };
        let b = LabelFitness { measure: 0.2, groups: 5 };
        assert_eq!(b.cmp_better(&a), Ordering::Less);
        let inf = LabelFitness { measure: f64::INFINITY, groups: 1 };
        assert_eq!(a.cmp_better(&inf), Ordering::Less);
    }

    #[test]
    fn rounding_noise_counts_as_zero() {
        use crate::problems::FnObjective;
        let p = FnObjective::uniform(4, 0.0, 10.0, 1, |x: &[f64]| vec![x[0] * x[1] + x[2] * x[3]]);
        let budget = EvaluationBudget::unlimited();
        let mut samples = vec![LinkageSample::new(&p, vec![1.1, 2.3, 3.7, 4.9], 0.1, &budget).unwrap()];
        let pairs = Grouping::from_groups(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let broken = Grouping::from_groups(4, vec![vec![0], vec![1], vec![2, 3]]).unwrap();
        let fine = fitness_of(&p, &mut samples, &pairs, &[1.0], 1e-6, &budget).unwrap();
        assert_eq!(fine.measure, 0.0);
        let bad = fitness_of(&p, &mut samples, &broken, &[1.0], 1e-6, &budget).unwrap();
        assert!(bad.measure > 0.1);
    }
}
