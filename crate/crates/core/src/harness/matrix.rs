use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{GrouperKind, Method, RunConfig};
use crate::budget::EvaluationBudget;
use crate::cc::{cc_optimize, ArchiveEntry, CcParams};
use crate::error::{Error, Result};
use crate::grouping::{dg_decompose, limd_decompose, lmm_decompose, random_grouping, DecompositionResult, Grouping};
use crate::indicators::{default_reference_point, hypervolume, igd};
use crate::problems::{make_problem, Objective, Problem};

/// One (method, seed) cell before indicators are attached.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub method: Method,
    pub seed: u64,
    pub fes_decomp: u64,
    pub fes_opt: u64,
    pub wallclock_ms: u64,
    pub fully_separable: bool,
    pub group_count: usize,
    pub archive: Vec<ArchiveEntry<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub problem: String,
    pub dim: usize,
    pub objectives: usize,
    pub grouper: String,
    pub hybrid: bool,
    pub seed: u64,
    pub fes_decomp: u64,
    pub fes_opt: u64,
    pub hv: f64,
    pub hv_stderr: Option<f64>,
    pub igd: f64,
    pub wallclock_ms: u64,
    pub archive_size: usize,
    pub fully_separable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                median: f64::NAN,
                std: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, median, std }
    }
}

/// Per-method rows, aggregates, and final archives.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub method: Method,
    pub rows: Vec<RunRow>,
    pub hv: Summary,
    pub igd: Summary,
    pub archives: Vec<(u64, Vec<ArchiveEntry<f64>>)>,
}

#[derive(Debug, Clone)]
pub struct MatrixReport {
    pub reports: Vec<RunReport>,
    pub reference_point: Vec<f64>,
    pub reference_set_size: usize,
    /// Cells that failed, as `(method, seed, message)`.
    pub failures: Vec<(Method, u64, String)>,
}

impl MatrixReport {
    pub fn rows(&self) -> impl Iterator<Item = &RunRow> {
        self.reports.iter().flat_map(|r| r.rows.iter())
    }

    pub fn report(&self, method: Method) -> Option<&RunReport> {
        self.reports.iter().find(|r| r.method == method)
    }
}

pub fn build_problem(cfg: &RunConfig) -> Result<Problem<f64>> {
    make_problem(&cfg.problem, cfg.dim, cfg.num_objectives()?)
}

fn decompose(
    problem: &Problem<f64>,
    cfg: &RunConfig,
    grouper: GrouperKind,
    budget: &EvaluationBudget,
    seed: u64,
) -> Result<DecompositionResult<f64>> {
    let d = problem.dim();
    let trivial = |grouping: Grouping| DecompositionResult {
        grouping,
        fes_consumed: 0,
        detected_fully_separable: false,
        measure_history: Vec::new(),
        budget_exhausted: false,
        base_points: Vec::new(),
    };
    match grouper {
        GrouperKind::None => Ok(trivial(Grouping::single(d))),
        GrouperKind::Random => Ok(trivial(random_grouping(d, cfg.random.groups.min(d), seed)?)),
        GrouperKind::Lmm => lmm_decompose(problem, &cfg.lmm, budget, seed),
        GrouperKind::Dg => dg_decompose(problem, cfg.dg.epsilon, budget, seed),
        GrouperKind::Limd => limd_decompose(problem, budget, seed),
    }
}

/// Runs the decomposition stage alone.
pub fn run_decomposition(
    cfg: &RunConfig,
    grouper: GrouperKind,
    seed: u64,
) -> Result<(DecompositionResult<f64>, EvaluationBudget)> {
    let problem = build_problem(cfg)?;
    let budget = EvaluationBudget::new(cfg.budget);
    let result = decompose(&problem, cfg, grouper, &budget, seed)?;
    Ok((result, budget))
}

/// Decomposition followed by cooperative-coevolutionary optimization for one seed.
pub fn run_single(problem: &Problem<f64>, cfg: &RunConfig, method: Method, seed: u64) -> Result<RunOutcome> {
    let start = Instant::now();
    let budget = EvaluationBudget::new(cfg.budget);
    let decomposition = decompose(problem, cfg, method.grouper, &budget, seed)?;
    let dynamic = method.grouper == GrouperKind::Random && cfg.random.dynamic;
    let params = CcParams {
        nsga2: cfg.optimizer.nsga2(),
        hybrid: method.hybrid.then(|| cfg.sampling.params()),
        archive_capacity: cfg.optimizer.archive_capacity,
        passes: cfg.optimizer.passes,
        regroup: dynamic.then(|| cfg.random.groups.min(problem.dim())),
    };
    let out = cc_optimize(problem, &decomposition.grouping, &params, &budget, seed, &decomposition.base_points)?;
    let wallclock_ms = if cfg.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(RunOutcome {
        method,
        seed,
        fes_decomp: budget.used_decomposition(),
        fes_opt: budget.used_optimization(),
        wallclock_ms,
        fully_separable: decomposition.detected_fully_separable,
        group_count: decomposition.grouping.group_count(),
        archive: out.archive.entries().to_vec(),
    })
}

/// Runs every (method, seed) cell, then scores all archives against one reference point and set.
pub fn run_matrix(cfg: &RunConfig, methods: &[Method]) -> Result<MatrixReport> {
    cfg.validate()?;
    if methods.is_empty() {
        return Err(Error::Empty("method list"));
    }
    let problem = build_problem(cfg)?;
    let reference = problem.sample_true_pf(cfg.reference_set_size)?;
    let cells: Vec<(Method, u64)> = methods
        .iter()
        .flat_map(|&m| cfg.seeds.0.iter().map(move |&s| (m, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    let outcomes: Vec<Result<RunOutcome>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(m, s)| run_single(&problem, cfg, m, s))
            .collect()
    });

    let mut failures = Vec::new();
    let mut done = Vec::new();
    for ((m, s), outcome) in cells.iter().zip(outcomes) {
        match outcome {
            Ok(o) => done.push(o),
            Err(e) => failures.push((*m, *s, e.to_string())),
        }
    }
    let sets: Vec<Vec<Vec<f64>>> = done
        .iter()
        .map(|o| o.archive.iter().map(|e| e.objectives.clone()).collect())
        .collect();
    let reference_point = default_reference_point(&sets)?;

    let mut reports = Vec::with_capacity(methods.len());
    for &method in methods {
        let mut rows = Vec::new();
        let mut archives = Vec::new();
        for o in done.iter().filter(|o| o.method == method) {
            let objs: Vec<Vec<f64>> = o.archive.iter().map(|e| e.objectives.clone()).collect();
            let hv = hypervolume(&objs, &reference_point)?;
            rows.push(RunRow {
                problem: problem.name().to_string(),
                dim: problem.dim(),
                objectives: problem.num_objectives(),
                grouper: method.grouper.to_string(),
                hybrid: method.hybrid,
                seed: o.seed,
                fes_decomp: o.fes_decomp,
                fes_opt: o.fes_opt,
                hv: hv.value,
                hv_stderr: hv.stderr,
                igd: igd(&objs, &reference)?,
                wallclock_ms: o.wallclock_ms,
                archive_size: o.archive.len(),
                fully_separable: o.fully_separable,
            });
            archives.push((o.seed, o.archive.clone()));
        }
        let hv: Vec<f64> = rows.iter().map(|r| r.hv).collect();
        let ig: Vec<f64> = rows.iter().map(|r| r.igd).collect();
        reports.push(RunReport {
            method,
            hv: Summary::of(&hv),
            igd: Summary::of(&ig),
            rows,
            archives,
        });
    }
    Ok(MatrixReport {
        reports,
        reference_point,
        reference_set_size: reference.len(),
        failures,
    })
}
