mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use coevo::grouping::{linkage_measure, lmm_decompose, Grouping, LinkageSample, LmmParams, MEASURE_NOISE};
use coevo::harness::{emit_reports, run_matrix, Method, RunConfig, RUNS_FILE};
use coevo::hybrid::{estimate_point_least_squares, MovePair};
use coevo::indicators::{hypervolume, hypervolume_exact, hypervolume_monte_carlo, igd};
use coevo::nsga2::{fast_nondominated_sort, optimize, quick_search, Nsga2Params};
use coevo::problems::FnObjective;
use coevo::{make_problem, EvaluationBudget, Error, Problem64};
use common::{brute_nondominated, sorted};
use rand::Rng;

const DOMINANCE_POPULATIONS: usize = 1000;
const DOMINANCE_LIMIT: Duration = Duration::from_secs(10);
const HV_INSTANCES: usize = 100;
const HV_MC_SAMPLES: usize = 1_000_000;
const HV_MC_SEED: u64 = 20_240_601;
const HV_SIGMAS: f64 = 3.0;
const HV_LIMIT: Duration = Duration::from_secs(60);
const IGD_TOL: f64 = 1e-12;
const LS_TOL: f64 = 1e-9;
const LS_LIMIT: Duration = Duration::from_secs(1);
const PRECHECK_LIMIT: Duration = Duration::from_secs(30);
const RECOVERY_SEEDS: u64 = 30;
const RECOVERY_REQUIRED: usize = 24;
const RECOVERY_LIMIT: Duration = Duration::from_secs(60);
const NSGA_IGD_BOUND: f64 = 0.05;
const NSGA_LIMIT: Duration = Duration::from_secs(120);
const DESK_LIMIT: Duration = Duration::from_secs(600);
const DESK_DIM: usize = 100;
const DESK_BUDGET: u64 = 50_000;

struct Ledger {
    failed: usize,
}

impl Ledger {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn dominance_oracle() -> (bool, String) {
    let start = Instant::now();
    let mut rng = common::rng(1);
    let mut mismatches = 0;
    for _ in 0..DOMINANCE_POPULATIONS {
        let n = rng.random_range(1..=64);
        let m = rng.random_range(2..=4);
        let pop = common::random_population(&mut rng, n, m);
        let brute = brute_nondominated(&pop);
        if quick_search(&pop).indices != brute || sorted(fast_nondominated_sort(&pop)[0].clone()) != brute {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    (
        mismatches == 0 && t < DOMINANCE_LIMIT,
        format!("{mismatches} mismatches over {DOMINANCE_POPULATIONS} populations in {t:.2?}"),
    )
}

fn hv_correctness() -> (bool, String) {
    let start = Instant::now();
    let examples = [
        (vec![vec![1.0, 1.0]], vec![2.0, 2.0], 1.0),
        (vec![vec![1.0, 2.0], vec![2.0, 1.0]], vec![3.0, 3.0], 3.0),
        (vec![vec![1.0, 1.0], vec![1.5, 1.5]], vec![2.0, 2.0], 1.0),
    ];
    let examples_ok = examples
        .iter()
        .all(|(a, r, want)| hypervolume(a, r).unwrap().value == *want);
    let mut rng = common::rng(HV_MC_SEED);
    let mut worst: f64 = 0.0;
    let mut outside = 0;
    for k in 0..HV_INSTANCES {
        let m = 2 + k % 2;
        let n = rng.random_range(1..=12);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect();
        let r = vec![1.0; m];
        let exact = hypervolume_exact(&pts, &r).unwrap();
        let mc = hypervolume_monte_carlo(&pts, &r, HV_MC_SAMPLES, HV_MC_SEED + k as u64).unwrap();
        let se = mc.stderr.unwrap();
        let gap = (exact - mc.value).abs();
        // every sample hits when the boxes cover the sampling region, making the estimate exact
        let z = if se > 0.0 { gap / se } else if gap <= 1e-12 * exact { 0.0 } else { f64::INFINITY };
        worst = worst.max(z);
        if z > HV_SIGMAS {
            outside += 1;
        }
    }
    let t = start.elapsed();
    (
        examples_ok && outside == 0 && t < HV_LIMIT,
        format!("examples {}, {outside}/{HV_INSTANCES} beyond {HV_SIGMAS} SE (max {worst:.2} SE) in {t:.2?}", if examples_ok { "exact" } else { "WRONG" }),
    )
}

fn igd_correctness() -> (bool, String) {
    let r: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
    let self_igd = igd(&r, &r).unwrap();
    let a = igd(&[vec![0.0, 0.0]], &r).unwrap();
    let b = igd(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[vec![0.5, 0.5]]).unwrap();
    let errs = [self_igd.abs(), (a - 2f64.sqrt() / 2.0).abs(), (b - 0.5f64.sqrt()).abs()];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    (worst <= IGD_TOL, format!("max error {worst:.1e}"))
}

fn estimator_recovery() -> (bool, String) {
    let start = Instant::now();
    let mut rng = common::rng(7);
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let pairs: Vec<MovePair<f64>> = (0..5)
            .map(|_| {
                let d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let t = rng.random_range(0.5..3.0);
                let p: Vec<f64> = z.iter().zip(&d).map(|(zi, di)| zi - t * di).collect();
                MovePair::from_direction(p, &d).unwrap()
            })
            .collect();
        let est = estimate_point_least_squares(&pairs).unwrap();
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max(common::euclid(&est.point, &z) / norm);
    }
    let parallel: Vec<MovePair<f64>> = (0..5)
        .map(|k| MovePair::from_direction(vec![0.0, k as f64, 1.0], &[1.0 + k as f64, 0.0, 0.0]).unwrap())
        .collect();
    let singular = matches!(estimate_point_least_squares(&parallel), Err(Error::Singular { .. }));
    let t = start.elapsed();
    (
        worst <= LS_TOL && singular && t < LS_LIMIT,
        format!("max relative error {worst:.1e} over 2..10-D, parallel input singular: {singular}, {t:.2?}"),
    )
}

fn lmm_separability() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["ZDT1", "ZDT2", "ZDT3", "ZDT4", "ZDT6"] {
        let start = Instant::now();
        let mut fes = Vec::new();
        for d in [100usize, 500, 1000] {
            let p: Problem64 = make_problem(name, d, 2).unwrap();
            let r = lmm_decompose(&p, &LmmParams::default(), &EvaluationBudget::unlimited(), 1).unwrap();
            ok &= r.detected_fully_separable && r.fes_consumed == 3 * (d as u64 + 1);
            fes.push(r.fes_consumed);
        }
        let t = start.elapsed();
        ok &= t < PRECHECK_LIMIT;
        parts.push(format!("{name} fes {fes:?} {t:.2?}"));
    }
    (ok, parts.join("; "))
}

fn paired_synthetic() -> FnObjective<f64, impl Fn(&[f64]) -> Vec<f64> + Sync> {
    FnObjective::uniform(8, 0.0, 10.0, 2, |x: &[f64]| {
        let f1 = (0..4).map(|k| x[2 * k] * x[2 * k + 1]).sum();
        let f2 = (0..4).map(|k| x[2 * k] * x[2 * k] * x[2 * k + 1]).sum();
        vec![f1, f2]
    })
}

fn pairs_together(labels: &[u32]) -> bool {
    (0..4).all(|k| labels[2 * k] == labels[2 * k + 1])
}

fn structure_recovery() -> (bool, String) {
    let start = Instant::now();
    let p = paired_synthetic();
    let partitions: Vec<Grouping> = common::set_partitions(8)
        .into_iter()
        .map(|l| Grouping::from_labels(l).unwrap())
        .filter(|g| g.group_count() >= 2)
        .collect();
    let params = LmmParams {
        gene_length: 2,
        ..Default::default()
    };
    let mut recovered = 0;
    let mut oracle_agrees = 0;
    let mut ga_not_below_oracle = true;
    for seed in 0..RECOVERY_SEEDS {
        let r = lmm_decompose(&p, &params, &EvaluationBudget::unlimited(), seed).unwrap();
        if pairs_together(r.grouping.labels()) {
            recovered += 1;
        }
        let unlimited = EvaluationBudget::unlimited();
        let mut samples: Vec<LinkageSample<f64>> = r
            .base_points
            .iter()
            .map(|(x, _)| LinkageSample::new(&p, x.clone(), 0.1, &unlimited).unwrap())
            .collect();
        let scale = r.base_points.iter().flat_map(|(_, f)| f.iter()).fold(1.0f64, |m, v| m.max(v.abs()));
        let floor = MEASURE_NOISE * scale;
        let mut best: Option<(f64, usize, &Grouping)> = None;
        for g in &partitions {
            let m = linkage_measure(&p, &mut samples, g, &[0.5, 0.5], &unlimited).unwrap();
            let m = if m < floor { 0.0 } else { m };
            let better = match best {
                None => true,
                Some((bm, bg, _)) => m < bm || (m == bm && g.group_count() > bg),
            };
            if better {
                best = Some((m, g.group_count(), g));
            }
        }
        let (oracle_measure, _, oracle) = best.unwrap();
        if pairs_together(oracle.labels()) && oracle.group_count() == 4 {
            oracle_agrees += 1;
        }
        let ga_measure = *r.measure_history.last().unwrap();
        ga_not_below_oracle &= ga_measure >= oracle_measure;
    }
    let t = start.elapsed();
    (
        recovered >= RECOVERY_REQUIRED
            && oracle_agrees == RECOVERY_SEEDS as usize
            && ga_not_below_oracle
            && t < RECOVERY_LIMIT,
        format!(
            "pairs grouped in {recovered}/{RECOVERY_SEEDS} seeds (need {RECOVERY_REQUIRED}); oracle optimum over {} partitions is the pair grouping in {oracle_agrees}/{RECOVERY_SEEDS}; {t:.2?}",
            partitions.len() + 1
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn nsga2_sanity(budget_ok: &mut bool) -> (bool, String) {
    let start = Instant::now();
    let p: Problem64 = make_problem("ZDT1", 30, 2).unwrap();
    let reference = p.sample_true_pf(1000).unwrap();
    let mut values = Vec::new();
    for seed in 1..=10 {
        let b = EvaluationBudget::new(25_000);
        let out = optimize(&p, &Nsga2Params::default(), 200, &b, seed).unwrap();
        *budget_ok &= b.used() <= 25_000;
        values.push(igd(&out.archive.objectives(), &reference).unwrap());
    }
    let med = median(values);
    let t = start.elapsed();
    (
        med < NSGA_IGD_BOUND && t < NSGA_LIMIT,
        format!("median IGD {med:.5} (bound {NSGA_IGD_BOUND}) in {t:.2?}"),
    )
}

/// Per-method median IGD and the largest budget overrun read back from `runs.csv`.
fn read_runs(dir: &Path, budget: u64) -> (Vec<(String, f64)>, i64) {
    let mut reader = csv::Reader::from_path(dir.join(RUNS_FILE)).unwrap();
    let mut by_method: Vec<(String, Vec<f64>)> = Vec::new();
    let mut overrun = i64::MIN;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let method = if &rec[4] == "true" { format!("{}+hybrid", &rec[3]) } else { rec[3].to_string() };
        let used: u64 = rec[6].parse::<u64>().unwrap() + rec[7].parse::<u64>().unwrap();
        overrun = overrun.max(used as i64 - budget as i64);
        let v: f64 = rec[9].parse().unwrap();
        match by_method.iter_mut().find(|(m, _)| *m == method) {
            Some((_, vs)) => vs.push(v),
            None => by_method.push((method, vec![v])),
        }
    }
    (by_method.into_iter().map(|(m, v)| (m, median(v))).collect(), overrun)
}

fn desk_matrices(root: &Path, budget_ok: &mut bool) -> ((bool, String), (bool, String)) {
    let start = Instant::now();
    let methods: Vec<Method> = ["random", "lmm", "lmm+hybrid"].iter().map(|m| m.parse().unwrap()).collect();
    let mut ordering_ok = true;
    let mut hybrid_ok = true;
    let mut ordering = Vec::new();
    let mut hybrid = Vec::new();
    for name in ["ZDT1", "DTLZ2"] {
        let cfg = RunConfig::new(name, DESK_DIM, DESK_BUDGET, (1..=10).collect());
        let dir = root.join(name);
        emit_reports(&run_matrix(&cfg, &methods).unwrap(), &dir, false).unwrap();
        let (medians, overrun) = read_runs(&dir, DESK_BUDGET);
        *budget_ok &= overrun <= 0;
        let get = |m: &str| medians.iter().find(|(k, _)| k == m).unwrap().1;
        let (g, lmm, h) = (get("random"), get("lmm"), get("lmm+hybrid"));
        ordering_ok &= lmm < g;
        hybrid_ok &= h <= lmm;
        ordering.push(format!("{name} lmm {lmm:.5} vs random {g:.5}"));
        hybrid.push(format!("{name} lmm+hybrid {h:.5} vs lmm {lmm:.5}"));
    }
    let t = start.elapsed();
    (
        (ordering_ok && t < DESK_LIMIT, format!("median IGD {}; {t:.2?}", ordering.join(", "))),
        (hybrid_ok && t < DESK_LIMIT, format!("median IGD {}; {t:.2?}", hybrid.join(", "))),
    )
}

fn matrix_determinism(root: &Path, budget_ok: &mut bool) -> (bool, String) {
    let mut cfg = RunConfig::new("ZDT3", 30, 6_000, (1..=3).collect());
    cfg.reference_set_size = 500;
    let methods: Vec<Method> = ["none", "random", "dg", "limd", "lmm", "lmm+hybrid"]
        .iter()
        .map(|m| m.parse().unwrap())
        .collect();
    let dirs = [root.join("first"), root.join("second")];
    let mut files = Vec::new();
    for dir in &dirs {
        files = emit_reports(&run_matrix(&cfg, &methods).unwrap(), dir, true).unwrap();
    }
    let (_, overrun) = read_runs(&dirs[0], cfg.budget);
    *budget_ok &= overrun <= 0;
    let differing: Vec<String> = files
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .filter(|n| std::fs::read(dirs[0].join(n)).unwrap() != std::fs::read(dirs[1].join(n)).unwrap())
        .collect();
    (
        differing.is_empty(),
        format!("{} files compared, differing: {differing:?}", files.len()),
    )
}

fn main() {
    let mut ledger = Ledger { failed: 0 };
    let scratch = tempfile::tempdir().unwrap();
    let mut budget_ok = true;

    let (ok, d) = dominance_oracle();
    ledger.record("dominance oracle equivalence", ok, d);
    let (ok, d) = hv_correctness();
    ledger.record("hypervolume correctness", ok, d);
    let (ok, d) = igd_correctness();
    ledger.record("IGD correctness", ok, d);
    let (ok, d) = estimator_recovery();
    ledger.record("convergence-point estimator", ok, d);
    let (ok, d) = lmm_separability();
    ledger.record("LMM separability detection", ok, d);
    let (ok, d) = structure_recovery();
    ledger.record("LMM structure recovery", ok, d);
    let (ok, d) = nsga2_sanity(&mut budget_ok);
    ledger.record("NSGA-II sanity", ok, d);
    let (order, hybrid) = desk_matrices(&scratch.path().join("desk"), &mut budget_ok);
    ledger.record("desk-scale method ordering", order.0, order.1);
    ledger.record("hybrid effect", hybrid.0, hybrid.1);
    let (ok, d) = matrix_determinism(&scratch.path().join("determinism"), &mut budget_ok);
    ledger.record("budget discipline", budget_ok, "fes_decomp + fes_opt <= budget in every row read back from runs.csv".into());
    ledger.record("matrix determinism", ok, d);

    println!("{} criteria failed", ledger.failed);
    if ledger.failed > 0 {
        std::process::exit(1);
    }
}
