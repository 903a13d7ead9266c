use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use coevo::harness::{
    emit_reports, load_config, read_archive_csv, run_decomposition, run_matrix, GrouperKind, Method, RunConfig, Seeds,
};
use coevo::hybrid::Estimator;
use coevo::indicators::{default_reference_point, hypervolume, igd};
use coevo::{make_problem, Problem64};

#[derive(Parser)]
#[command(name = "coevo", version, about = "Cooperative-coevolutionary multi-objective optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the decomposition stage only and print the grouping as JSON.
    Decompose(RunArgs),
    /// Decompose and optimize with one method, writing reports to --out.
    Optimize(RunArgs),
    /// Run every method in --methods (or the config) over all seeds.
    Matrix {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated methods, e.g. `random,lmm,lmm+hybrid`.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
    },
    /// Recompute HV and IGD from archive CSV files.
    Indicators(IndicatorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Average,
    LeastSquares,
}

#[derive(Args)]
struct ProblemArgs {
    /// TOML configuration; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    dim: Option<usize>,
    #[arg(long)]
    objectives: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    grouper: Option<GrouperKind>,
    #[arg(long)]
    gene_length: Option<u32>,
    #[arg(long)]
    lmm_pop: Option<usize>,
    #[arg(long)]
    lmm_gens: Option<usize>,
    /// Number of linkage samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Group count for the random grouper.
    #[arg(long)]
    random_groups: Option<usize>,
    #[arg(long)]
    crossover_rate: Option<f64>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    #[arg(long)]
    pop_size: Option<usize>,
    /// Sweeps over all groups.
    #[arg(long)]
    passes: Option<usize>,
    #[arg(long)]
    hybrid: Option<Switch>,
    #[arg(long)]
    sigma_frac: Option<f64>,
    #[arg(long)]
    estimator: Option<EstimatorArg>,
    #[arg(long)]
    budget: Option<u64>,
    /// `a..b` (inclusive) or a comma-separated list.
    #[arg(long)]
    seeds: Option<Seeds>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write full decision vectors of every archive as JSON.
    #[arg(long)]
    dump_solutions: bool,
    /// Record wall-clock time per run (makes reports non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct IndicatorArgs {
    /// Archive CSV files (optional `seed` column, then one column per objective).
    #[arg(long = "archive", required = true)]
    archives: Vec<PathBuf>,
    #[arg(long)]
    problem: String,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    objectives: Option<usize>,
    /// Comma-separated reference point; defaults to 1.1 x the joint maximum of all archives.
    #[arg(long, value_delimiter = ',')]
    reference_point: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1000)]
    reference_set_size: usize,
}

const DEFAULT_BUDGET: u64 = 50_000;

fn build_config(args: &RunArgs) -> Result<RunConfig> {
    let p = &args.problem;
    let mut cfg = match &p.config {
        Some(path) => load_config(path)?,
        None => {
            let problem = p.problem.clone().context("--problem is required without --config")?;
            let dim = p.dim.context("--dim is required without --config")?;
            RunConfig::new(problem, dim, DEFAULT_BUDGET, vec![1])
        }
    };
    if let Some(v) = &p.problem {
        cfg.problem = v.clone();
    }
    if let Some(v) = p.dim {
        cfg.dim = v;
    }
    if p.objectives.is_some() {
        cfg.objectives = p.objectives;
    }
    if let Some(v) = args.grouper {
        cfg.grouper = v;
    }
    if let Some(v) = args.gene_length {
        cfg.lmm.gene_length = v;
    }
    if let Some(v) = args.lmm_pop {
        cfg.lmm.pop_size = v;
    }
    if let Some(v) = args.lmm_gens {
        cfg.lmm.generations = v;
    }
    if let Some(v) = args.samples {
        cfg.lmm.samples = v;
    }
    if let Some(v) = args.random_groups {
        cfg.random.groups = v;
    }
    if let Some(v) = args.crossover_rate {
        cfg.optimizer.crossover_rate = v;
    }
    if let Some(v) = args.mutation_rate {
        cfg.optimizer.mutation_rate = v;
    }
    if let Some(v) = args.pop_size {
        cfg.optimizer.pop_size = v;
    }
    if let Some(v) = args.passes {
        cfg.optimizer.passes = v;
    }
    if let Some(v) = args.hybrid {
        cfg.hybrid = matches!(v, Switch::On);
    }
    if let Some(v) = args.sigma_frac {
        cfg.sampling.sigma_frac = v;
    }
    if let Some(v) = args.estimator {
        cfg.sampling.estimator = match v {
            EstimatorArg::Average => Estimator::PfAverage,
            EstimatorArg::LeastSquares => Estimator::LeastSquares,
        };
    }
    if let Some(v) = args.budget {
        cfg.budget = v;
    }
    if let Some(v) = &args.seeds {
        cfg.seeds = v.clone();
    }
    if let Some(v) = args.jobs {
        cfg.jobs = v;
    }
    if let Some(v) = &args.out {
        cfg.out = Some(v.display().to_string());
    }
    cfg.dump_solutions |= args.dump_solutions;
    cfg.timing |= args.timing;
    cfg.validate()?;
    Ok(cfg)
}

fn decompose(args: &RunArgs) -> Result<()> {
    let cfg = build_config(args)?;
    let mut docs = Vec::new();
    for &seed in &cfg.seeds.0 {
        let (result, budget) = run_decomposition(&cfg, cfg.grouper, seed)?;
        docs.push(json!({
            "problem": cfg.problem_kind()?.as_str(),
            "dim": cfg.dim,
            "groups": result.grouping.groups(),
            "fes": result.fes_consumed,
            "fully_separable": result.detected_fully_separable,
            "seed": seed,
            "grouper": cfg.grouper.as_str(),
            "base_fes": budget.used_optimization(),
            "budget_exhausted": result.budget_exhausted,
        }));
    }
    let doc = if docs.len() == 1 { docs.remove(0) } else { serde_json::Value::Array(docs) };
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {dir}"))?;
            let path = PathBuf::from(dir).join("grouping.json");
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            println!("{}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cfg: &RunConfig, methods: &[Method]) -> Result<()> {
    let report = run_matrix(cfg, methods)?;
    let out = cfg.out.clone().unwrap_or_else(|| "results".to_string());
    let files = emit_reports(&report, &out, cfg.dump_solutions)?;
    println!("{:<14} {:>5} {:>12} {:>12} {:>12} {:>12}", "method", "runs", "hv_mean", "hv_median", "igd_mean", "igd_median");
    for r in &report.reports {
        println!(
            "{:<14} {:>5} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            r.method.to_string(),
            r.rows.len(),
            r.hv.mean,
            r.hv.median,
            r.igd.mean,
            r.igd.median
        );
    }
    for (m, s, e) in &report.failures {
        eprintln!("run failed: method {m}, seed {s}: {e}");
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    if report.reports.iter().all(|r| r.rows.is_empty()) {
        bail!("every run failed");
    }
    Ok(())
}

fn indicators(args: &IndicatorArgs) -> Result<()> {
    let m = args.objectives.unwrap_or(args.problem.parse::<coevo::ProblemKind>()?.default_objectives());
    let problem: Problem64 = make_problem(&args.problem, args.dim, m)?;
    let reference = problem.sample_true_pf(args.reference_set_size)?;
    let mut sets = Vec::new();
    for path in &args.archives {
        for (seed, points) in read_archive_csv(path)? {
            sets.push((path.display().to_string(), seed, points));
        }
    }
    let r = match &args.reference_point {
        Some(r) => r.clone(),
        None => default_reference_point(&sets.iter().map(|s| s.2.clone()).collect::<Vec<_>>())?,
    };
    let ref_text: Vec<String> = r.iter().map(|v| v.to_string()).collect();
    println!("# reference_point={}", ref_text.join(" "));
    println!("file,seed,hv,igd,hv_stderr");
    for (file, seed, points) in &sets {
        let hv = hypervolume(points, &r)?;
        let stderr = hv.stderr.map_or(String::new(), |s| s.to_string());
        println!("{file},{seed},{},{},{stderr}", hv.value, igd(points, &reference)?);
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decompose(args) => decompose(&args),
        Command::Optimize(args) => {
            let cfg = build_config(&args)?;
            run(&cfg, &[Method::new(cfg.grouper, cfg.hybrid)])
        }
        Command::Matrix { run: args, methods } => {
            let mut cfg = build_config(&args)?;
            if methods.is_some() {
                cfg.methods = methods;
            }
            run(&cfg, &cfg.methods())
        }
        Command::Indicators(args) => indicators(&args),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
