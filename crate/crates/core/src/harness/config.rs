//! Experiment configuration documents (TOML).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cc::{HybridParams, DEFAULT_ARCHIVE_CAPACITY};
use crate::error::{Error, Result};
use crate::grouping::{LmmParams, DEFAULT_EPSILON};
use crate::hybrid::Estimator;
use crate::nsga2::Nsga2Params;
use crate::problems::ProblemKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrouperKind {
    Lmm,
    Dg,
    Limd,
    Random,
    None,
}

impl GrouperKind {
    pub const ALL: [GrouperKind; 5] = [Self::Lmm, Self::Dg, Self::Limd, Self::Random, Self::None];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Lmm => "lmm",
            Self::Dg => "dg",
            Self::Limd => "limd",
            Self::Random => "random",
            Self::None => "none",
        }
    }
}

impl fmt::Display for GrouperKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GrouperKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let known: Vec<&str> = Self::ALL.iter().map(|g| g.as_str()).collect();
                Error::InvalidArgument(format!("unknown grouper `{s}` (valid: {})", known.join(", ")))
            })
    }
}

/// A grouper plus the optimizer variant, written `lmm` or `lmm+hybrid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Method {
    pub grouper: GrouperKind,
    pub hybrid: bool,
}

impl Method {
    pub fn new(grouper: GrouperKind, hybrid: bool) -> Self {
        Self { grouper, hybrid }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hybrid {
            write!(f, "{}+hybrid", self.grouper)
        } else {
            write!(f, "{}", self.grouper)
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (g, hybrid) = match s.trim().split_once('+') {
            Some((g, "hybrid")) => (g, true),
            Some((_, other)) => {
                return Err(Error::InvalidArgument(format!(
                    "unknown method suffix `+{other}` (only `+hybrid` is recognized)"
                )))
            }
            None => (s, false),
        };
        Ok(Self::new(g.parse()?, hybrid))
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Seeds as an explicit list or an inclusive range string such as `"1..10"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Seeds(pub Vec<u64>);

impl FromStr for Seeds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse seeds `{s}` (use `a..b` or `1,2,3`)"));
        if let Some((a, b)) = s.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if b < a {
                return Err(bad());
            }
            return Ok(Seeds((a..=b).collect()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()
            .map(Seeds)
    }
}

impl<'de> Deserialize<'de> for Seeds {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<u64>),
            Text(String),
            One(u64),
        }
        match Raw::deserialize(d)? {
            Raw::List(v) => Ok(Seeds(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::One(v) => Ok(Seeds(vec![v])),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerConfig {
    pub pop_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub eta_crossover: f64,
    pub eta_mutation: f64,
    pub archive_capacity: usize,
    pub passes: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let n = Nsga2Params::default();
        Self {
            pop_size: n.pop_size,
            crossover_rate: n.crossover_rate,
            mutation_rate: n.mutation_rate,
            eta_crossover: n.eta_crossover,
            eta_mutation: n.eta_mutation,
            archive_capacity: DEFAULT_ARCHIVE_CAPACITY,
            passes: 1,
        }
    }
}

impl OptimizerConfig {
    pub fn nsga2(&self) -> Nsga2Params {
        Nsga2Params {
            pop_size: self.pop_size,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            eta_crossover: self.eta_crossover,
            eta_mutation: self.eta_mutation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HybridConfig {
    pub sigma_frac: f64,
    pub estimator: Estimator,
    pub sample_frac: f64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        let h = HybridParams::default();
        Self {
            sigma_frac: h.sigma_frac,
            estimator: h.estimator,
            sample_frac: h.sample_frac,
        }
    }
}

impl HybridConfig {
    pub fn params(&self) -> HybridParams {
        HybridParams {
            sigma_frac: self.sigma_frac,
            estimator: self.estimator,
            sample_frac: self.sample_frac,
        }
    }
}

pub const DEFAULT_RANDOM_GROUPS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RandomConfig {
    pub groups: usize,
    /// Regroup before every pass after the first.
    pub dynamic: bool,
}

impl Default for RandomConfig {
    fn default() -> Self {
        Self {
            groups: DEFAULT_RANDOM_GROUPS,
            dynamic: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DgConfig {
    pub epsilon: f64,
}

impl Default for DgConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// A validated run or matrix configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    pub dim: usize,
    #[serde(default)]
    pub objectives: Option<usize>,
    pub budget: u64,
    pub seeds: Seeds,
    #[serde(default = "default_grouper")]
    pub grouper: GrouperKind,
    #[serde(default)]
    pub hybrid: bool,
    /// Methods compared by `matrix`; defaults to the single `grouper`/`hybrid` pair.
    #[serde(default)]
    pub methods: Option<Vec<Method>>,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default = "default_reference_set_size")]
    pub reference_set_size: usize,
    /// Record wall-clock times; off by default so that reports are reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub dump_solutions: bool,
    #[serde(default)]
    pub lmm: LmmParams,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub sampling: HybridConfig,
    #[serde(default)]
    pub random: RandomConfig,
    #[serde(default)]
    pub dg: DgConfig,
}

fn default_grouper() -> GrouperKind {
    GrouperKind::Lmm
}

fn default_jobs() -> usize {
    1
}

fn default_reference_set_size() -> usize {
    1000
}

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

impl RunConfig {
    /// A configuration with defaults for everything except the required fields.
    pub fn new(problem: impl Into<String>, dim: usize, budget: u64, seeds: Vec<u64>) -> Self {
        Self {
            problem: problem.into(),
            dim,
            objectives: None,
            budget,
            seeds: Seeds(seeds),
            grouper: default_grouper(),
            hybrid: false,
            methods: None,
            jobs: default_jobs(),
            out: None,
            reference_set_size: default_reference_set_size(),
            timing: false,
            dump_solutions: false,
            lmm: LmmParams::default(),
            optimizer: OptimizerConfig::default(),
            sampling: HybridConfig::default(),
            random: RandomConfig::default(),
            dg: DgConfig::default(),
        }
    }

    pub fn problem_kind(&self) -> Result<ProblemKind> {
        self.problem
            .parse::<ProblemKind>()
            .map_err(|e| config_err("problem", e.to_string()))
    }

    pub fn num_objectives(&self) -> Result<usize> {
        Ok(self.objectives.unwrap_or(self.problem_kind()?.default_objectives()))
    }

    pub fn methods(&self) -> Vec<Method> {
        self.methods
            .clone()
            .unwrap_or_else(|| vec![Method::new(self.grouper, self.hybrid)])
    }

    /// Checks ranges and cross-field constraints; every error names the offending field.
    pub fn validate(&self) -> Result<()> {
        self.problem_kind()?;
        if self.dim == 0 {
            return Err(config_err("dim", "must be a positive integer"));
        }
        if self.objectives == Some(0) {
            return Err(config_err("objectives", "must be a positive integer"));
        }
        if self.budget == 0 {
            return Err(config_err("budget", "must be positive"));
        }
        if self.seeds.0.is_empty() {
            return Err(config_err("seeds", "must list at least one seed"));
        }
        if self.jobs == 0 {
            return Err(config_err("jobs", "must be >= 1"));
        }
        if self.reference_set_size < 2 {
            return Err(config_err("reference_set_size", "must be >= 2"));
        }
        if let Some(m) = &self.methods {
            if m.is_empty() {
                return Err(config_err("methods", "must list at least one method"));
            }
        }
        self.lmm.validate().map_err(|e| config_err("lmm", e.to_string()))?;
        self.optimizer
            .nsga2()
            .validate()
            .map_err(|e| config_err("optimizer", e.to_string()))?;
        if self.optimizer.archive_capacity == 0 {
            return Err(config_err("optimizer.archive_capacity", "must be >= 1"));
        }
        if self.optimizer.passes == 0 {
            return Err(config_err("optimizer.passes", "must be >= 1"));
        }
        if self.sampling.sigma_frac.is_nan() || self.sampling.sigma_frac < 0.0 {
            return Err(config_err("sampling.sigma_frac", "must be non-negative"));
        }
        if self.sampling.sample_frac.is_nan() || self.sampling.sample_frac <= 0.0 {
            return Err(config_err("sampling.sample_frac", "must be positive"));
        }
        if self.random.groups == 0 {
            return Err(config_err("random.groups", "must be >= 1"));
        }
        if self.dg.epsilon.is_nan() || self.dg.epsilon < 0.0 {
            return Err(config_err("dg.epsilon", "must be non-negative"));
        }
        crate::problems::make_problem::<f64>(&self.problem, self.dim, self.num_objectives()?)
            .map_err(|e| config_err("dim", e.to_string()))?;
        Ok(())
    }
}

/// Parses and validates a TOML configuration document.
pub fn parse_config(document: &str) -> Result<RunConfig> {
    let de = toml::Deserializer::parse(document).map_err(|e| config_err("<document>", e.to_string()))?;
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.into_inner().to_string();
        config_err(&path, message.trim().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<std::path::Path>) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
    parse_config(&text)
}
