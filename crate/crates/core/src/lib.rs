//! Cooperative-coevolutionary large-scale multi-objective optimization.
//!
//! The pipeline decomposes the decision variables into groups (by minimizing a
//! penalized linkage measure, or with one of the baseline groupers), then
//! optimizes each group in turn with NSGA-II against a shared context
//! population, optionally injecting Gaussian samples around an estimated
//! convergence point. Benchmarks, quality indicators, and an experiment
//! harness are included.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiations.

pub mod budget;
pub mod cc;
pub mod error;
pub mod grouping;
pub mod harness;
pub mod hybrid;
pub mod indicators;
mod linalg;
pub mod nsga2;
pub mod problems;
pub mod rng;
pub mod scalar;

pub use budget::{EvaluationBudget, Stage};
pub use cc::{assemble, cc_optimize, CcOutcome, CcParams, ContextPopulation, HybridParams, ParetoArchive};
pub use error::{Error, Result};
pub use grouping::{
    dg_decompose, limd_decompose, lmm_decompose, random_grouping, DecompositionResult, Grouping, LmmParams,
};
pub use hybrid::{ConvergenceEstimate, Estimator, MovePair};
pub use indicators::{default_reference_point, hypervolume, igd};
pub use nsga2::{dominate, Dominance, Individual, Nsga2Params};
pub use problems::{make_problem, Objective, Problem, ProblemKind};
pub use scalar::Scalar;

pub type Problem64 = Problem<f64>;
pub type Problem32 = Problem<f32>;
pub type ParetoArchive64 = ParetoArchive<f64>;
pub type ParetoArchive32 = ParetoArchive<f32>;
pub type Individual64 = Individual<f64>;
pub type Individual32 = Individual<f32>;
pub type DecompositionResult64 = DecompositionResult<f64>;
pub type CcOutcome64 = CcOutcome<f64>;
