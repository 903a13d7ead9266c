//! Experiment driver: configuration, the method matrix, and report files.

mod config;
mod matrix;
mod report;

pub use config::{
    load_config, parse_config, DgConfig, GrouperKind, HybridConfig, Method, OptimizerConfig, RandomConfig, RunConfig,
    Seeds, DEFAULT_RANDOM_GROUPS,
};
pub use matrix::{
    build_problem, run_decomposition, run_matrix, run_single, MatrixReport, RunOutcome, RunReport, RunRow, Summary,
};
pub use report::{emit_reports, method_stem, read_archive_csv, AGGREGATE_FILE, AGGREGATE_HEADER, RUNS_FILE, RUN_HEADER};
