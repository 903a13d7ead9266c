use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown problem `{0}` (known: {1})")]
    UnknownProblem(String, String),

    #[error("infeasible configuration for {problem}: {reason}")]
    InfeasibleProblem { problem: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("evaluation budget exhausted ({used} of {limit} evaluations used)")]
    BudgetExhausted { used: u64, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("singular system: smallest/largest singular value ratio {ratio:e} below tolerance")]
    Singular { ratio: f64 },

    #[error("grouping with a single group has no linkage residual")]
    SingleGroup,

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
