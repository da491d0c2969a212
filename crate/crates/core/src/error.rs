use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Exact subset enumeration refused because the neighbor set is too large.
    #[error("neighbor set of object {object} has size {size}, above the enumeration cap {cap}; use the bucketed filter (fbsr)")]
    Feasibility { object: usize, size: usize, cap: usize },

    #[error("degenerate filter output: {0}")]
    DegenerateFilter(String),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("comparison graph is not connected")]
    Disconnected,

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("config: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Short category name, used for CLI diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parameter(_) | Error::Config(_) => "parameter",
            Error::Feasibility { .. } => "feasibility",
            Error::DegenerateFilter(_) => "degenerate-filter",
            Error::Convergence { .. } => "convergence",
            Error::Disconnected => "disconnected",
            Error::Parse { .. } => "parse",
            Error::Invariant(_) => "invariant",
            Error::Csv(_) | Error::Io(_) => "io",
        }
    }

    /// Process exit code for the category.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "parameter" => 2,
            "feasibility" => 3,
            "degenerate-filter" => 4,
            "convergence" => 5,
            "disconnected" => 6,
            "parse" => 7,
            "invariant" => 8,
            _ => 1,
        }
    }
}
