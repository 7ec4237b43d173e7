use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("query is not a unit vector (norm {norm})")]
    NonUnitQuery { norm: f64 },

    #[error("feasible region is empty")]
    Infeasible,

    #[error("feasible region is unbounded")]
    Unbounded,

    #[error("no witness: region radius {radius} is below the Jung threshold {threshold}")]
    NoWitness { radius: f64, threshold: f64 },

    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for failures that indicate a broken game contract: an adversary that
    /// lost feasibility or violated its own containment invariant.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, Error::Infeasible | Error::InvariantBreach(_))
    }

    /// Process exit code: 2 for invariant breaches, 3 for configuration
    /// errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            e if e.is_invariant_breach() => 2,
            Error::Config(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
