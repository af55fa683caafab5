use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// A parameter box of a schedule family (or another scalar precondition)
    /// is violated. The message names the inequality, e.g. `h>2 (got h=2)`.
    #[error("parameter condition violated: {0}")]
    Parameter(String),

    /// A schedule condition failed at a specific time/index during a check
    /// that a solver relies on.
    #[error("condition {condition} fails at {location}")]
    ConditionFailed { condition: String, location: f64 },

    /// An iterate or trajectory state became non-finite. `location` is the
    /// last valid time (continuous) or the iteration index (discrete).
    #[error("divergence at {location}: {detail}")]
    Divergence { location: f64, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
