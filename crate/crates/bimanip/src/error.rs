use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric input was NaN or infinite where a finite value is required.
    #[error("domain error: {0}")]
    Domain(String),

    /// An API contract was violated (wrong dimensionality, step after done, ...).
    #[error("contract error: {0}")]
    Contract(String),

    /// Configuration file problems: unknown keys, bad values, missing file.
    #[error("config error: {0}")]
    Config(String),

    /// The two subgoal-line anchors coincide; no line can be built.
    #[error("degenerate subgoal line: anchors {0:.3} mm apart")]
    DegenerateLine(f64),

    /// Training diverged (non-finite loss); carries a diagnostic summary.
    #[error("training diverged at iteration {iteration}: {detail}")]
    Diverged { iteration: usize, detail: String },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
