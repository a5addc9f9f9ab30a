use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error in {operation}: {detail}")]
    Domain {
        operation: &'static str,
        detail: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A bracketing root search did not see a sign change.
    #[error("root bracket [{lo}, {hi}] does not contain a sign change")]
    Bracket { lo: f64, hi: f64 },

    #[error("missing solution: {0}")]
    MissingSolution(String),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("profile value {value} at node {index} is not positive")]
    Positivity { index: usize, value: f64 },

    #[error("resolution too low: need at least {needed}, got {got}")]
    Resolution { needed: usize, got: usize },

    #[error("director field is not periodic in phi (max gap {max_gap:e})")]
    Periodicity { max_gap: f64 },

    /// The shooting scan found no sign change of `rho(h; a) - r`.
    #[error("no shooting solution: {0}")]
    NoSolution(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(operation: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        operation,
        detail: detail.into(),
    }
}
