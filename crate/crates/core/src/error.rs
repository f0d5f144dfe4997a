use std::fmt;

/// Errors produced by the library operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A function was evaluated outside its declared domain, or produced a
    /// non-finite value.
    #[error("domain error at x = {point}: {reason}")]
    Domain { point: f64, reason: String },

    /// Quadrature did not meet its tolerance within the refinement limit.
    #[error("quadrature did not converge: best value {value}, error estimate {estimate:e}")]
    NonConvergence { value: f64, estimate: f64 },

    /// Malformed input: invalid interval, bad catalog parameters, etc.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A verifier's precondition was not met (distinct from a hypothesis
    /// that was checked and failed).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Job text that is not well-formed JSON.
    #[error("malformed JSON at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed JSON that does not match the job schema.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// A constructed auxiliary function failed its convexity validation.
    #[error("construction failed: {what} (worst point {worst_point}, margin {margin:e})")]
    Construction {
        what: String,
        worst_point: f64,
        margin: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidInput(msg.to_string())
    }

    pub(crate) fn precondition(msg: impl fmt::Display) -> Self {
        Error::Precondition(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
