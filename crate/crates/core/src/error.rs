use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A measure table (or spec built from one) violates one of its invariants.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search budget exceeded: {0}")]
    Budget(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        LabError::Invariant {
            invariant,
            detail: detail.into(),
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        LabError::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
