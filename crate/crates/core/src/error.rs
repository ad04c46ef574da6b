use thiserror::Error;

/// Crate-wide error type.
///
/// Variants mirror the failure modes of the numerical pipeline: domain
/// violations at construction, accuracy shortfalls in special-function
/// evaluation, statistical preconditions, and solver non-contraction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("convergence failure: {context} (achieved error {achieved:.3e}, target {target:.3e})")]
    Convergence {
        context: String,
        achieved: f64,
        target: f64,
    },

    #[error("circulant embedding failure: most negative eigenvalue {min_eigenvalue:.3e}")]
    Embedding { min_eigenvalue: f64 },

    #[error("sequence too short: need {needed} variates, spec provides {available}")]
    Length { needed: usize, available: usize },

    #[error("insufficient replicates: got {got}, need at least {min}")]
    InsufficientReplicates { got: usize, min: usize },

    #[error("regression error: {0}")]
    Regression(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("truncation error: estimated tail {tail:.3e} exceeds {limit:.3e} of partial sum {partial:.3e}")]
    Truncation { tail: f64, partial: f64, limit: f64 },

    #[error("admissibility gate failed: {}", violations.join("; "))]
    Gate { violations: Vec<String> },

    #[error("Picard iteration did not contract: residual ratios {ratios:?}")]
    NoContraction { ratios: Vec<f64> },

    #[error("config parse error:\n{}", problems.join("\n"))]
    Parse { problems: Vec<String> },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
