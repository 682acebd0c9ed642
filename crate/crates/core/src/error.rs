use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("derivative oracle failed: {0}")]
    Evaluation(String),

    #[error("degenerate boundary: |grad rho| = {gradient_norm:e} at the requested point")]
    DegenerateBoundary { gradient_norm: f64 },

    #[error("numerical failure: {message} ({diagnostics})")]
    Numerical { message: String, diagnostics: String },

    #[error("Levi rank drifts near the base point: saw ranks {ranks:?}")]
    RankDrift { ranks: Vec<usize> },

    #[error("pseudoconvexity violated: mixed Levi block has norm {norm:e}")]
    PseudoconvexityViolation { norm: f64 },

    #[error("point lies outside the certified chart neighbourhood (|zeta| = {radius:e}, limit {limit:e})")]
    OutOfChart { radius: f64, limit: f64 },

    #[error("certification failed after {attempts} attempts; worst violation: {worst}")]
    CertificationFailure { attempts: usize, worst: String },

    #[error("out of certified range: {0}")]
    OutOfRange(String),

    #[error("Gram matrix ill-conditioned (condition {condition:e}); try degree <= {suggested_degree}")]
    Conditioning { condition: f64, suggested_degree: usize },

    #[error("no feasible analytic disc found: {0}")]
    Infeasible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn numerical(message: impl Into<String>, diagnostics: impl Into<String>) -> Self {
        Error::Numerical {
            message: message.into(),
            diagnostics: diagnostics.into(),
        }
    }
}
