use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected} values, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("non-positive iterate in {0}")]
    NonPositive(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("descent stalled after {iterations} iterations at quotient {quotient}")]
    DescentStall { iterations: usize, quotient: f64 },

    #[error("minimizer is not a solution: relative residual {residual:e}")]
    InconsistentMinimizer { residual: f64 },

    #[error("shooting bracket not found: {0}")]
    BracketNotFound(String),

    #[error("root count {found} disagrees with predicted count {predicted}")]
    InternalInconsistency { predicted: usize, found: usize },

    #[error("identity violated: measured |grad u|^2 = {grad_sq}, expected {beta}")]
    IdentityViolation { grad_sq: f64, beta: f64 },

    #[error("iterates collapsed to zero after {iterations} iterations (sup {sup:e})")]
    Collapse { iterations: usize, sup: f64 },

    #[error("iterates diverged after {iterations} iterations (sup {sup:e})")]
    Divergence { iterations: usize, sup: f64 },

    #[error("hypotheses violated: {}", .0.join("; "))]
    Hypothesis(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    /// Short machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Dimension { .. } => "dimension",
            Error::Convergence { .. } => "convergence",
            Error::NonPositive(_) => "non_positive",
            Error::Domain(_) => "domain",
            Error::DescentStall { .. } => "descent_stall",
            Error::InconsistentMinimizer { .. } => "inconsistent_minimizer",
            Error::BracketNotFound(_) => "bracket_not_found",
            Error::InternalInconsistency { .. } => "internal_inconsistency",
            Error::IdentityViolation { .. } => "identity_violation",
            Error::Collapse { .. } => "collapse",
            Error::Divergence { .. } => "divergence",
            Error::Hypothesis(_) => "hypothesis",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Toml(_) => "toml",
        }
    }
}
