use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("point ({re}, {im}) is outside the natural domain: {reason}")]
    Domain { re: f64, im: f64, reason: String },

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("ill-conditioned system: condition number {cond:.3e} exceeds cap {cap:.1e}")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("mu search exceeded cap {cap}: best mu {best} with deviation {deviation:.3e}")]
    SearchFailure { cap: u64, best: u64, deviation: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Short machine-readable name, used in JSON diagnostics and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Domain { .. } => "domain",
            Error::Truncation(_) => "truncation",
            Error::IllConditioned { .. } => "ill-conditioned",
            Error::SearchFailure { .. } => "search-failure",
            Error::Precondition(_) => "precondition",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
