use thiserror::Error;

/// Errors raised by the library. Variants follow the failure classes the
/// operations distinguish: bad arguments, points outside a chart or domain,
/// numerical breakdown, unsupported group/experiment combinations and
/// resource budgets.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical error: {what} (residual {residual:.3e})")]
    Numerical { what: String, residual: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    Budget {
        what: String,
        needed: usize,
        limit: usize,
    },

    #[error("cache format error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
