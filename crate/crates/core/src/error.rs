use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("non-finite value at node {index} (x = {x})")]
    NonFinite { index: usize, x: f64 },

    #[error("quadrature validation failed: achieved {achieved:e}, required {required:e}")]
    Quadrature { achieved: f64, required: f64 },

    #[error("t = {t} is below t_min = {t_min}; roughly {required_terms} terms would be needed")]
    TimeTooSmall {
        t: f64,
        t_min: f64,
        required_terms: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
