use thiserror::Error;

/// Errors raised by the symbolic engine and the numerical layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TclError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("order {order} is {reason}")]
    Order { order: usize, reason: &'static str },

    #[error("invalid term: {0}")]
    InvalidTerm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid bath: {0}")]
    Bath(String),

    #[error("bath state is not stationary: ||[H_E, rho_E]|| = {0:.3e}")]
    NonStationary(f64),

    #[error("invalid correlation query: {0}")]
    Query(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("dimension {dim} exceeds the bound {bound}")]
    Dimension { dim: usize, bound: usize },

    #[error("numerical validation failed: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, TclError>;

impl From<std::io::Error> for TclError {
    fn from(e: std::io::Error) -> Self {
        TclError::Io(e.to_string())
    }
}

impl From<csv::Error> for TclError {
    fn from(e: csv::Error) -> Self {
        TclError::Io(e.to_string())
    }
}
