use thiserror::Error;

/// Errors raised across the crate. Each variant maps onto one failure class of
/// the public operations so callers (and the CLI exit codes) can tell them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("malformed prime cache: {0}")]
    Format(String),

    #[error("unsupported prime cache version: {0}")]
    Version(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("|zeta(z)| = {magnitude:e} below {threshold:e}; decomposition is ill-conditioned")]
    NearZero { magnitude: f64, threshold: f64 },

    #[error("no zero found near y0 = {y0}: smallest |zeta| in bracket was {min_abs:e}")]
    NotAZero { y0: f64, min_abs: f64 },

    #[error("coefficient of order {order} is below its error bound ({magnitude:e} <= {bound:e})")]
    NoiseFloor { order: usize, magnitude: f64, bound: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
