use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("frequency vector is resonant (or nearly so) at q = {q:?}: |<omega,q>| = {value:e}")]
    Resonance { q: Vec<i32>, value: f64 },

    #[error("|q| = {order} exceeds the certified nonresonance order {max}")]
    OrderOverflow { order: u32, max: u32 },

    #[error("small divisor at k' = {kprime:?}: |<omega,k'>| = {value:e}")]
    SmallDivisor { kprime: Vec<i32>, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("support violation: {0}")]
    Support(String),

    #[error("series has no nonzero terms")]
    ZeroSeries,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal structure violated: {0}")]
    Structural(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 1,
            Error::Structural(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
