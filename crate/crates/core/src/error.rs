use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit count must be at least 1")]
    ZeroBits,

    #[error("empty range [{lo}, {hi})")]
    EmptyRange { lo: String, hi: String },

    #[error("prime width must be at least 2, got {0}")]
    PrimeWidth(u32),

    #[error("no {width}-bit prime found after {attempts} candidates")]
    SamplingExhausted { width: u32, attempts: u32 },

    #[error("hash constraints unsatisfiable in {collection} after {attempts} attempts (prime pool at width {width} too small?)")]
    ConstraintExhausted {
        collection: &'static str,
        width: u32,
        attempts: u32,
    },

    #[error("invalid hash parameters: {0}")]
    HashParams(String),

    #[error("n = {0} is not a power of two")]
    NotPowerOfTwo(u32),

    #[error("n = {0} is too small (need n >= 2)")]
    TooSmall(u32),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("{what} limited to n <= {limit}, got n = {n}")]
    Guard { what: &'static str, n: u32, limit: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported format version {0:?}")]
    Version(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            detail: detail.into(),
        }
    }
}
