use core::fmt;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A pivot fell below the relative singularity threshold during LU
    /// elimination; the system has no reliable solution.
    SingularMatrix,
    /// Two operands disagree on a dimension.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    /// A geometric or material quantity is outside its physical range.
    InvalidGeometry(&'static str),
    /// A configuration parameter violates its documented range.
    InvalidConfig(&'static str),
    /// The requested closed-form case is not covered by the oracle.
    UnsupportedCase(&'static str),
    /// A value was NaN or infinite where a finite number is required.
    NonFinite(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularMatrix => write!(f, "matrix is singular to working precision"),
            Error::DimensionMismatch {
                what,
                expected,
                actual,
            } => write!(f, "dimension mismatch: {what} expected {expected}, got {actual}"),
            Error::InvalidGeometry(msg) => write!(f, "invalid geometry: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            Error::UnsupportedCase(msg) => write!(f, "unsupported case: {msg}"),
            Error::NonFinite(msg) => write!(f, "non-finite value: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
