use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// `lambda + psi * x^H F x` was not positive; F has lost positive definiteness.
    #[error("degenerate gain denominator ({0}); inverse correlation matrix is no longer positive definite")]
    DegenerateGain(f64),

    #[error("non-finite filter weights")]
    NonFinite,

    #[error("matrix is singular or not positive definite")]
    Singular,

    #[error("angle {0} deg lies outside the grid [{1}, {2}]")]
    OutOfRange(f64, f64, f64),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
