use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("resource exceeded: {what} reached {count} terms (cap {cap})")]
    ResourceExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    /// Matrix entries or exponents left the 64-bit (32-bit for Laurent
    /// exponents) range.
    #[error("resource exceeded: {0} overflows fixed-width integers")]
    Overflow(&'static str),

    #[error("direction {direction} out of range 1..={rank}")]
    DirectionOutOfRange { direction: usize, rank: usize },

    #[error("walk not reduced: direction {direction} repeated at step {step}")]
    WalkNotReduced { direction: usize, step: usize },

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

impl Error {
    pub fn is_resource_exceeded(&self) -> bool {
        matches!(self, Error::ResourceExceeded { .. } | Error::Overflow(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
