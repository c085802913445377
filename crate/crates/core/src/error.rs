use thiserror::Error;

/// Errors surfaced by construction and enumeration entry points.
///
/// Pure arithmetic helpers (element add/mul, Frobenius, traces) never fail on
/// valid elements and panic on programmer error instead of returning these.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("{0} is not a prime power")]
    NotPrimePower(u32),

    #[error("field order {order} exceeds the construction cap {cap}")]
    CapExceeded { order: u128, cap: u64 },

    #[error("enumeration of {count} items exceeds the cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coefficient vector has length {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("the zero polynomial has no root scan")]
    ZeroPolynomial,

    #[error("the zero codeword has no minimality verdict")]
    ZeroCodeword,

    #[error("operation requires r = 2, tower has r = {0}")]
    RequiresQuadraticTower(u32),

    #[error("operation requires odd q, tower has q = {0}")]
    RequiresOddQ(u32),

    #[error("predicate requires q > 7, got q = {0}")]
    QTooSmall(u32),

    #[error("line meets the curve in {count} points, expected 1 or q+1")]
    UnexpectedLineIntersection { count: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
