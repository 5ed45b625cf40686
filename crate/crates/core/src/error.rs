use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),

    #[error("field size {p}^{e} exceeds the configured bound {bound}")]
    FieldTooLarge { p: u64, e: u32, bound: u64 },

    #[error("invalid modulus: {0}")]
    BadModulus(String),

    #[error("field element code {code} out of range for q = {q}")]
    ElementOutOfRange { code: u64, q: u64 },

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("operands belong to different fields")]
    ContextMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("expected a non-constant polynomial")]
    ConstantPolynomial,

    #[error("enumeration of {needed} states exceeds budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("verification failure: {0}")]
    Disagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
