use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31 - 1]")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("coefficient r{0} must be nonzero")]
    ZeroCoefficient(usize),
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("ideal has no nonzero generators")]
    EmptyIdeal,
    #[error("quotient ring is not finite-dimensional")]
    NotFiniteQuotient,
    #[error("invalid torus: {0}")]
    InvalidTorus(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("code has no logical qudits")]
    NoLogicals,
    #[error("n = {0} must be even and at least 2")]
    OddN(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("{0}")]
    Io(String),
    #[error("malformed record: {0}")]
    Format(String),
    #[error("interrupted")]
    Interrupted,
}

pub type Result<T> = std::result::Result<T, Error>;
