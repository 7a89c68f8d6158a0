use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("{a} is not invertible modulo {n}")]
    NotCoprime { a: i64, n: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not irreducible over Q")]
    Reducible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is zero")]
    ZeroElement,
    #[error("squareness undetermined at precision cap ({0})")]
    Undetermined(String),
    #[error("not a Sophie Germain pair: q = {0}")]
    NotSophieGermain(u64),
    #[error("m = {0} is outside the family: m^2 + 3m + 9 is not squarefree")]
    OutsideFamily(i64),
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("class group unknown for field {0}")]
    ClassGroupUnknown(String),
    #[error("independence cap exceeded: {count} classes, cap {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
