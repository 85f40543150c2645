use thiserror::Error;

pub type Result<T> = std::result::Result<T, CretanError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CretanError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("incompatible radicands sqrt({0}) and sqrt({1}); demote to float first")]
    IncompatibleRadicands(u64, u64),

    #[error("all polynomial coefficients are zero")]
    AllZeroCoefficients,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("size cap exceeded: {what} = {value} (limit {limit})")]
    SizeCap { what: &'static str, value: u64, limit: u64 },

    #[error("field elements belong to different fields")]
    FieldMismatch,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("{value} is not congruent to {residue} mod {modulus}")]
    BadCongruence { value: u64, residue: u64, modulus: u64 },

    #[error("difference census failed: {0}")]
    CensusFailed(String),

    #[error("fixture `{0}` is not available")]
    MissingFixture(String),

    #[error("invalid order {order}: {reason}")]
    InvalidOrder { order: usize, reason: String },

    #[error("entry modulus exceeds 1: {0}")]
    ModulusViolation(String),

    #[error("matrix is not regular Hadamard: {0}")]
    NotRegular(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not square")]
    NonSquare,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("no construction available: {0}")]
    NoConstruction(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format version {0}")]
    Version(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CretanError {
    fn from(e: std::io::Error) -> Self {
        CretanError::Io(e.to_string())
    }
}
