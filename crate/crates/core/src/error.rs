use thiserror::Error;

/// Errors surfaced by the exact-arithmetic layers and the classification
/// pipelines.  Parse errors carry a position; everything else is a
/// precondition or arithmetic failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("mixed fields: {0} vs {1}")]
    MixedFields(String, String),

    #[error("characteristic 2 is not supported (got p = {0})")]
    EvenCharacteristic(u64),

    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("prime {p} too small for forms of degree {degree}: need p > {bound}")]
    PrimeTooSmall { p: u64, degree: i64, bound: i64 },

    #[error("slot mismatch for {name}: expected degree {expected}, got {got}")]
    SlotMismatch {
        name: String,
        expected: i64,
        got: i64,
    },

    #[error("operation undefined for the zero form")]
    ZeroForm,

    #[error("both inputs are the zero form")]
    BothZero,

    #[error("operation only defined for Laurent values")]
    NotLaurent,

    #[error("operation not defined over a Laurent field")]
    LaurentUnsupported,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("degree cap exceeded: {0}")]
    DegreeCap(String),

    #[error("parse error at line {line}, column {col}: {msg} (near `{token}`)")]
    Parse {
        line: usize,
        col: usize,
        token: String,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
