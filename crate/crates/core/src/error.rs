use thiserror::Error;

/// Errors produced by the exact-arithmetic and convolution layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field order {requested} exceeds the configured cap {cap}")]
    OrderCapExceeded { requested: u64, cap: u64 },

    #[error("order {from} does not divide target order {to}")]
    NonDivisibleOrders { from: u64, to: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix at index {index} is not invertible")]
    NotInvertible { index: usize },

    #[error("lambda must be nonzero")]
    ZeroLambda,

    #[error("lambda = 1 is excluded by the dimension formula")]
    LambdaOne,

    #[error("scalar at index {index} is zero")]
    ZeroScalar { index: usize },

    #[error("braid letter {letter} out of range for tuple length {length}")]
    BraidIndexOutOfRange { letter: i32, length: usize },

    #[error("pure braid generators are only provided for r = 3 (got r = {0})")]
    UnsupportedBraidLength(usize),

    #[error("matrix at index {index} is not in SL2 (det != 1)")]
    NotSl2 { index: usize },

    #[error("expected a triple of 2x2 matrices, got length {length}, dimension {dimension}")]
    NotSl2Triple { length: usize, dimension: usize },

    #[error("spectrum of the product could not be fully resolved (found multiplicity {found} of {dimension})")]
    UnresolvedSpectrum { found: usize, dimension: usize },

    #[error("product spectrum is degenerate (repeated eigenvalues); theorem hypothesis `three distinct eigenvalues` fails")]
    DegenerateSpectrum,

    #[error("no square root of {value} found in a cyclotomic field of order <= {cap}")]
    NoSquareRoot { value: String, cap: u64 },

    #[error("matrix is not a pseudo-reflection: {0}")]
    NotPseudoReflection(String),

    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },

    #[error("tuple document invalid: {0}")]
    Document(String),

    #[error("catalog entry `{0}` not found")]
    MissingCatalogEntry(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("jordan data incomplete; candidates do not exhaust the spectrum")]
    IncompleteJordanData,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
