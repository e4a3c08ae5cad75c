use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("row index {index} out of range for {bound} rows")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("block widths sum to {sum}, matrix has {n_cols} columns")]
    WidthMismatch { sum: usize, n_cols: usize },

    #[error("dimension product {0} x {1} overflows")]
    DimensionOverflow(usize, usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("entry ({row}, {col}) is i^{exp}, not a real sign")]
    NotReal { row: usize, col: usize, exp: u8 },

    #[error("{0} is not a prime power")]
    NotPrimePower(usize),

    #[error("field order {0} outside supported range 2..=256")]
    FieldOrderOutOfRange(usize),

    #[error("field of order {0} has even characteristic")]
    EvenCharacteristic(usize),

    #[error("Paley type I needs q = 3 (mod 4), got q = {0}")]
    PaleyOrder(usize),

    #[error("Sylvester exponent {0} out of range 0..=16")]
    SylvesterExponent(u32),

    #[error("matrix is not Hadamard: {0}")]
    NotHadamard(String),

    #[error("Hadamard matrix is not normalized: row {0} does not start with +1")]
    NotNormalized(usize),

    #[error("invalid orthogonal array: {0}")]
    InvalidArray(String),

    #[error("order mismatch: array has q = {array}, Hadamard matrix has order {hadamard}")]
    OrderMismatch { array: usize, hadamard: usize },

    #[error("no real Hadamard matrix of order {0} (need 1, 2 or a multiple of 4)")]
    RealOrder(usize),

    #[error("base order q = {0} is odd; multi-splittability needs even q")]
    OddOrder(usize),

    #[error("subset has {got} blocks, expected {expected}")]
    SubsetSize { got: usize, expected: usize },

    #[error("malformed block structure: {0}")]
    MalformedBlocks(String),

    #[error("block {block} has {distinct} distinct rows, expected {expected}")]
    BlockRowCount { block: usize, distinct: usize, expected: usize },

    #[error("distinct rows of block {0} do not form a Hadamard matrix")]
    BlockNotHadamard(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
