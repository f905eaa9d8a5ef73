use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime number")]
    NotPrime(u64),

    #[error("element {x} is out of range for the prime field modulo {p}")]
    OutOfRange { x: u64, p: u64 },

    #[error("the multiplicative order of 0 modulo {0} is undefined")]
    ZeroElement(u64),

    #[error(
        "sigma = {sigma} has odd multiplicative order {order} modulo {p}; \
         an even order is required to split the base matrix into two halves"
    )]
    OddOrder { sigma: u64, order: u64, p: u64 },

    #[error("extension degree s = {0} is outside the supported range 1..=5")]
    ExtensionDegree(usize),

    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    Dimension {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    #[error(
        "rows {row_a} of H1 and {row_b} of H2 overlap in {overlap} columns; \
         the product H1*H2^T must be the all-one matrix"
    )]
    NotAllOnes {
        row_a: usize,
        row_b: usize,
        overlap: usize,
    },

    #[error("twisted condition H_X*H_Z^T = 0 violated at row pair ({row_x}, {row_z})")]
    TwistedCondition { row_x: usize, row_z: usize },

    #[error("degenerate code dimensions: {0} check rows, block length {1}")]
    DegenerateCode(usize, usize),

    #[error("weight bound {w_max} on length {n} exceeds the enumeration budget")]
    SearchBudget { w_max: usize, n: usize },

    #[error("malformed alist data: {0}")]
    Alist(String),

    #[error("malformed code descriptor: {0}")]
    Descriptor(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("invalid simulation spec: {0}")]
    SimulationSpec(String),

    #[error("thread pool configuration failed: {0}")]
    ThreadPool(String),

    #[error("simulation cancelled")]
    Cancelled,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
