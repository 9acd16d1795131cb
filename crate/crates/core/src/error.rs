use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: need at least 3 nodes per axis, got {0}")]
    InvalidGrid(usize),

    #[error("dimension mismatch: expected a {expected}D grid, got {got}D")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid mismatch between field and problem spec")]
    GridMismatch,

    #[error("p must be ≥ 2, got {0}")]
    UnsupportedExponent(f64),

    #[error("degenerate node {index}: vector norm below 1e-15")]
    DegenerateNode { index: usize },

    #[error("constraint violation: {what} defect {defect:e}")]
    ConstraintViolation { what: &'static str, defect: f64 },

    #[error("inadmissible initial field: unit-norm defect {unit:e}, boundary defect {boundary:e}")]
    InadmissibleInit { unit: f64, boundary: f64 },

    #[error("operation requires problem {expected}, spec has {got}")]
    WrongProblem {
        expected: &'static str,
        got: &'static str,
    },

    #[error("invalid problem spec: {0}")]
    InvalidSpec(String),

    #[error("negative sample {0} outside the domain of t^(1/p)")]
    NegativeSample(f64),

    #[error("malformed field file: {0}")]
    MalformedField(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
