use thiserror::Error;

use crate::symlang::{ParseError, SymlangError};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("frequency {mode} is not on the lattice {lo}..={hi}")]
    OffLattice { mode: i64, lo: i64, hi: i64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    #[error(transparent)]
    Symlang(#[from] SymlangError),

    #[error("non-finite value {value} at {point}")]
    NonFinite { value: String, point: String },

    #[error("invalid class spec: {0}")]
    InvalidClass(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate angle θ = {0}")]
    DegenerateAngle(f64),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Symlang(SymlangError::Parse(e))
    }
}
