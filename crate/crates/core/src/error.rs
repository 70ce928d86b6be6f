use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("residue {r} out of range for modulus {n}")]
    ResidueOutOfRange { r: usize, n: usize },

    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("matrix order must be positive")]
    ZeroOrder,

    #[error("degree {degree} is not below 2n = {bound}; use classify instead")]
    DegreeTooHigh { degree: usize, bound: usize },

    #[error("starting matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
