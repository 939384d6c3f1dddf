use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator sizes differ: {left} sites vs {right} sites")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid lattice: {0}")]
    InvalidLayout(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Exact diagonalization refused because the Hilbert space is too large.
    #[error("{sites} sites exceeds the exact-diagonalization bound of {max_sites} sites (dimension 2^{max_sites})")]
    TooLarge { sites: usize, max_sites: usize },

    #[error("decode outcome does not match the error's syndrome")]
    OutcomeMismatch,

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
