use thiserror::Error;

/// Errors raised by channel construction, conversion and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has {found} entries, expected {expected}")]
    EntryCount { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("{what} is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { what: String, min_eigenvalue: f64 },

    #[error("state has trace {0}, expected 1")]
    InvalidTrace(f64),

    #[error("Kraus list is empty or all operators are zero")]
    EmptyKraus,

    #[error("Holevo form has no pairs")]
    EmptyHolevo,

    #[error("effect F_{index} has rank {rank}, expected a rank-one operator")]
    NotRankOne { index: usize, rank: usize },

    #[error("tolerance {name} = {value} outside (0, 1e-3]")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
