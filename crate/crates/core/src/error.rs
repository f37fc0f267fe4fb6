use thiserror::Error;

/// Errors produced by the numerical kernel, the program builders and the solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max deviation {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{tolerance:e}")]
    NotPositiveSemidefinite { eigenvalue: f64, tolerance: f64 },

    #[error("matrix is singular or not positive definite (min eigenvalue {min_eigenvalue:e})")]
    Singular { min_eigenvalue: f64 },

    #[error("eigendecomposition failed to converge (residual {residual:e})")]
    DecompositionFailure { residual: f64 },

    #[error("inconsistent constraints: constraint {index} is dependent but its right-hand side disagrees by {mismatch:e}")]
    InconsistentConstraints { index: usize, mismatch: f64 },

    #[error("invalid solver parameter: {0}")]
    InvalidParameter(String),

    #[error("input outside the supported regime: {0}")]
    WrongRegime(String),

    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
