use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: correction {deviation:.3e} exceeds {limit:.3e}")]
    NotHermitian { deviation: f64, limit: f64 },

    #[error("linear map is not *-linear: T(E_ji) differs from T(E_ij)^* by {deviation:.3e}")]
    NotStarLinear { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
