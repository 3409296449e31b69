use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not self-adjoint: |M - M^H|_F = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("trace of the matrix is {trace}, not 1 (|Tr - 1| = {residual:e})")]
    TraceNotOne { trace: f64, residual: f64 },

    #[error("matrix is not positive: smallest eigenvalue is {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e} below tolerance")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("state vector is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("atomic-symmetry equation has no unique solution: {0}")]
    NoSolution(String),

    #[error("epsilon-family state is infeasible: {0}")]
    InfeasibleEpsilon(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown Bell state kind '{0}' (expected one of phi+, phi-, psi+, psi-)")]
    UnknownKind(String),

    #[error(
        "unknown atomic-symmetry mode '{0}' (expected parallel, crossed, twist, twist-crossed)"
    )]
    UnknownMode(String),

    #[error("unknown c choice '{0}' (expected low, middle, high)")]
    UnknownChoice(String),

    #[error("cannot parse matrix file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
