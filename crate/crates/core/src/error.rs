use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e} > tol {tol:e})")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e} < -{tol:e})")]
    NotPsd { eigenvalue: f64, tol: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expected a {expected}x{expected} matrix, got {got}x{got}")]
    BadDimension { expected: usize, got: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("linear system is singular (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },

    #[error("reset rate {0} outside (0, 1]")]
    InvalidRate(f64),

    #[error("schedule index {index} beyond explicit sequence of length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
