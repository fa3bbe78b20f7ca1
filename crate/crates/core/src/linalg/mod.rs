//! Dense complex linear algebra for small systems (dimension up to a few
//! dozen): Hermitian eigendecomposition, spectral matrix functions, Kronecker
//! products, trace norms and a direct linear solver.

mod complex;
mod eigen;
mod matrix;
mod solve;

pub use complex::Complex;
pub use eigen::{gate_from_generator, hermitian_eig, one_norm, psd_sqrt, Spectral};
pub use matrix::{inner, kron, kron_vec, vec_norm, Matrix, StateVector};
pub use solve::solve;
