//! Generators, gates and initial states for the two-qubit case studies.
//!
//! Two-qubit operators use the computational basis order
//! `(|uu>, |ud>, |du>, |dd>)` with `|u> = (1, 0)` and the first qubit as the
//! slow Kronecker index.

use crate::error::{Error, Result};
use crate::linalg::{gate_from_generator, hermitian_eig, kron, vec_norm, Complex, Matrix, Spectral, StateVector};
use crate::scalar::Real;

pub fn pauli_x<T: Real>() -> Matrix<T> {
    Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

pub fn pauli_y<T: Real>() -> Matrix<T> {
    let mut m = Matrix::zeros(2);
    m[(0, 1)] = -Complex::i();
    m[(1, 0)] = Complex::i();
    m
}

pub fn pauli_z<T: Real>() -> Matrix<T> {
    Matrix::real_diagonal(&[T::one(), -T::one()])
}

pub fn hadamard<T: Real>() -> Matrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_real_rows(&[&[s, s], &[s, -s]]).unwrap()
}

/// CNOT with the first qubit as control.
pub fn cnot<T: Real>() -> Matrix<T> {
    Matrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap()
}

/// `sigma_x (x) 1 + 1 (x) sigma_x`.
pub fn noninteracting_generator<T: Real>() -> Matrix<T> {
    Matrix::from_real_rows(&[
        &[0.0, 1.0, 1.0, 0.0],
        &[1.0, 0.0, 0.0, 1.0],
        &[1.0, 0.0, 0.0, 1.0],
        &[0.0, 1.0, 1.0, 0.0],
    ])
    .unwrap()
}

/// Generator `H` of the Bell-pair circuit, `CNOT (Had (x) 1) = exp(i pi H / 8)`.
///
/// Spectrum `(-2, 0, 2, 8)`.
pub fn entangling_generator<T: Real>() -> Matrix<T> {
    let s = T::SQRT_2();
    let two = T::lit(2.0);
    let c = |re: T, im: f64| Complex::new(re, T::lit(im));
    let a = two - s;
    let d = s + two;
    Matrix::from_rows(vec![
        vec![c(a, 0.0), c(a, 0.0), c(-s, -1.0), c(-s, 1.0)],
        vec![c(a, 0.0), c(a, 0.0), c(-s, 1.0), c(-s, -1.0)],
        vec![c(-s, 1.0), c(-s, -1.0), c(d, 0.0), c(d, 0.0)],
        vec![c(-s, -1.0), c(-s, 1.0), c(d, 0.0), c(d, 0.0)],
    ])
    .unwrap()
}

/// `CNOT (Had (x) 1)`: maps `|uu>` to `(|uu> + |dd>)/sqrt 2`.
pub fn bell_circuit_unitary<T: Real>() -> Matrix<T> {
    &cnot() * &kron(&hadamard(), &Matrix::identity(2))
}

/// `|uu>`.
pub fn up_up_state<T: Real>() -> StateVector<T> {
    basis_state(4, 0)
}

pub fn basis_state<T: Real>(dim: usize, k: usize) -> StateVector<T> {
    let mut v = vec![Complex::zero(); dim];
    v[k] = Complex::one();
    v
}

/// A generator, a gate parameter and the reset state.
///
/// The spectral decomposition of the generator is computed once at
/// construction and reused for every gate power.
#[derive(Clone, Debug)]
pub struct GateModel<T> {
    generator: Matrix<T>,
    theta: T,
    initial_state: StateVector<T>,
    spectrum: Spectral<T>,
}

impl<T: Real> GateModel<T> {
    pub fn new(generator: Matrix<T>, theta: T, initial_state: StateVector<T>) -> Result<Self> {
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        if initial_state.len() != generator.dim() {
            return Err(Error::DimensionMismatch(format!(
                "initial state has length {}, generator is {}x{}",
                initial_state.len(),
                generator.dim(),
                generator.dim()
            )));
        }
        let norm = vec_norm(&initial_state);
        if (norm - T::one()).abs() > tol {
            return Err(Error::InvalidArgument(format!(
                "initial state norm {norm} is not 1"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("theta must be finite".into()));
        }
        let spectrum = hermitian_eig(&generator, tol)?;
        Ok(Self {
            generator,
            theta,
            initial_state,
            spectrum,
        })
    }

    /// Noninteracting drive started from `|uu>`.
    pub fn noninteracting(theta: T) -> Self {
        Self::new(noninteracting_generator(), theta, up_up_state()).expect("valid built-in model")
    }

    /// Entangling Bell-circuit generator started from `|uu>`.
    pub fn entangling(theta: T) -> Self {
        Self::new(entangling_generator(), theta, up_up_state()).expect("valid built-in model")
    }

    /// Same generator and reset state at another gate parameter.
    pub fn with_theta(&self, theta: T) -> Self {
        Self {
            theta,
            ..self.clone()
        }
    }

    pub fn generator(&self) -> &Matrix<T> {
        &self.generator
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn initial_state(&self) -> &[Complex<T>] {
        &self.initial_state
    }

    pub fn spectrum(&self) -> &Spectral<T> {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn gate(&self) -> Matrix<T> {
        gate_from_generator(&self.spectrum, self.theta)
    }

    /// `|0><0|`.
    pub fn reset_projector(&self) -> Matrix<T> {
        Matrix::projector(&self.initial_state)
    }

    /// `|n_theta> = U^n |0>`, evaluated through the eigenphases rather than
    /// by repeated multiplication.
    pub fn branch(&self, n: usize) -> StateVector<T> {
        let coeffs = self.spectrum.coefficients(&self.initial_state);
        let nn = T::from_usize_lossy(n);
        let mut out = vec![Complex::zero(); self.dim()];
        for (k, c) in coeffs.iter().enumerate() {
            let w = *c * Complex::cis(nn * self.theta * self.spectrum.eigenvalues[k]);
            for (o, e) in out.iter_mut().zip(self.spectrum.vector(k)) {
                *o += w * e;
            }
        }
        out
    }
}
