//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! spectral matrix functions built on it.

use super::complex::Complex;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectral<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> Spectral<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The `k`-th eigenvector.
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    /// `V f(Lambda) V^dagger`.
    pub fn map(&self, f: impl Fn(T) -> Complex<T>) -> Matrix<T> {
        let v = &self.eigenvectors;
        let n = self.dim();
        let fl: Vec<Complex<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        Matrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.map(Complex::real)
    }

    /// Components `<e_k|psi>` of a vector in the eigenbasis.
    pub fn coefficients(&self, psi: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim())
            .map(|k| super::inner(&self.vector(k), psi))
            .collect()
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] when `a` deviates from its adjoint by
/// more than `tol` in any entry. Only the Hermitian part of `a` is used after
/// that check. Degenerate eigenspaces come back with an arbitrary orthonormal
/// basis.
pub fn hermitian_eig<T: Real>(a: &Matrix<T>, tol: T) -> Result<Spectral<T>> {
    let defect = a.hermitian_defect();
    if defect.is_nan() || defect > tol {
        return Err(Error::NotHermitian {
            asymmetry: defect.as_f64(),
            tol: tol.as_f64(),
        });
    }
    let n = a.dim();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)].im = T::zero();
    }
    let mut v = Matrix::identity(n);

    let rel = T::lit(1e-14).max(T::epsilon() * T::lit(8.0));
    let threshold = rel * m.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > threshold {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = Matrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Spectral {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm<T: Real>(m: &Matrix<T>) -> T {
    let n = m.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `m[p][q]`.
///
/// The rotation is `J = D P` where `D` strips the phase of `m[p][q]` and `P`
/// is the real symmetric Jacobi rotation. `m <- J^dagger m J`, `v <- v J`.
fn rotate<T: Real>(m: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.abs();
    if mag == T::zero() {
        return;
    }
    let phase = apq.scale(mag.recip()); // e^{i phi}
    let phase_conj = phase.conj();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;

    let two = T::lit(2.0);
    let theta = (aqq - app) / (two * mag);
    let sign = if theta < T::zero() { -T::one() } else { T::one() };
    let t = sign / (theta.abs() + theta.hypot(T::one()));
    let c = (t * t + T::one()).sqrt().recip();
    let s = t * c;

    let n = m.dim();
    let jqp = phase_conj.scale(-s);
    let jqq = phase_conj.scale(c);
    let cc = Complex::real(c);
    let sc = Complex::real(s);

    // columns: m <- m J
    for k in 0..n {
        let (akp, akq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = akp * cc + akq * jqp;
        m[(k, q)] = akp * sc + akq * jqq;
    }
    // rows: m <- J^dagger m
    let jdag_pq = jqp.conj();
    let jdag_qq = jqq.conj();
    for k in 0..n {
        let (apk, aqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = apk * cc + aqk * jdag_pq;
        m[(q, k)] = apk * sc + aqk * jdag_qq;
    }
    m[(p, q)] = Complex::zero();
    m[(q, p)] = Complex::zero();
    m[(p, p)].im = T::zero();
    m[(q, q)].im = T::zero();

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * cc + vkq * jqp;
        v[(k, q)] = vkp * sc + vkq * jqq;
    }
}

/// `U(theta) = exp(i theta H) = V diag(e^{i theta lambda_k}) V^dagger`.
pub fn gate_from_generator<T: Real>(spec: &Spectral<T>, theta: T) -> Matrix<T> {
    spec.map(|l| Complex::cis(theta * l))
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// `[-clamp_tol, 0)` are clamped to zero; anything more negative is
/// [`Error::NotPsd`].
pub fn psd_sqrt<T: Real>(a: &Matrix<T>, clamp_tol: T) -> Result<Matrix<T>> {
    let spec = hermitian_eig(a, clamp_tol)?;
    if let Some(&worst) = spec.eigenvalues.first() {
        if worst < -clamp_tol {
            return Err(Error::NotPsd {
                eigenvalue: worst.as_f64(),
                tol: clamp_tol.as_f64(),
            });
        }
    }
    Ok(spec.map(|l| Complex::real(l.max(T::zero()).sqrt())))
}

/// Trace norm (sum of singular values).
///
/// Hermitian input uses `sum |lambda_k|`. Otherwise the singular values are
/// read off the Hermitian dilation `[[0, A], [A^dagger, 0]]`, whose spectrum
/// is `{+-sigma_k}`.
pub fn one_norm<T: Real>(a: &Matrix<T>) -> T {
    let scale = a.max_abs();
    if scale == T::zero() {
        return T::zero();
    }
    let n = a.dim();
    let exact_tol = T::epsilon() * T::lit(64.0) * scale;
    if a.hermitian_defect() <= exact_tol {
        let spec = hermitian_eig(a, exact_tol).expect("checked Hermitian");
        return spec.eigenvalues.iter().map(|l| l.abs()).sum();
    }
    let dilation = Matrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, false) => a[(i, j - n)],
        (false, true) => a[(j, i - n)].conj(),
        _ => Complex::zero(),
    });
    let spec = hermitian_eig(&dilation, exact_tol).expect("dilation is Hermitian");
    spec.eigenvalues.iter().map(|l| l.abs()).sum::<T>() * T::lit(0.5)
}
