//! Dense square complex matrices and state vectors.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A pure state in the computational basis.
pub type StateVector<T> = Vec<Complex<T>>;

/// Dense `dim x dim` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix(format!(
                "expected a non-empty square array, got {} rows",
                dim
            )));
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Real-valued matrix from `f64` rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::real(T::lit(x))).collect())
                .collect(),
        )
    }

    pub fn diagonal(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diagonal(values: &[T]) -> Self {
        let values: Vec<_> = values.iter().map(|&v| Complex::real(v)).collect();
        Self::diagonal(&values)
    }

    /// `|a><b|`.
    pub fn outer(a: &[Complex<T>], b: &[Complex<T>]) -> Self {
        assert_eq!(a.len(), b.len(), "outer product of unequal lengths");
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    /// Pure-state projector `|psi><psi|`.
    pub fn projector(psi: &[Complex<T>]) -> Self {
        Self::outer(psi, psi)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> StateVector<T> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex<T>]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::real(s))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half))
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> StateVector<T> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        (0..self.dim)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).map(|(&a, &b)| a * b).sum()
            })
            .collect()
    }

    /// `A X A^dagger`.
    pub fn conjugate_by(&self, a: &Self) -> Self {
        &(a * self) * &a.adjoint()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.abs()).fold(T::zero(), T::max)
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).abs());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        (&(self * &self.adjoint()) - &Self::identity(self.dim)).max_abs() <= tol
    }

    /// Hermitian, positive semidefinite, unit trace, all within `tol`.
    pub fn is_density(&self, tol: T) -> bool {
        if !self.is_finite() || !self.is_hermitian(tol) {
            return false;
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return false;
        }
        match super::hermitian_eig(&self.hermitian_part(), tol) {
            Ok(spec) => spec.eigenvalues.iter().all(|&l| l >= -tol),
            Err(_) => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    /// Converts between scalar precisions.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.cast()).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// Kronecker product `A (x) B`, with `B` as the fast (second) index.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (na, nb) = (a.dim(), b.dim());
    Matrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// Kronecker product of state vectors.
pub fn kron_vec<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> StateVector<T> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// `<a|b>`.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(&x, &y)| x.conj() * y).sum()
}

pub fn vec_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Wire format: `{"dim": n, "re": [[...]], "im": [[...]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl<T: Real> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim;
        let part = |f: fn(&Complex<T>) -> T| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| f(&self[(i, j)]).as_f64()).collect())
                .collect()
        };
        MatrixJson {
            dim: n,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let n = raw.dim;
        let square = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !square(&raw.re) || !square(&raw.im) {
            return Err(D::Error::custom(format!(
                "matrix arrays must both be {n}x{n} with dim >= 1"
            )));
        }
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (re, im) = (raw.re[i][j], raw.im[i][j]);
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom(format!("non-finite entry at ({i}, {j})")));
                }
                m[(i, j)] = Complex::new(T::lit(re), T::lit(im));
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<f64>;
    type C = Complex<f64>;

    fn sigma_z() -> M {
        M::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    #[test]
    fn kron_sigma_z_identity_is_diag() {
        let k = kron(&sigma_z(), &M::identity(2));
        assert_eq!(
            k,
            M::real_diagonal(&[1.0, 1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&M::identity(2), &M::identity(2)), M::identity(4));
    }

    #[test]
    fn kron_hadamard_on_up_up() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = M::from_real_rows(&[&[s, s], &[s, -s]]).unwrap();
        let hk = kron(&h, &M::identity(2));
        let up_up = vec![C::one(), C::zero(), C::zero(), C::zero()];
        let out = hk.mul_vec(&up_up);
        // (|uu> + |du>)/sqrt2 sits on indices 0 and 2
        let expected = [s, 0.0, s, 0.0];
        for (z, e) in out.iter().zip(expected) {
            assert!((z.re - e).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let rows = vec![vec![C::one(), C::zero()], vec![C::one()]];
        assert!(M::from_rows(rows).is_err());
        assert!(M::from_rows(vec![]).is_err());
    }

    #[test]
    fn predicates() {
        let rho = M::real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(rho.is_density(1e-12));
        assert!(!M::real_diagonal(&[0.6, 0.6]).is_density(1e-12));
        assert!(!M::real_diagonal(&[1.5, -0.5]).is_density(1e-12));
        assert!(sigma_z().is_unitary(1e-15));
        let mut skew = M::identity(2);
        skew[(0, 1)] = C::i();
        assert!(!skew.is_hermitian(1e-12));
        skew[(1, 0)] = -C::i();
        assert!(skew.is_hermitian(1e-12));
    }

    #[test]
    fn json_shape() {
        let mut m = M::identity(2);
        m[(0, 1)] = C::new(0.5, -0.25);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"dim":2,"re":[[1.0,0.5],[0.0,1.0]],"im":[[0.0,-0.25],[0.0,0.0]]}"#);
        let back: M = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_rejects_bad_shapes() {
        assert!(serde_json::from_str::<M>(r#"{"dim":2,"re":[[1,0]],"im":[[0,0],[0,0]]}"#).is_err());
        assert!(serde_json::from_str::<M>(r#"{"dim":0,"re":[],"im":[]}"#).is_err());
    }
}
