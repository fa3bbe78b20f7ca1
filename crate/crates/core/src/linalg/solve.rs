use super::complex::Complex;
use super::matrix::{Matrix, StateVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve<T: Real>(a: &Matrix<T>, b: &[Complex<T>]) -> Result<StateVector<T>> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix is {n}x{n}",
            b.len()
        )));
    }
    let pivot_tol = T::epsilon() * T::from_usize_lossy(n) * a.max_abs();
    let mut m: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)]).collect())
        .collect();
    let mut x: StateVector<T> = b.to_vec();

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .fold((col, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_mag <= pivot_tol {
            return Err(Error::SingularSystem {
                pivot: pivot_mag.as_f64(),
            });
        }
        m.swap(col, pivot_row);
        x.swap(col, pivot_row);
        let pivot_row = m[col].clone();
        for r in col + 1..n {
            let factor = m[r][col] / pivot_row[col];
            if factor.re == T::zero() && factor.im == T::zero() {
                continue;
            }
            for (dst, &src) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *dst -= factor * src;
            }
            let delta = factor * x[col];
            x[r] -= delta;
        }
    }
    for row in (0..n).rev() {
        let mut acc = x[row];
        for c in row + 1..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}
