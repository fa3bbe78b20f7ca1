//! Correlation and entanglement measures for two-qubit density matrices.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, psd_sqrt, Complex, Matrix};
use crate::models::{pauli_x, pauli_y, pauli_z};
use crate::scalar::Real;

fn require_two_qubits<T: Real>(rho: &Matrix<T>) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::BadDimension {
            expected: 4,
            got: rho.dim(),
        })
    }
}

/// Clamp tolerance used when taking square roots of density matrices.
fn psd_tol<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1e3))
}

fn clamp_unit<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// `tr(rho O)`, real part.
pub fn expectation<T: Real>(rho: &Matrix<T>, op: &Matrix<T>) -> T {
    (rho * op).trace().re
}

fn on_first<T: Real>(op: &Matrix<T>) -> Matrix<T> {
    kron(op, &Matrix::identity(2))
}

fn on_second<T: Real>(op: &Matrix<T>) -> Matrix<T> {
    kron(&Matrix::identity(2), op)
}

/// Connected correlator `<Z Z> - <Z 1><1 Z>`.
pub fn zz_correlation<T: Real>(rho: &Matrix<T>) -> Result<T> {
    require_two_qubits(rho)?;
    let z = pauli_z();
    let zz = expectation(rho, &kron(&z, &z));
    let z1 = expectation(rho, &on_first(&z));
    let z2 = expectation(rho, &on_second(&z));
    Ok(zz - z1 * z2)
}

/// `tr[rho (Z 1 + 1 Z)]`.
pub fn magnetization<T: Real>(rho: &Matrix<T>) -> Result<T> {
    require_two_qubits(rho)?;
    let z = pauli_z();
    Ok(expectation(rho, &(&on_first(&z) + &on_second(&z))))
}

/// Spin-flipped state `(Y Y) rho^* (Y Y)`.
pub fn spin_flip<T: Real>(rho: &Matrix<T>) -> Matrix<T> {
    let y = pauli_y();
    let yy = kron(&y, &y);
    &(&yy * &rho.conj()) * &yy
}

/// The four `mu_i` in descending order: square roots of the eigenvalues of
/// `sqrt(rho) rho~ sqrt(rho)`, which has the same spectrum as `rho rho~`.
pub fn concurrence_spectrum<T: Real>(rho: &Matrix<T>) -> Result<Vec<T>> {
    require_two_qubits(rho)?;
    let s = psd_sqrt(rho, psd_tol())?;
    let inner = (&(&s * &spin_flip(rho)) * &s).hermitian_part();
    let spec = hermitian_eig(&inner, psd_tol())?;
    let mut mu: Vec<T> = spec
        .eigenvalues
        .iter()
        .map(|&l| l.max(T::zero()).sqrt())
        .collect();
    mu.reverse();
    Ok(mu)
}

/// Hill–Wootters concurrence `max(0, mu_0 - mu_1 - mu_2 - mu_3)`.
pub fn concurrence<T: Real>(rho: &Matrix<T>) -> Result<T> {
    let mu = concurrence_spectrum(rho)?;
    Ok(clamp_unit(mu[0] - mu[1] - mu[2] - mu[3]))
}

/// Local quantum uncertainty with respect to the first qubit,
/// `1 - nu_max(W)` with `W_ij = tr(sqrt(rho) s_i sqrt(rho) s_j)`.
pub fn lqu<T: Real>(rho: &Matrix<T>) -> Result<T> {
    require_two_qubits(rho)?;
    let s = psd_sqrt(rho, psd_tol())?;
    let paulis = [on_first(&pauli_x()), on_first(&pauli_y()), on_first(&pauli_z())];
    let sandwiched: Vec<Matrix<T>> = paulis.iter().map(|p| &(&s * p) * &s).collect();
    let mut w = Matrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            w[(i, j)] = Complex::real((&sandwiched[i] * &paulis[j]).trace().re);
        }
    }
    let w = w.hermitian_part();
    let spec = hermitian_eig(&w, T::lit(1e-8))?;
    let nu_max = *spec.eigenvalues.last().expect("3x3");
    Ok(clamp_unit(T::one() - nu_max))
}

fn check_rate<T: Real>(r: T) -> Result<()> {
    if r > T::zero() && r <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidRate(r.as_f64()))
    }
}

/// `f(r, x) = r sum_j (1-r)^j cos(j x)`, resummed.
pub fn analytic_f<T: Real>(r: T, x: T) -> Result<T> {
    check_rate(r)?;
    let q = T::one() - r;
    let c = x.cos();
    Ok(r * (T::one() - q * c) / (T::one() + q * q - T::lit(2.0) * q * c))
}

/// Closed-form Poisson steady-state correlator of the noninteracting model,
/// `(1 + f(r, 4 theta)) / 2 - f(r, 2 theta)^2`.
pub fn analytic_zz_correlation<T: Real>(r: T, theta: T) -> Result<T> {
    let two = T::lit(2.0);
    let f4 = analytic_f(r, T::lit(4.0) * theta)?;
    let f2 = analytic_f(r, two * theta)?;
    Ok((T::one() + f4) / two - f2 * f2)
}

/// The full set of two-qubit figures of merit for one density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationSet {
    pub zz_corr: f64,
    pub concurrence: f64,
    pub lqu: f64,
    pub magnetization: f64,
}

impl CorrelationSet {
    pub fn of<T: Real>(rho: &Matrix<T>) -> Result<Self> {
        Ok(Self {
            zz_corr: zz_correlation(rho)?.as_f64(),
            concurrence: concurrence(rho)?.as_f64(),
            lqu: lqu(rho)?.as_f64(),
            magnetization: magnetization(rho)?.as_f64(),
        })
    }
}

/// Named scalar observable, as selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Observable {
    Magnetization,
    ZzCorrelation,
    Concurrence,
    Lqu,
}

impl Observable {
    pub const ALL: [Observable; 4] = [
        Observable::Magnetization,
        Observable::ZzCorrelation,
        Observable::Concurrence,
        Observable::Lqu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Magnetization => "magnetization",
            Self::ZzCorrelation => "zz_corr",
            Self::Concurrence => "concurrence",
            Self::Lqu => "lqu",
        }
    }

    pub fn evaluate<T: Real>(self, rho: &Matrix<T>) -> Result<f64> {
        let v = match self {
            Self::Magnetization => magnetization(rho)?,
            Self::ZzCorrelation => zz_correlation(rho)?,
            Self::Concurrence => concurrence(rho)?,
            Self::Lqu => lqu(rho)?,
        };
        Ok(v.as_f64())
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "magnetization" | "m" => Ok(Self::Magnetization),
            "zz_corr" | "zz_correlation" | "c" => Ok(Self::ZzCorrelation),
            "concurrence" => Ok(Self::Concurrence),
            "lqu" => Ok(Self::Lqu),
            other => Err(Error::InvalidArgument(format!("unknown observable `{other}`"))),
        }
    }
}
