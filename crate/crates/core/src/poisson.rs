//! Constant-rate resetting: steady states, the weak-reset limit and gate
//! resonances.
//!
//! With a constant reset probability `r` the ensemble obeys the Markovian map
//! `rho -> r |0><0| + (1 - r) U rho U^dag`, whose unique fixed point is
//! `r sum_n (1 - r)^n |n><n|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, solve, Complex, Matrix};
use crate::models::GateModel;
use crate::scalar::Real;

pub const DEFAULT_RES_TOL: f64 = 1e-9;
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;

/// Generator eigenvalues closer than this (times `max(1, sum |lambda|)`) are
/// one level.
pub const DEGENERACY_TOL: f64 = 1e-9;

fn check_rate(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRate(r))
    }
}

/// Steady state from the truncated geometric series. Terms stop once
/// `(1 - r)^(N+1) < tail_tol`, so the missing trace is below `tail_tol`.
///
/// The number of terms grows like `ln(tail_tol) / ln(1 - r)`; for small `r`
/// prefer [`steady_state_solve`].
pub fn steady_state_series<T: Real>(model: &GateModel<T>, r: f64, tail_tol: f64) -> Result<Matrix<T>> {
    check_rate(r)?;
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tail_tol = {tail_tol} must lie in (0, 1)")));
    }
    let q = 1.0 - r;
    let u = model.gate();
    let mut psi = model.initial_state().to_vec();
    let mut rho = Matrix::zeros(model.dim());
    let mut weight = r;
    let mut survival = 1.0;
    loop {
        let w = T::lit(weight);
        for i in 0..psi.len() {
            let a = psi[i].scale(w);
            for j in 0..psi.len() {
                rho[(i, j)] += a * psi[j].conj();
            }
        }
        survival *= q;
        if survival < tail_tol {
            break;
        }
        weight *= q;
        psi = u.mul_vec(&psi);
    }
    Ok(rho)
}

/// Steady state from `(1 - (1-r) U (x) U^*) vec(rho) = r vec(|0><0|)`.
///
/// `vec` stacks rows: entry `(i, j)` sits at `i * dim + j`, so the
/// conjugated factor acts on the column index.
///
/// The system matrix has eigenvalues `1 - (1-r) e^{i theta (lambda_i - lambda_j)}`.
/// Away from resonance the smallest is of order `r`, but at a resonant or
/// near-resonant `theta` some approach `r` itself and the conditioning
/// degrades like `1/r`; below `r ~ 1e-8` results near resonance are not
/// trustworthy and the weak-reset limit should be used instead.
pub fn steady_state_solve<T: Real>(model: &GateModel<T>, r: f64) -> Result<Matrix<T>> {
    check_rate(r)?;
    let d = model.dim();
    let u = model.gate();
    let big = kron(&u, &u.conj());
    let q = T::lit(1.0 - r);
    let system = Matrix::from_fn(d * d, |a, b| {
        let id = if a == b { Complex::one() } else { Complex::zero() };
        id - big[(a, b)].scale(q)
    });
    let rho0 = model.reset_projector();
    let rhs: Vec<Complex<T>> = rho0.entries().iter().map(|z| z.scale(T::lit(r))).collect();
    let x = solve(&system, &rhs).map_err(|e| {
        log::error!("steady-state system singular at r = {r}: {e}");
        e
    })?;
    let rho = Matrix::from_fn(d, |i, j| x[i * d + j]);
    // symmetrize away rounding in the anti-Hermitian part
    Ok(rho.hermitian_part())
}

/// One step of the constant-rate map, `r |0><0| + (1 - r) U rho U^dag`.
pub fn master_equation_step<T: Real>(model: &GateModel<T>, r: f64, rho: &Matrix<T>) -> Result<Matrix<T>> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidRate(r));
    }
    if rho.dim() != model.dim() {
        return Err(Error::BadDimension {
            expected: model.dim(),
            got: rho.dim(),
        });
    }
    let evolved = rho.conjugate_by(&model.gate()).scale_real(T::lit(1.0 - r));
    Ok(&model.reset_projector().scale_real(T::lit(r)) + &evolved)
}

fn degeneracy_scale<T: Real>(eigenvalues: &[T]) -> f64 {
    let norm: f64 = eigenvalues.iter().map(|l| l.as_f64().abs()).sum();
    DEGENERACY_TOL * norm.max(1.0)
}

/// Whether `theta (lambda_i - lambda_j) / 2 pi` is within `res_tol` of a
/// nonzero integer.
fn resonant(theta: f64, gap: f64, res_tol: f64) -> bool {
    let x = theta * gap / std::f64::consts::TAU;
    let k = x.round();
    k != 0.0 && (x - k).abs() < res_tol
}

/// The `r -> 0` limit of the steady state.
///
/// In the generator eigenbasis the populations `|<e_i|0>|^2` survive, and a
/// coherence `<e_i|0><0|e_j>` survives only when the two levels are
/// degenerate or their phases `theta (lambda_i - lambda_j)` differ by a
/// multiple of `2 pi`. Every other coherence averages out.
pub fn weak_reset_limit<T: Real>(model: &GateModel<T>, res_tol: f64) -> Matrix<T> {
    let spec = model.spectrum();
    let c = spec.coefficients(model.initial_state());
    let d = model.dim();
    let deg = degeneracy_scale(&spec.eigenvalues);
    let theta = model.theta().as_f64();
    let eig = Matrix::from_fn(d, |i, j| {
        let gap = (spec.eigenvalues[i] - spec.eigenvalues[j]).as_f64();
        if i == j || gap.abs() <= deg || resonant(theta, gap, res_tol) {
            c[i] * c[j].conj()
        } else {
            Complex::zero()
        }
    });
    let v = &spec.eigenvectors;
    (&(v * &eig) * &v.adjoint()).hermitian_part()
}

/// A resonant gate parameter and the level pairs `(i, j, k)` with
/// `theta (lambda_i - lambda_j) = 2 pi k`, `i > j`, that produce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub theta: f64,
    pub pairs: Vec<(usize, usize, u64)>,
}

/// Levels are indexed in ascending eigenvalue order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    /// `(i, j)` with `i < j` and `lambda_i = lambda_j`; these pairs keep their
    /// coherence at every `theta`.
    pub degenerate_pairs: Vec<(usize, usize)>,
    /// Sorted by `theta`.
    pub resonances: Vec<Resonance>,
}

impl ResonanceReport {
    /// Every `(i, j, k)` in the report, in `theta` order.
    pub fn pairs(&self) -> Vec<(usize, usize, u64)> {
        self.resonances.iter().flat_map(|r| r.pairs.iter().copied()).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.resonances.iter().map(|r| r.theta).collect()
    }
}

/// All `theta* = 2 pi k / (lambda_i - lambda_j)` with `k >= 1` in `[a, b)`.
///
/// Candidates closer than `res_tol` are merged. The range ends are also
/// applied with slack `res_tol` in `k`, so a resonance that sits on `b` up to
/// rounding of the eigenvalues is excluded, and one on `a` is kept.
pub fn resonance_scan<T: Real>(generator: &Matrix<T>, range: (f64, f64), res_tol: f64) -> Result<ResonanceReport> {
    let (a, b) = range;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidArgument(format!("bad theta range [{a}, {b})")));
    }
    if res_tol.is_nan() || res_tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("res_tol = {res_tol} must be > 0")));
    }
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
    let spec = crate::linalg::hermitian_eig(generator, tol)?;
    let lambda: Vec<f64> = spec.eigenvalues.iter().map(|l| l.as_f64()).collect();
    let deg = degeneracy_scale(&spec.eigenvalues);
    let tau = std::f64::consts::TAU;

    let mut report = ResonanceReport::default();
    let mut candidates: Vec<(f64, (usize, usize, u64))> = Vec::new();
    for i in 0..lambda.len() {
        for j in 0..i {
            let gap = lambda[i] - lambda[j];
            if gap.abs() <= deg {
                report.degenerate_pairs.push((j, i));
                continue;
            }
            if a == b {
                continue;
            }
            let k_lo = (a * gap / tau - res_tol).ceil().max(1.0);
            let k_hi = b * gap / tau - res_tol;
            let mut k = k_lo;
            while k < k_hi {
                candidates.push((tau * k / gap, (i, j, k as u64)));
                k += 1.0;
            }
        }
    }
    report.degenerate_pairs.sort_unstable();
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    for (theta, pair) in candidates {
        match report.resonances.last_mut() {
            Some(last) if (theta - last.theta).abs() <= res_tol * theta.abs().max(1.0) => {
                last.pairs.push(pair)
            }
            _ => report.resonances.push(Resonance {
                theta,
                pairs: vec![pair],
            }),
        }
    }
    for r in &mut report.resonances {
        r.pairs.sort_unstable();
    }
    Ok(report)
}
