//! Exact evolution of the reset ensemble for an arbitrary schedule.
//!
//! At time `t` the state is `rho(t) = sum_n P_n(t) |n><n|`, where `|n> =
//! U^n |0>` and `P_n(t)` is the probability that the last reset happened `n`
//! steps ago. The probabilities evolve as
//!
//! ```text
//! P_0(t+1)   = sum_n r_n P_n(t)
//! P_n+1(t+1) = (1 - r_n) P_n(t)
//! ```

use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::{one_norm, Complex, Matrix, StateVector};
use crate::models::GateModel;
use crate::observables::Observable;
use crate::scalar::Real;
use crate::schedules::ResetSchedule;
use crate::table::{format_float, write_row};

/// Trailing branches lighter than this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-16;

/// One application of the probability transfer matrix `R(t)`.
///
/// The output is one entry longer than the input.
pub fn step_probabilities(probs: &[f64], schedule: &ResetSchedule) -> Result<Vec<f64>> {
    let mut next = vec![0.0; probs.len() + 1];
    let mut reset_mass = 0.0;
    for (n, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let r = schedule.prob_at(n)?;
        reset_mass += r * p;
        next[n + 1] = (1.0 - r) * p;
    }
    next[0] = reset_mass;
    Ok(next)
}

/// `sum_n P_n |psi_n><psi_n|`.
pub fn build_density<T: Real>(probs: &[f64], branches: &[StateVector<T>]) -> Result<Matrix<T>> {
    if probs.len() != branches.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for {} branches",
            probs.len(),
            branches.len()
        )));
    }
    let dim = branches.first().map(|b| b.len()).ok_or_else(|| {
        Error::InvalidArgument("density of an empty mixture".into())
    })?;
    let mut rho = Matrix::zeros(dim);
    for (&p, psi) in probs.iter().zip(branches) {
        if p == 0.0 {
            continue;
        }
        if psi.len() != dim {
            return Err(Error::DimensionMismatch("branches of unequal length".into()));
        }
        let w = T::lit(p);
        for i in 0..dim {
            let a = psi[i].scale(w);
            for j in 0..dim {
                rho[(i, j)] += a * psi[j].conj();
            }
        }
    }
    Ok(rho)
}

/// `rho(t)` assembled from the last-renewal decomposition, without the
/// probability recursion.
///
/// `P_0(tau)` comes from the renewal convolution
/// `P_0(tau) = sum_{m=1}^{tau} r_{m-1} S(m-1) P_0(tau-m)` with the survival
/// `S(n) = prod_{j<n} (1 - r_j)`, and then
/// `rho(t) = S(t) |t><t| + sum_{n<t} P_0(t-n) S(n) |n><n|`. Branch states are
/// evaluated through the generator spectrum.
pub fn renewal_density<T: Real>(
    schedule: &ResetSchedule,
    model: &GateModel<T>,
    t: usize,
) -> Result<Matrix<T>> {
    let rates: Vec<f64> = (0..t).map(|n| schedule.prob_at(n)).collect::<Result<_>>()?;
    let mut survival = vec![1.0; t + 1];
    for n in 0..t {
        survival[n + 1] = survival[n] * (1.0 - rates[n]);
    }
    // first-renewal weights: reset after exactly m steps
    let first: Vec<f64> = (1..=t).map(|m| rates[m - 1] * survival[m - 1]).collect();
    let mut reset_at = vec![0.0; t + 1];
    reset_at[0] = 1.0;
    for tau in 1..=t {
        reset_at[tau] = (1..=tau).map(|m| first[m - 1] * reset_at[tau - m]).sum();
    }
    let mut probs = Vec::with_capacity(t + 1);
    let mut branches = Vec::with_capacity(t + 1);
    for n in 0..=t {
        let p = if n == t {
            survival[t]
        } else {
            reset_at[t - n] * survival[n]
        };
        probs.push(p);
        branches.push(model.branch(n));
    }
    build_density(&probs, &branches)
}

/// `Delta rho = rho(t+1) - rho(t)` from the eigenbasis expansion
///
/// ```text
/// <e_i|Delta rho|e_j> = c_i c_j^* sum_n [P_n(t+1) - P_n(t)] (u_i / u_j)^n
/// ```
///
/// with `c_i = <e_i|0>` and `u_i = e^{i theta lambda_i}`. `probs_t1` may be
/// longer than `probs_t`; missing entries count as zero.
pub fn delta_rho_spectral<T: Real>(
    model: &GateModel<T>,
    probs_t: &[f64],
    probs_t1: &[f64],
) -> Matrix<T> {
    let spec = model.spectrum();
    let coeffs = spec.coefficients(model.initial_state());
    let d = model.dim();
    let len = probs_t.len().max(probs_t1.len());
    let delta: Vec<f64> = (0..len)
        .map(|n| probs_t1.get(n).copied().unwrap_or(0.0) - probs_t.get(n).copied().unwrap_or(0.0))
        .collect();

    let mut in_eigenbasis = Matrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let w = model.theta() * (spec.eigenvalues[i] - spec.eigenvalues[j]);
            let sum: Complex<T> = delta
                .iter()
                .enumerate()
                .filter(|(_, &dp)| dp != 0.0)
                .map(|(n, &dp)| Complex::cis(T::from_usize_lossy(n) * w).scale(T::lit(dp)))
                .sum();
            in_eigenbasis[(i, j)] = coeffs[i] * coeffs[j].conj() * sum;
        }
    }
    let v = &spec.eigenvectors;
    &(v * &in_eigenbasis) * &v.adjoint()
}

/// The mixture at one instant: branch probabilities, branch states and the
/// assembled density matrix.
///
/// Mutated only through [`EnsembleState::step`].
#[derive(Clone, Debug)]
pub struct EnsembleState<T> {
    t: usize,
    probs: Vec<f64>,
    branches: Vec<StateVector<T>>,
    rho: Matrix<T>,
    gate: Matrix<T>,
    pruned_mass: f64,
}

impl<T: Real> EnsembleState<T> {
    /// The ensemble at `t = 0`: all weight on the reset state.
    pub fn new(model: &GateModel<T>) -> Self {
        let psi0 = model.initial_state().to_vec();
        Self {
            t: 0,
            probs: vec![1.0],
            rho: Matrix::projector(&psi0),
            branches: vec![psi0],
            gate: model.gate(),
            pruned_mass: 0.0,
        }
    }

    pub fn time(&self) -> usize {
        self.t
    }

    /// `P_n(t)` for `n = 0..len`; trailing negligible entries may have been
    /// pruned, so the length can be smaller than `t + 1`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn branches(&self) -> &[StateVector<T>] {
        &self.branches[..self.probs.len()]
    }

    pub fn rho(&self) -> &Matrix<T> {
        &self.rho
    }

    /// Total probability discarded by pruning so far.
    pub fn pruned_mass(&self) -> f64 {
        self.pruned_mass
    }

    /// Advances one time step.
    pub fn step(&mut self, schedule: &ResetSchedule) -> Result<()> {
        let mut next = step_probabilities(&self.probs, schedule)?;
        let mut dropped = 0.0;
        while next.len() > 1 && *next.last().unwrap() < PRUNE_THRESHOLD {
            dropped += next.pop().unwrap();
        }
        if dropped > 0.0 {
            let keep = 1.0 - dropped;
            next.iter_mut().for_each(|p| *p /= keep);
            self.pruned_mass += dropped;
            log::debug!("t={}: pruned {dropped:e} of trailing branch mass", self.t + 1);
        }
        while self.branches.len() < next.len() {
            let last = self.branches.last().expect("at least the reset state");
            let grown = self.gate.mul_vec(last);
            self.branches.push(grown);
        }
        self.probs = next;
        self.rho = build_density(&self.probs, &self.branches[..self.probs.len()])?;
        self.t += 1;
        Ok(())
    }
}

/// Named time series of one observable.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableTrace {
    pub name: String,
    pub values: Vec<f64>,
}

/// Output of [`evolve_until`]. Row `k` describes time `times[k]`;
/// `delta_norms[k] = ||rho(t) - rho(t-1)||_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionRecord {
    pub times: Vec<usize>,
    pub observable_traces: Vec<ObservableTrace>,
    pub delta_norms: Vec<f64>,
    pub converged: bool,
    pub steps_used: usize,
}

impl EvolutionRecord {
    pub fn trace(&self, name: &str) -> Option<&[f64]> {
        self.observable_traces
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.values.as_slice())
    }

    /// CSV with header `t,delta_norm,<observables...>`.
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        let mut header = vec!["t".to_string(), "delta_norm".to_string()];
        header.extend(self.observable_traces.iter().map(|t| t.name.clone()));
        write_row(w, &header)?;
        for (k, &t) in self.times.iter().enumerate() {
            let mut row = vec![t.to_string(), format_float(self.delta_norms[k])];
            row.extend(self.observable_traces.iter().map(|tr| format_float(tr.values[k])));
            write_row(w, &row)?;
        }
        Ok(())
    }
}

/// Steps the ensemble until `||rho(t) - rho(t-1)||_1 < eps` or `max_steps`
/// steps have been taken, recording the requested observables at every step.
///
/// Not converging is a normal outcome (`converged == false`), e.g. for
/// schedules whose survival probability tends to a positive constant.
pub fn evolve_until<T: Real>(
    model: &GateModel<T>,
    schedule: &ResetSchedule,
    eps: f64,
    max_steps: usize,
    observables: &[Observable],
) -> Result<EvolutionRecord> {
    evolve_until_with_state(model, schedule, eps, max_steps, observables).map(|(record, _)| record)
}

/// [`evolve_until`], also handing back the final ensemble.
pub fn evolve_until_with_state<T: Real>(
    model: &GateModel<T>,
    schedule: &ResetSchedule,
    eps: f64,
    max_steps: usize,
    observables: &[Observable],
) -> Result<(EvolutionRecord, EnsembleState<T>)> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be > 0")));
    }
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be >= 1".into()));
    }
    let mut state = EnsembleState::new(model);
    let mut record = EvolutionRecord {
        times: Vec::new(),
        observable_traces: observables
            .iter()
            .map(|o| ObservableTrace {
                name: o.name().to_string(),
                values: Vec::new(),
            })
            .collect(),
        delta_norms: Vec::new(),
        converged: false,
        steps_used: 0,
    };
    for _ in 0..max_steps {
        let previous = state.rho.clone();
        state.step(schedule)?;
        let delta = one_norm(&(&state.rho - &previous)).as_f64();
        record.times.push(state.t);
        record.delta_norms.push(delta);
        for (trace, obs) in record.observable_traces.iter_mut().zip(observables) {
            trace.values.push(obs.evaluate(&state.rho)?);
        }
        record.steps_used = state.t;
        if delta < eps {
            record.converged = true;
            break;
        }
    }
    Ok((record, state))
}
