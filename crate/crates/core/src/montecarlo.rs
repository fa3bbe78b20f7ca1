//! Single-trajectory sampling of the reset process.
//!
//! A trajectory only needs its reset times: the quantum state at the end is
//! `U^n |0>` with `n` the number of gates since the last reset.
//!
//! Sample `i` draws from a ChaCha8 stream keyed by `(seed, i)`, so results do
//! not depend on how samples are split across threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ensemble::{build_density, step_probabilities};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::models::GateModel;
use crate::scalar::Real;
use crate::schedules::ResetSchedule;
use crate::table::{format_float, write_row};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    /// Steps at which a reset happened, strictly increasing.
    pub reset_times: Vec<usize>,
    /// Gates applied since the last reset at the horizon.
    pub final_n: usize,
    pub seed: u64,
    pub stream: u64,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run(s: &ResetSchedule, horizon: usize, rng: &mut ChaCha8Rng, mut on_reset: impl FnMut(usize)) -> Result<usize> {
    let mut n = 0;
    for t in 1..=horizon {
        let r = s.prob_at(n)?;
        if rng.gen::<f64>() < r {
            n = 0;
            on_reset(t);
        } else {
            n += 1;
        }
    }
    Ok(n)
}

/// One realization up to `horizon`, drawn from stream 0 of `seed`.
pub fn sample_trajectory(s: &ResetSchedule, horizon: usize, seed: u64) -> Result<Trajectory> {
    sample_trajectory_stream(s, horizon, seed, 0)
}

/// One realization from an explicit stream of `seed`.
pub fn sample_trajectory_stream(s: &ResetSchedule, horizon: usize, seed: u64, stream: u64) -> Result<Trajectory> {
    let mut rng = rng_for(seed, stream);
    let mut reset_times = Vec::new();
    let final_n = run(s, horizon, &mut rng, |t| reset_times.push(t))?;
    Ok(Trajectory {
        reset_times,
        final_n,
        seed,
        stream,
    })
}

const CHUNK: u64 = 4096;

/// Normalized histogram of `final_n` over `samples` trajectories; entry `n`
/// estimates `P_n(horizon)`.
pub fn empirical_distribution(s: &ResetSchedule, horizon: usize, samples: u64, seed: u64) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let mut hist = vec![0u64; horizon + 1];
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let n = run(s, horizon, &mut rng_for(seed, i), |_| {})?;
                hist[n] += 1;
            }
            Ok(hist)
        })
        .try_reduce(
            || vec![0u64; horizon + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(counts.into_iter().map(|c| c as f64 / samples as f64).collect())
}

/// Exact `P_n(horizon)` for `n = 0..=horizon` from the probability recursion.
pub fn exact_distribution(s: &ResetSchedule, horizon: usize) -> Result<Vec<f64>> {
    let mut p = vec![1.0];
    for _ in 0..horizon {
        p = step_probabilities(&p, s)?;
    }
    Ok(p)
}

/// `(1/2) sum |p_n - q_n|`, missing entries counting as zero.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], n: usize| v.get(n).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|n| (at(p, n) - at(q, n)).abs()).sum::<f64>()
}

/// `sum_n p_n |n><n|` for sampled weights.
pub fn empirical_density<T: Real>(model: &GateModel<T>, probs: &[f64]) -> Result<Matrix<T>> {
    let branches: Vec<_> = (0..probs.len()).map(|n| model.branch(n)).collect();
    build_density(probs, &branches)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistogramRow {
    pub n: usize,
    pub empirical_p: f64,
    pub exact_p: f64,
    pub abs_error: f64,
}

pub fn comparison_rows(empirical: &[f64], exact: &[f64]) -> Vec<HistogramRow> {
    let len = empirical.len().max(exact.len());
    (0..len)
        .map(|n| {
            let e = empirical.get(n).copied().unwrap_or(0.0);
            let x = exact.get(n).copied().unwrap_or(0.0);
            HistogramRow {
                n,
                empirical_p: e,
                exact_p: x,
                abs_error: (e - x).abs(),
            }
        })
        .collect()
}

/// CSV with header `n,empirical_p,exact_p,abs_error`.
pub fn write_histogram_csv<W: Write + ?Sized>(w: &mut W, rows: &[HistogramRow]) -> std::io::Result<()> {
    write_row(w, &["n", "empirical_p", "exact_p", "abs_error"].map(String::from))?;
    for r in rows {
        write_row(
            w,
            &[
                r.n.to_string(),
                format_float(r.empirical_p),
                format_float(r.exact_p),
                format_float(r.abs_error),
            ],
        )?;
    }
    Ok(())
}
