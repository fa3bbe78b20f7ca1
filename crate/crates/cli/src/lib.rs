//! Batch driver behind the `qreset` binary.
//!
//! Every run writes `<output_path>.csv` with the data and
//! `<output_path>.meta.json` with the config echo, version, timestamp and
//! run flags. The CSV body depends only on the config, never on timing or
//! thread count.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use qreset_core::ensemble::{evolve_until, EvolutionRecord};
use qreset_core::linalg::one_norm;
use qreset_core::montecarlo::{
    comparison_rows, empirical_density, empirical_distribution, exact_distribution, total_variation,
    write_histogram_csv, HistogramRow,
};
use qreset_core::observables::Observable;
use qreset_core::poisson::{resonance_scan, steady_state_solve, weak_reset_limit, ResonanceReport, DEFAULT_RES_TOL};
use qreset_core::table::{format_float, write_row};
use qreset_core::{ComplexMatrix, ResetSchedule};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub mod config;

pub use config::{Mode, Overrides, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn config(field: &str, msg: impl std::fmt::Display) -> Self {
        Self::Config(format!("field `{field}`: {msg}"))
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for config problems, 3 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Io { .. } => 3,
            Self::Numerical(_) => 1,
        }
    }
}

impl From<qreset_core::Error> for CliError {
    fn from(e: qreset_core::Error) -> Self {
        Self::Numerical(e.to_string())
    }
}

fn output_file(cfg: &RunConfig, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{suffix}", cfg.output_path))
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(f);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")
    })
}

fn write_meta(cfg: &RunConfig, extra: Value) -> Result<(), CliError> {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": timestamp,
        "config": cfg,
        "run": extra,
    });
    write_json(&output_file(cfg, ".meta.json"), &meta)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::config("workers", e))
}

fn check_density(rho: &ComplexMatrix, what: impl FnOnce() -> String) -> Result<(), CliError> {
    if rho.is_density(1e-9) {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{} is not a valid density matrix", what())))
    }
}

fn two_qubit_only(dim: usize) -> Result<(), CliError> {
    if dim == 4 {
        Ok(())
    } else {
        Err(CliError::config("model", format!("observables need a two-qubit (4x4) generator, got {dim}x{dim}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub r: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub observables: Vec<Observable>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        let mut header = vec!["theta".to_string(), "r".to_string()];
        header.extend(self.observables.iter().map(|o| o.name().to_string()));
        write_row(w, &header)?;
        for row in &self.rows {
            let mut fields = vec![format_float(row.theta), format_float(row.r)];
            fields.extend(row.values.iter().map(|&v| format_float(v)));
            write_row(w, &fields)?;
        }
        Ok(())
    }
}

/// Poisson steady-state correlations on the `(theta, r)` grid, theta outer.
pub fn sweep(cfg: &RunConfig) -> Result<SweepResult, CliError> {
    cfg.validate()?;
    if !matches!(cfg.parsed_schedule()?, ResetSchedule::Poisson { .. }) {
        return Err(CliError::config("schedule", "sweep needs a Poisson schedule; rates come from r_grid"));
    }
    let observables = cfg.parsed_observables()?;
    let base = cfg.gate_model(0.0)?;
    two_qubit_only(base.dim())?;
    let thetas = cfg.theta_grid.points();
    let rates = cfg.r_grid.points();
    let points: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| rates.iter().map(move |&r| (t, r))).collect();
    let rows = pool(cfg.workers)?.install(|| {
        points
            .par_iter()
            .map(|&(theta, r)| -> Result<SweepRow, CliError> {
                let rho = steady_state_solve(&base.with_theta(theta), r)?;
                check_density(&rho, || format!("steady state at theta={theta}, r={r}"))?;
                let values = observables.iter().map(|o| o.evaluate(&rho)).collect::<Result<Vec<_>, _>>()?;
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Numerical(format!("non-finite observable at theta={theta}, r={r}")));
                }
                Ok(SweepRow { theta, r, values })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SweepResult { observables, rows })
}

pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult, CliError> {
    let result = sweep(cfg)?;
    write_file(&output_file(cfg, ".csv"), |w| result.write_csv(w))?;
    write_meta(
        cfg,
        json!({ "rows": result.rows.len(), "theta_count": cfg.theta_grid.count, "r_count": cfg.r_grid.count }),
    )?;
    log::info!("sweep: {} grid points", result.rows.len());
    Ok(result)
}

/// Evolution at `cfg.theta` under `cfg.schedule`. Not converging is a
/// successful run; the flag goes to the metadata.
pub fn run_timeseries(cfg: &RunConfig) -> Result<EvolutionRecord, CliError> {
    cfg.validate()?;
    let schedule = cfg.parsed_schedule()?;
    let observables = cfg.parsed_observables()?;
    let model = cfg.gate_model(cfg.theta)?;
    two_qubit_only(model.dim())?;
    let record = evolve_until(&model, &schedule, cfg.eps, cfg.max_steps, &observables)?;
    write_file(&output_file(cfg, ".csv"), |w| record.write_csv(w))?;
    write_meta(
        cfg,
        json!({
            "converged": record.converged,
            "steps_used": record.steps_used,
            "final_delta_norm": record.delta_norms.last(),
        }),
    )?;
    log::info!("timeseries: converged={} after {} steps", record.converged, record.steps_used);
    Ok(record)
}

#[derive(Serialize)]
struct LimitAt {
    theta: f64,
    rho: ComplexMatrix,
}

/// Resonances of the generator over `[theta_grid.min, theta_grid.max)`.
///
/// The report goes to `<output_path>.json`, a flat `theta,i,j,k` table to the
/// CSV and, with `emit_limits`, the weak-reset state at each resonance to
/// `<output_path>.limits.json`.
pub fn run_resonances(cfg: &RunConfig) -> Result<ResonanceReport, CliError> {
    cfg.validate()?;
    let model = cfg.gate_model(0.0)?;
    let report = resonance_scan(model.generator(), (cfg.theta_grid.min, cfg.theta_grid.max), DEFAULT_RES_TOL)?;
    write_json(&output_file(cfg, ".json"), &report)?;
    write_file(&output_file(cfg, ".csv"), |w| {
        write_row(w, &["theta", "i", "j", "k"].map(String::from))?;
        for res in &report.resonances {
            for &(i, j, k) in &res.pairs {
                write_row(w, &[format_float(res.theta), i.to_string(), j.to_string(), k.to_string()])?;
            }
        }
        Ok(())
    })?;
    if cfg.emit_limits {
        let limits: Vec<LimitAt> = report
            .resonances
            .iter()
            .map(|res| LimitAt {
                theta: res.theta,
                rho: weak_reset_limit(&model.with_theta(res.theta), DEFAULT_RES_TOL),
            })
            .collect();
        write_json(&output_file(cfg, ".limits.json"), &limits)?;
    }
    write_meta(
        cfg,
        json!({
            "resonances": report.resonances.len(),
            "degenerate_pairs": report.degenerate_pairs.len(),
        }),
    )?;
    Ok(report)
}

/// Weak-reset limit at `cfg.theta`: matrix to `<output_path>.json`,
/// observables to the CSV.
pub fn run_weaklimit(cfg: &RunConfig) -> Result<ComplexMatrix, CliError> {
    cfg.validate()?;
    let observables = cfg.parsed_observables()?;
    let model = cfg.gate_model(cfg.theta)?;
    two_qubit_only(model.dim())?;
    let rho = weak_reset_limit(&model, DEFAULT_RES_TOL);
    check_density(&rho, || format!("weak-reset limit at theta={}", cfg.theta))?;
    let values = observables.iter().map(|o| o.evaluate(&rho)).collect::<Result<Vec<_>, _>>()?;
    write_json(&output_file(cfg, ".json"), &rho)?;
    write_file(&output_file(cfg, ".csv"), |w| {
        let mut header = vec!["theta".to_string()];
        header.extend(observables.iter().map(|o| o.name().to_string()));
        write_row(w, &header)?;
        let mut row = vec![format_float(cfg.theta)];
        row.extend(values.iter().map(|&v| format_float(v)));
        write_row(w, &row)
    })?;
    write_meta(cfg, json!({}))?;
    Ok(rho)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloResult {
    pub rows: Vec<HistogramRow>,
    pub total_variation: f64,
    /// 1-norm distance of the sampled density matrix from the exact one.
    pub density_distance: f64,
}

/// Sampled against exact `P_n(horizon)`. The CSV ends with a
/// `# total_variation=<value>` line.
pub fn run_montecarlo(cfg: &RunConfig) -> Result<MonteCarloResult, CliError> {
    cfg.validate()?;
    if cfg.samples == 0 {
        return Err(CliError::config("samples", "must be >= 1"));
    }
    let schedule = cfg.parsed_schedule()?;
    let model = cfg.gate_model(cfg.theta)?;
    let exact = exact_distribution(&schedule, cfg.horizon).map_err(|e| CliError::config("schedule", e))?;
    let empirical = pool(cfg.workers)?
        .install(|| empirical_distribution(&schedule, cfg.horizon, cfg.samples, cfg.seed))?;
    let tv = total_variation(&empirical, &exact);
    let density_distance = one_norm(&(&empirical_density(&model, &empirical)? - &empirical_density(&model, &exact)?));
    let rows = comparison_rows(&empirical, &exact);
    write_file(&output_file(cfg, ".csv"), |w| {
        write_histogram_csv(w, &rows)?;
        writeln!(w, "# total_variation={}", format_float(tv))
    })?;
    write_meta(cfg, json!({ "total_variation": tv, "density_one_norm": density_distance }))?;
    log::info!("montecarlo: TV distance {tv:e}");
    Ok(MonteCarloResult {
        rows,
        total_variation: tv,
        density_distance,
    })
}

/// Dispatches on `cfg.mode`.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.mode {
        Mode::Sweep => run_sweep(cfg).map(drop),
        Mode::Timeseries => run_timeseries(cfg).map(drop),
        Mode::Resonances => run_resonances(cfg).map(drop),
        Mode::Weaklimit => run_weaklimit(cfg).map(drop),
        Mode::Montecarlo => run_montecarlo(cfg).map(drop),
    }
}
