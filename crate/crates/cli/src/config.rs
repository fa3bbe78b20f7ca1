//! Run configuration: JSON file plus `--field value` overrides.

use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;

use qreset_core::models::basis_state;
use qreset_core::observables::Observable;
use qreset_core::{ComplexMatrix, GateModel, ResetSchedule};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sweep,
    Timeseries,
    Resonances,
    Weaklimit,
    Montecarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// `count` points from `min` to `max`, both ends included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    (0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect()
}

impl ThetaGrid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}

impl RateGrid {
    pub fn points(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.min, self.max, self.count),
            Spacing::Log => {
                let mut p: Vec<f64> = linspace(self.min.ln(), self.max.ln(), self.count)
                    .into_iter()
                    .map(f64::exp)
                    .collect();
                // keep the ends exact rather than exp(ln(x))
                p[0] = self.min;
                if self.count > 1 {
                    p[self.count - 1] = self.max;
                }
                p
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    /// `noninteracting`, `entangling`, or the path of a JSON matrix file.
    pub model: String,
    pub schedule: String,
    pub theta_grid: ThetaGrid,
    pub r_grid: RateGrid,
    pub eps: f64,
    pub max_steps: usize,
    pub observables: Vec<String>,
    pub output_path: String,
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
    /// Gate parameter for the single-theta modes.
    pub theta: f64,
    /// Monte Carlo trajectory length.
    pub horizon: usize,
    pub samples: u64,
    /// Also write the weak-reset limit at every resonance.
    pub emit_limits: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Sweep,
            model: "entangling".into(),
            schedule: "poisson:r=0.5".into(),
            theta_grid: ThetaGrid {
                min: 0.0,
                max: PI,
                count: 200,
            },
            r_grid: RateGrid {
                min: 1e-3,
                max: 1.0,
                count: 200,
                spacing: Spacing::Log,
            },
            eps: 1e-10,
            max_steps: 10_000,
            observables: ["zz_corr", "concurrence", "lqu", "magnetization"].map(String::from).to_vec(),
            output_path: "qreset_out".into(),
            seed: 0,
            workers: 0,
            theta: PI / 4.0,
            horizon: 3,
            samples: 1_000_000,
            emit_limits: false,
        }
    }
}

/// Command-line overrides; `None` keeps the config value.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub schedule: Option<String>,
    /// `min,max,count`
    #[arg(long = "theta_grid")]
    pub theta_grid: Option<String>,
    /// `min,max,count[,linear|log]`
    #[arg(long = "r_grid")]
    pub r_grid: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long = "max_steps")]
    pub max_steps: Option<usize>,
    /// Comma-separated names.
    #[arg(long)]
    pub observables: Option<String>,
    #[arg(long = "output_path")]
    pub output_path: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long = "emit_limits")]
    pub emit_limits: Option<bool>,
}

fn parse_fields(field: &str, text: &str, n_min: usize, n_max: usize) -> Result<Vec<String>, CliError> {
    let parts: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    if parts.len() < n_min || parts.len() > n_max {
        return Err(CliError::config(field, format!("expected {n_min}..={n_max} comma-separated values, got `{text}`")));
    }
    Ok(parts)
}

fn parse_num<T: FromStr>(field: &str, s: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::config(field, format!("cannot parse `{s}`")))
}

impl RunConfig {
    /// Reads a JSON config. Parse errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("config line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(v) = &o.model {
            self.model = v.clone();
        }
        if let Some(v) = &o.schedule {
            self.schedule = v.clone();
        }
        if let Some(v) = &o.theta_grid {
            let p = parse_fields("theta_grid", v, 3, 3)?;
            self.theta_grid = ThetaGrid {
                min: parse_num("theta_grid", &p[0])?,
                max: parse_num("theta_grid", &p[1])?,
                count: parse_num("theta_grid", &p[2])?,
            };
        }
        if let Some(v) = &o.r_grid {
            let p = parse_fields("r_grid", v, 3, 4)?;
            let spacing = match p.get(3).map(|s| s.as_str()) {
                None => self.r_grid.spacing,
                Some("linear") => Spacing::Linear,
                Some("log") => Spacing::Log,
                Some(other) => return Err(CliError::config("r_grid", format!("unknown spacing `{other}`"))),
            };
            self.r_grid = RateGrid {
                min: parse_num("r_grid", &p[0])?,
                max: parse_num("r_grid", &p[1])?,
                count: parse_num("r_grid", &p[2])?,
                spacing,
            };
        }
        if let Some(v) = o.eps {
            self.eps = v;
        }
        if let Some(v) = o.max_steps {
            self.max_steps = v;
        }
        if let Some(v) = &o.observables {
            self.observables = v.split(',').map(|s| s.trim().to_string()).collect();
        }
        if let Some(v) = &o.output_path {
            self.output_path = v.clone();
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.workers {
            self.workers = v;
        }
        if let Some(v) = o.theta {
            self.theta = v;
        }
        if let Some(v) = o.horizon {
            self.horizon = v;
        }
        if let Some(v) = o.samples {
            self.samples = v;
        }
        if let Some(v) = o.emit_limits {
            self.emit_limits = v;
        }
        Ok(())
    }

    /// Field checks shared by all modes.
    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.theta_grid;
        if g.count == 0 || !g.min.is_finite() || !g.max.is_finite() || g.min > g.max {
            return Err(CliError::config("theta_grid", "needs finite min <= max and count >= 1"));
        }
        let r = &self.r_grid;
        if r.count == 0 || !(r.min > 0.0 && r.min <= r.max && r.max <= 1.0) {
            return Err(CliError::config("r_grid", "needs 0 < min <= max <= 1 and count >= 1"));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(CliError::config("eps", "must be > 0"));
        }
        if self.max_steps == 0 {
            return Err(CliError::config("max_steps", "must be >= 1"));
        }
        if !self.theta.is_finite() {
            return Err(CliError::config("theta", "must be finite"));
        }
        if self.output_path.is_empty() {
            return Err(CliError::config("output_path", "must not be empty"));
        }
        self.parsed_observables()?;
        self.parsed_schedule()?;
        Ok(())
    }

    pub fn parsed_schedule(&self) -> Result<ResetSchedule, CliError> {
        self.schedule
            .parse()
            .map_err(|e| CliError::config("schedule", e))
    }

    pub fn parsed_observables(&self) -> Result<Vec<Observable>, CliError> {
        if self.observables.is_empty() {
            return Err(CliError::config("observables", "list is empty"));
        }
        self.observables
            .iter()
            .map(|s| s.parse().map_err(|e| CliError::config("observables", e)))
            .collect()
    }

    /// The gate model at `theta`, started from the first basis state.
    pub fn gate_model(&self, theta: f64) -> Result<GateModel, CliError> {
        match self.model.as_str() {
            "noninteracting" | "ni" => Ok(GateModel::noninteracting(theta)),
            "entangling" => Ok(GateModel::entangling(theta)),
            path => {
                let generator = read_matrix(Path::new(path))?;
                let dim = generator.dim();
                GateModel::new(generator, theta, basis_state(dim, 0)).map_err(|e| CliError::config("model", e))
            }
        }
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::config("model", format!("{}: {e}", path.display())))
}
