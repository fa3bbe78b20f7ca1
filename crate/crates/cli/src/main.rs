use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qreset_cli::{run, CliError, Mode, Overrides, RunConfig};

/// Stochastic-reset quantum dynamics: sweeps, time series, resonances,
/// weak-reset limits and Monte Carlo checks.
#[derive(Parser, Debug)]
#[command(name = "qreset", version)]
struct Cli {
    mode: Mode,
    /// JSON run configuration; fields not given keep their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    cfg.mode = cli.mode;
    cfg.apply(&cli.overrides)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match load(&cli).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qreset: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
