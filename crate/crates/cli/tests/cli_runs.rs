use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qreset_core::observables::analytic_zz_correlation;
use qreset_core::ComplexMatrix;

fn qreset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qreset")).args(args).output().unwrap()
}

fn out_base(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn sweep_matches_analytic_correlator() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "ni");
    let o = qreset(&[
        "sweep", "--model", "noninteracting", "--theta_grid", "0.1,3.0,6", "--r_grid", "0.05,0.95,5,linear",
        "--output_path", &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(format!("{out}.csv"));
    assert!(text.starts_with("theta,r,zz_corr,concurrence,lqu,magnetization\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 30);
    for row in rows {
        assert!((row[2] - analytic_zz_correlation(row[1], row[0]).unwrap()).abs() < 1e-10);
    }
    let meta: serde_json::Value = serde_json::from_str(&read(format!("{out}.meta.json"))).unwrap();
    assert_eq!(meta["config"]["model"], "noninteracting");
    assert!(meta["version"].is_string());
}

#[test]
fn trivial_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "one");
    let o = qreset(&["sweep", "--theta_grid", "0.7,0.7,1", "--r_grid", "1,1,1", "--output_path", &out]);
    assert!(o.status.success());
    let rows = csv_rows(&read(format!("{out}.csv")));
    assert_eq!(rows, vec![vec![0.7, 1.0, 0.0, 0.0, 0.0, 2.0]]);
}

#[test]
fn entangling_row_at_half_pi() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "half");
    let theta = std::f64::consts::FRAC_PI_2.to_string();
    let grid = format!("{theta},{theta},1");
    let o = qreset(&["sweep", "--theta_grid", &grid, "--r_grid", "1e-4,1e-3,2", "--output_path", &out]);
    assert!(o.status.success());
    for row in csv_rows(&read(format!("{out}.csv"))) {
        assert!(row[2].abs() < 1e-3, "C = {}", row[2]);
        assert_eq!(row[3], 0.0);
    }
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = out_base(dir.path(), "a");
    let b = out_base(dir.path(), "b");
    let cfg = write_config(
        dir.path(),
        r#"{"theta_grid": {"min": 0.0, "max": 3.0, "count": 12}, "r_grid": {"min": 0.01, "max": 1.0, "count": 9}}"#,
    );
    let cfg = cfg.to_str().unwrap();
    assert!(qreset(&["sweep", "--config", cfg, "--workers", "1", "--output_path", &a]).status.success());
    assert!(qreset(&["sweep", "--config", cfg, "--workers", "8", "--output_path", &b]).status.success());
    assert_eq!(read(format!("{a}.csv")), read(format!("{b}.csv")));
}

#[test]
fn timeseries_reports_convergence_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    let yes = out_base(dir.path(), "yes");
    let no = out_base(dir.path(), "no");
    let base = ["timeseries", "--model", "noninteracting", "--observables", "magnetization"];
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--schedule", "powerlaw:gamma=0.2,alpha=0.2", "--output_path", &yes]);
    assert!(qreset(&args).status.success());
    let meta: serde_json::Value = serde_json::from_str(&read(format!("{yes}.meta.json"))).unwrap();
    assert_eq!(meta["run"]["converged"], true);
    assert!(meta["run"]["final_delta_norm"].as_f64().unwrap() < 1e-10);

    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--schedule", "powerlaw:gamma=0.2,alpha=2", "--max_steps", "2000", "--output_path", &no]);
    let o = qreset(&args);
    assert_eq!(o.status.code(), Some(0));
    let meta: serde_json::Value = serde_json::from_str(&read(format!("{no}.meta.json"))).unwrap();
    assert_eq!(meta["run"]["converged"], false);
    let text = read(format!("{no}.csv"));
    assert!(text.starts_with("t,delta_norm,magnetization\n"));
    assert_eq!(text.lines().count(), 2001);
}

#[test]
fn timeseries_poisson_plateau() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "p");
    let o = qreset(&[
        "timeseries", "--model", "noninteracting", "--schedule", "poisson:r=0.5", "--theta", "0.9",
        "--observables", "magnetization", "--output_path", &out,
    ]);
    assert!(o.status.success());
    let last = csv_rows(&read(format!("{out}.csv"))).pop().unwrap();
    let f = qreset_core::observables::analytic_f(0.5, 1.8).unwrap();
    assert!((last[2] - 2.0 * f).abs() < 1e-9);
}

#[test]
fn resonance_reports() {
    let dir = tempfile::tempdir().unwrap();
    let ent = out_base(dir.path(), "ent");
    assert!(qreset(&["resonances", "--emit_limits", "true", "--output_path", &ent]).status.success());
    let report: serde_json::Value = serde_json::from_str(&read(format!("{ent}.json"))).unwrap();
    assert_eq!(report["resonances"].as_array().unwrap().len(), 9);
    assert_eq!(report["degenerate_pairs"].as_array().unwrap().len(), 0);
    let limits: serde_json::Value = serde_json::from_str(&read(format!("{ent}.limits.json"))).unwrap();
    assert_eq!(limits.as_array().unwrap().len(), 9);

    let ni = out_base(dir.path(), "ni");
    assert!(qreset(&["resonances", "--model", "noninteracting", "--output_path", &ni]).status.success());
    let report: serde_json::Value = serde_json::from_str(&read(format!("{ni}.json"))).unwrap();
    assert_eq!(report["degenerate_pairs"], serde_json::json!([[1, 2]]));
    assert_eq!(report["resonances"][0]["pairs"], serde_json::json!([[3, 0, 1]]));
    assert_eq!(read(format!("{ni}.csv")).lines().count(), 2);
}

#[test]
fn identity_generator_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("id.json");
    std::fs::write(&m, serde_json::to_string(&ComplexMatrix::identity(4)).unwrap()).unwrap();
    let out = out_base(dir.path(), "id");
    let o = qreset(&["resonances", "--model", m.to_str().unwrap(), "--output_path", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(format!("{out}.json"))).unwrap();
    assert_eq!(report["degenerate_pairs"].as_array().unwrap().len(), 6);
    assert!(report["resonances"].as_array().unwrap().is_empty());
}

#[test]
fn weak_limit_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "w");
    assert!(qreset(&["weaklimit", "--model", "noninteracting", "--theta", "1.0", "--output_path", &out]).status.success());
    let rho: ComplexMatrix = serde_json::from_str(&read(format!("{out}.json"))).unwrap();
    assert!((rho[(0, 3)].re + 0.125).abs() < 1e-12);
    let row = &csv_rows(&read(format!("{out}.csv")))[0];
    assert!((row[1] - 0.5).abs() < 1e-12);
}

#[test]
fn montecarlo_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "mc");
    let o = qreset(&["montecarlo", "--schedule", "poisson:r=0.5", "--horizon", "3", "--samples", "1000000", "--seed", "3", "--output_path", &out]);
    assert!(o.status.success());
    let text = read(format!("{out}.csv"));
    assert!(text.starts_with("n,empirical_p,exact_p,abs_error\n"));
    let tv: f64 = text.lines().last().unwrap().strip_prefix("# total_variation=").unwrap().parse().unwrap();
    assert!(tv < 0.005);
    let again = out_base(dir.path(), "mc2");
    let o = qreset(&["montecarlo", "--schedule", "poisson:r=0.5", "--horizon", "3", "--samples", "1000000", "--seed", "3", "--workers", "1", "--output_path", &again]);
    assert!(o.status.success());
    assert_eq!(text, read(format!("{again}.csv")));
}

#[test]
fn montecarlo_deterministic_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "det");
    let o = qreset(&["montecarlo", "--schedule", "deterministic:l=2", "--horizon", "7", "--samples", "1000", "--output_path", &out]);
    assert!(o.status.success());
    for row in csv_rows(&read(format!("{out}.csv"))) {
        assert_eq!(row[1], row[2]);
        if row[0] > 2.0 {
            assert_eq!(row[1], 0.0);
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_base(dir.path(), "x");
    assert_eq!(qreset(&["montecarlo", "--samples", "0", "--output_path", &out]).status.code(), Some(2));
    assert_eq!(qreset(&["sweep", "--eps", "-1", "--output_path", &out]).status.code(), Some(2));
    assert_eq!(qreset(&["nonsense"]).status.code(), Some(2));
    let bad = write_config(dir.path(), "{\n \"eps\": 1e-9,\n \"colour\": 3\n}");
    let o = qreset(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let missing = dir.path().join("nope").join("out");
    let o = qreset(&["weaklimit", "--output_path", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(qreset(&["sweep", "--config", "/definitely/not/here.json"]).status.code(), Some(3));
}
