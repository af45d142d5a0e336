use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gse::cli::{read_table, validate_config};
use gse::model::Model;

fn gse_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gse-sim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with(dir: &Path, config: &str, mode: &str) -> Output {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    gse_sim(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--mode",
        mode,
    ])
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = r#"{"eta": 0.1, "n_max": 4, "grid": {"min": 0.8, "max": 1.2, "points": 801}}"#;

#[test]
fn spectrum_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_with(dir.path(), SMALL, "spectrum");
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let first = fs::read(dir.path().join("out/spectrum.csv")).unwrap();
    let b = run_with(dir.path(), SMALL, "spectrum");
    assert_eq!(b.status.code(), Some(0));
    let second = fs::read(dir.path().join("out/spectrum.csv")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn spectrum_csv_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_with(dir.path(), SMALL, "spectrum");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = read_table(&fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap()).unwrap();
    assert_eq!(table.columns, ["omega", "S"]);
    assert!(table.metadata.iter().any(|m| m.starts_with("mu = ") && m.ends_with("(omega_G)")));

    let cfg = validate_config(SMALL).unwrap();
    let model = Model::build(cfg.params, cfg.n_max, cfg.mu).unwrap();
    let spec = model.spectrum(&cfg.grid.frequencies()).unwrap();
    assert_eq!(table.rows.len(), spec.values.len());
    for (row, (w, s)) in table.rows.iter().zip(spec.omegas.iter().zip(&spec.values)) {
        assert!((row[0] - w).abs() <= 1e-12 * w.abs());
        assert!((row[1] - s).abs() <= 1e-12 * s.abs().max(1e-300));
    }
}

#[test]
fn dark_spectrum_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_with(dir.path(), r#"{"eta": 0.0, "mu": 0.0}"#, "spectrum");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = read_table(&fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 4001);
    assert!(table.rows.iter().all(|r| r[1].abs() < 1e-16));
}

#[test]
fn sweep_keeps_order_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{
        "eta": 0.1, "n_max": 4,
        "sweep": {"variable": "eta", "values": [0.08, 0.02, 0.05]},
        "methods": {"ratemodel": true},
        "outputs": {"sweep": "etas.csv"}
    }"#;
    let o = run_with(dir.path(), config, "sweep");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = read_table(&fs::read_to_string(dir.path().join("out/etas.csv")).unwrap()).unwrap();
    assert_eq!(
        table.columns,
        [
            "eta",
            "mu",
            "f_C",
            "f_plus",
            "f_minus",
            "f_C_analytic",
            "f_plus_analytic",
            "f_minus_analytic",
            "f_C_rate",
            "f_plus_rate",
            "f_minus_rate"
        ]
    );
    let etas: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    assert_eq!(etas, [0.08, 0.02, 0.05]);
    for r in &table.rows {
        // central line: master equation, closed form and rate model agree
        assert!((r[2] / r[5] - 1.0).abs() < 0.05);
        assert!((r[2] / r[8] - 1.0).abs() < 0.05);
    }
}

#[test]
fn mu_sweep_marks_uncovered_regimes() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"eta": 0.1, "n_max": 4, "sweep": {"variable": "mu", "values": [0.0, 1.0, 1.2]},
                     "methods": {"spectrum": false}}"#;
    let o = run_with(dir.path(), config, "sweep");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = read_table(&fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap()).unwrap();
    assert_eq!(table.columns, ["mu", "f_C_analytic", "f_plus_analytic", "f_minus_analytic"]);
    assert!(table.rows[0][1].is_finite());
    assert!(table.rows[1][1].is_nan());
    assert!(table.rows[2][1].is_finite());
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    for (config, needle) in [
        (r#"{"eta": 0.1, "gamma_cav": -7e-4}"#, "gamma_cav"),
        (r#"{"eta": 0.1, "bogus": 1}"#, "bogus"),
        (r#"{"eta": 0.1, "grid": {"min": 1.5, "max": 0.5, "points": 11}}"#, "grid.max"),
        (r#"{"eta": 0.1, "sweep": {"variable": "eta", "values": []}}"#, "sweep.values"),
        (r#"{"eta": 0.1, "mu": "omega_X"}"#, "mu"),
        ("{not json", "config"),
    ] {
        let o = run_with(dir.path(), config, "spectrum");
        assert_eq!(o.status.code(), Some(1), "{config}");
        assert!(stderr(&o).contains(needle), "{config}: {}", stderr(&o));
    }
    let o = run_with(dir.path(), r#"{"eta": 0.1}"#, "sweep");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("sweep"));

    let missing = dir.path().join("missing.json");
    let o = gse_sim(&["--config", missing.to_str().unwrap(), "--out", "x", "--mode", "spectrum"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn argument_errors() {
    assert_eq!(gse_sim(&["--help"]).status.code(), Some(0));
    assert_eq!(gse_sim(&["--config", "a.json", "--out", "o"]).status.code(), Some(1));
    assert_eq!(
        gse_sim(&["--config", "a.json", "--out", "o", "--mode", "movie"]).status.code(),
        Some(1)
    );
}

#[test]
fn unobservable_steady_state_exits_2() {
    // no dissipation at all: every dressed projector is stationary
    let dir = tempfile::tempdir().unwrap();
    let o = run_with(dir.path(), r#"{"eta": 0.1, "n_max": 3, "gamma": 0.0, "gamma_cav": 0.0}"#, "spectrum");
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(!dir.path().join("out/spectrum.csv").exists());
}
