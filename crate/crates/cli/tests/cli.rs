//! End-to-end checks of the command-line interface: schema validation and
//! exit codes, recipe integrity, sweeps, and reproducible CSV output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sonstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sonstat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("sonstat-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn recipes_lists_all_six() {
    let out = sonstat(&["recipes"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig2", "fig3", "fig4", "fig5", "fig7", "fig8"] {
        assert!(text.contains(name), "missing recipe {name}");
    }
}

#[test]
fn every_recipe_validates_and_runs_analytically() {
    for name in ["fig2", "fig3", "fig4", "fig5", "fig7", "fig8"] {
        let out = sonstat(&["analyze", "--recipe", name]);
        assert!(
            out.status.success(),
            "recipe {name} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn fig4_recipe_parameters() {
    let cfg: serde_json::Value =
        serde_json::from_str(include_str!("../assets/fig4.json")).unwrap();
    assert_eq!(cfg["region"]["r_min_m"], 25.0);
    assert_eq!(cfg["region"]["r_max_m"], 250.0);
    assert_eq!(cfg["pico"]["tx_power_dBm"], 30.0);
    assert_eq!(cfg["pico"]["density"], 1e-5);
    assert_eq!(cfg["channel"]["alpha"], 3.0);
    assert_eq!(cfg["channel"]["m"], 16.0);
    assert_eq!(cfg["macro"]["tx_power_dBm"], 43.0);
}

#[test]
fn missing_required_field_exits_2_and_names_it() {
    let config = r#"{
        "quantity": "summary",
        "scenario": { "kind": "ES4", "serving_pico_distance_m": 45.0 },
        "region": { "r_min_m": 25.0, "r_max_m": 250.0 },
        "channel": { "alpha": 3.0, "m": 16.0, "sigma_omega_dB": 8.0 },
        "macro": { "tx_power_dBm": 43.0 },
        "pico": { "tx_power_dBm": 30.0, "density": 1e-5 }
    }"#;
    let path = temp_path("missing-rho.json");
    std::fs::write(&path, config).unwrap();
    let out = sonstat(&["analyze", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("rho_th_dBm"), "stderr was: {stderr}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn unknown_schema_key_exits_2() {
    let config = r#"{
        "quantity": "summary",
        "scenario": { "kind": "ES1" },
        "region": { "r_min_m": 25.0, "r_max_m": 250.0, "radius": 1.0 },
        "channel": { "alpha": 3.0, "m": 16.0, "sigma_omega_dB": 8.0 },
        "macro": {},
        "pico": { "density": 1e-5 }
    }"#;
    let path = temp_path("unknown-key.json");
    std::fs::write(&path, config).unwrap();
    let out = sonstat(&["analyze", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("radius"), "stderr was: {stderr}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn near_singular_exponent_exits_3() {
    // alpha one ulp above 2 passes the channel validation but lands inside
    // the n*alpha = 2 singularity guard
    let config = r#"{
        "quantity": "summary",
        "scenario": { "kind": "ES1" },
        "region": { "r_min_m": 25.0, "r_max_m": 250.0 },
        "channel": { "alpha": 2.0000000000000004, "m": 16.0, "sigma_omega_dB": 8.0 },
        "macro": { "tx_power_dBm": 43.0 },
        "pico": { "tx_power_dBm": 30.0, "density": 1e-5 }
    }"#;
    let path = temp_path("singular.json");
    std::fs::write(&path, config).unwrap();
    let out = sonstat(&["analyze", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_file(&path).ok();
}

#[test]
fn unknown_sweep_field_exits_2() {
    let out = sonstat(&[
        "analyze",
        "--recipe",
        "fig7",
        "--sweep",
        "pico.flux=1:2:3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("pico.flux"), "stderr was: {stderr}");
}

#[test]
fn sweep_produces_rows_per_scenario_with_monotone_outage() {
    let path = temp_path("fig7-sweep.csv");
    let out = sonstat(&[
        "analyze",
        "--recipe",
        "fig7",
        "--sweep",
        "pico.density=1e-5:2e-4:12:log",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 5 * 12, "expected 12 rows per scenario");

    // outage grows with interferer density in the uncoordinated scenarios
    for label in ["ES1", "ES2", "ES3"] {
        let outages: Vec<f64> = rows
            .iter()
            .filter(|r| r.starts_with(&format!("{label},")))
            .map(|r| r.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        assert_eq!(outages.len(), 12);
        for w in outages.windows(2) {
            assert!(w[1] > w[0], "{label} outage not increasing: {w:?}");
        }
    }
}

#[test]
fn montecarlo_mode_omits_analytic_columns() {
    let path = temp_path("mc-only.csv");
    let out = sonstat(&[
        "analyze",
        "--recipe",
        "fig3",
        "--mode",
        "montecarlo",
        "--mc-samples",
        "20000",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(csv.starts_with("scenario,x_dBm,cdf_mc\n"));
}

/// Committed reference run: fig4, both pipelines, seed 42, 20k replicates.
/// Byte equality pins the whole analytic + sampling + formatting chain.
#[test]
fn fig4_matches_committed_reference() {
    let path = temp_path("fig4-golden.csv");
    let out = sonstat(&[
        "analyze",
        "--recipe",
        "fig4",
        "--mode",
        "both",
        "--seed",
        "42",
        "--mc-samples",
        "20000",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let produced = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let reference = include_str!("data/fig4_reference.csv");
    assert!(
        produced.lines().next().unwrap() == "scenario,x_dBm,ccdf_analytic,ccdf_mc",
        "unexpected header"
    );
    assert_eq!(produced, reference, "fig4 output drifted from the reference run");
}
