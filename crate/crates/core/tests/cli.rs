use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hbac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbac"))
        .args(args)
        .output()
        .expect("run hbac")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn compare_report_values() {
    let out = hbac(&["compare", "--bath-polarization", "0.1"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["scenario"], "compare");
    assert_eq!(report["all_converged"], true);
    let e = &report["points"][0]["enhancement"];
    assert!((f(&e["eps_ppa"]) - 0.1).abs() < 1e-14);
    assert!((f(&e["eps_noe"]) - 0.19802).abs() < 1e-5);
    assert!((f(&e["excess"]) - 0.09802).abs() < 1e-5);
}

#[test]
fn solomon_report_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("solomon.toml");
    fs::write(
        &cfg,
        "scenario = \"solomon\"\n[solomon]\nrho1 = 1.0\nrho2 = 1.0\nsigma = 0.5\n\
         s1_eq = 1.0\ns2_eq = 1.0\nt_end = 30.0\ndt = 0.01\n",
    )
    .unwrap();
    let out = hbac(&["solomon", "--config", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s = &json(&out)["solomon"];
    assert_eq!(f(&s["steady_state"]), 1.5);
    assert!((f(&s["terminal_s1"]) - 1.5).abs() < 1e-6);
    assert!(f(&s["terminal_error"]) < 1e-6);
    assert_eq!(s["mode"], "saturated");
    assert_eq!(s["samples"], 3001);
}

#[test]
fn solomon_csv_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("free.toml");
    let csv_path = dir.path().join("traj.csv");
    fs::write(
        &cfg,
        "scenario = \"solomon\"\n[solomon]\nrho1 = 2.0\nrho2 = 1.0\nsigma = 0.3\n\
         s1_eq = 0.1\ns2_eq = 0.2\nt_end = 1.0\ndt = 0.05\nsaturated = false\ns1_0 = 0.0\n",
    )
    .unwrap();
    let out = hbac(&[
        "solomon",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,s1,s2"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    assert_eq!(rows[0], vec![0.0, 0.0, 0.2]);
    assert_eq!(rows[20][0], 1.0);
}

#[test]
fn zero_bath_ppa_is_all_zero() {
    let out = hbac(&["ppa", "--bath-polarization", "0"]);
    assert!(out.status.success());
    let run = &json(&out)["points"][0]["ppa"];
    assert_eq!(run["converged"], true);
    for eps in run["final_polarizations"].as_array().unwrap() {
        assert_eq!(f(eps), 0.0);
    }
}

#[test]
fn sweep_order_is_preserved() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(
        &cfg,
        "scenario = \"noe\"\nsweep = [0.3, 0.001, 0.1, 0.01]\n",
    )
    .unwrap();
    let out = hbac(&["noe", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let points = json(&out)["points"].as_array().unwrap().clone();
    let order: Vec<f64> = points.iter().map(|p| f(&p["bath_polarization"])).collect();
    assert_eq!(order, vec![0.3, 0.001, 0.1, 0.01]);
    assert!(points.iter().all(|p| p.get("ppa").is_none()));
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ppa.toml");
    fs::write(
        &cfg,
        "scenario = \"noe\"\nqubits = 2\nsweep = [0.2, 0.3]\nformat = \"csv\"\n",
    )
    .unwrap();
    let out = hbac(&[
        "ppa",
        "--config",
        cfg.to_str().unwrap(),
        "--qubits",
        "3",
        "--bath-polarization",
        "0.05",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["scenario"], "ppa");
    assert_eq!(report["qubits"], 3);
    let points = report["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert_eq!(f(&points[0]["bath_polarization"]), 0.05);
}

#[test]
fn compare_csv_table() {
    let out = hbac(&["compare", "--bath-polarization", "0.5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("bath_polarization,eps_ppa,eps_noe,ratio,excess,ppa_iterations,noe_iterations,converged")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!((row[2].parse::<f64>().unwrap() - 0.8).abs() < 1e-9);
    assert_eq!(row[7], "true");
    assert!(lines.next().is_none());
}

#[test]
fn non_convergence_exits_nonzero_with_full_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("capped.json");
    let out = hbac(&[
        "noe",
        "--bath-polarization",
        "0.1",
        "--max-iters",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["all_converged"], false);
    assert_eq!(report["points"][0]["noe"]["converged"], false);
    assert_eq!(report["points"][0]["noe"]["iterations"], 3);
}

#[test]
fn validation_and_parse_errors_exit_nonzero() {
    let out = hbac(&["ppa", "--bath-polarization", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bath_polarization"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "scenario = \"ppa\"\nbath_polarization = 0.1\ncolour = 1\n",
    )
    .unwrap();
    let out = hbac(&["ppa", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("colour") && err.contains("line 3"), "{err}");

    let out = hbac(&["ppa", "--config", "/nonexistent/hbac.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unwritable_output_fails() {
    let out = hbac(&[
        "ppa",
        "--bath-polarization",
        "0.1",
        "--out",
        Path::new("/nonexistent-dir/report.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_round_trip_exactly() {
    use hbac_core::config::parse_config;
    use hbac_core::runner::run_scenario;

    let cfg = parse_config("scenario = \"compare\"\nsweep = [0.001, 0.3]\nqubits = 3\n").unwrap();
    let outcome = run_scenario(&cfg).unwrap();
    let report: Value = serde_json::from_str(&outcome.to_json()).unwrap();
    for (point, result) in report["points"]
        .as_array()
        .unwrap()
        .iter()
        .zip(&outcome.points)
    {
        let ppa = result.ppa.as_ref().unwrap();
        let pops: Vec<f64> = point["ppa"]["final_populations"]
            .as_array()
            .unwrap()
            .iter()
            .map(f)
            .collect();
        assert_eq!(pops, ppa.final_state.populations());
        assert_eq!(
            f(&point["ppa"]["target_polarization"]),
            ppa.target_polarization()
        );
    }
}
