use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use wdl_cli::config::RunConfig;
use wdl_cli::output::read_scan;
use wdl_core::{eval_density, Space};

fn wdl(args: &[&str]) -> Output {
    wdl_env(args, &[])
}

fn wdl_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wdl"));
    cmd.args(args).env_remove("WDL_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn scan_matches_density() {
    let o = wdl(&["scan", "--grid", "-2:2:5", "--t", "0.5", "--sigma", "0.8"]);
    assert_eq!(code(&o), 0);
    let scan = read_scan(&stdout(&o)).unwrap();
    assert_eq!(scan.rows.len(), 5);
    let spec = scan.config.state_spec().unwrap();
    for (x, v) in scan.rows {
        assert_eq!(v.to_bits(), eval_density(&spec, Space::Position, x, 0.5).unwrap().to_bits());
    }
}

#[test]
fn several_times_write_suffixed_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cat.csv");
    let o = wdl(&[
        "scan", "--state", "cat", "--ensemble", "thermal", "--kT", "1", "--d", "4", "--t", "0", "--t", "1", "--t",
        "2", "--out", p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for (i, t) in [0.0, 1.0, 2.0].iter().enumerate() {
        let text = std::fs::read_to_string(dir.path().join(format!("cat_t{i}.csv"))).unwrap();
        assert_eq!(read_scan(&text).unwrap().t, *t);
    }
    assert!(!out.exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"sigma\": ").unwrap();
    let o = wdl(&["scan", "--config", p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty() && o.stdout.is_empty());

    std::fs::write(&bad, "{\"sigma\": 1, \"temperature\": 3}").unwrap();
    assert_eq!(code(&wdl(&["scan", "--config", p(&bad)])), 2);
    assert_eq!(code(&wdl(&["scan", "--sigma", "-1"])), 2);
    assert_eq!(code(&wdl(&["scan", "--grid", "1:0:5"])), 2);
    assert_eq!(code(&wdl(&["scan", "--config", p(&dir.path().join("missing.json"))])), 3);
    assert_eq!(code(&wdl(&["scan", "--out", p(&dir.path().join("no/such/dir.csv"))])), 3);
    assert_eq!(code(&wdl(&["attenuation"])), 2, "attenuation needs a cat state");
    assert_eq!(code(&wdl(&["sweep"])), 2);
    assert_eq!(code(&wdl(&["sweep", "--sweep", "d="])), 2);
    assert_eq!(code(&wdl(&["sweep", "--sweep", "d=5", "--sweep", "kT=1,2"])), 2);
    assert_eq!(code(&wdl_env(&["scan"], &[("WDL_THREADS", "many")])), 2);
    assert_eq!(code(&wdl(&["frobnicate"])), 2);
    assert_eq!(code(&wdl(&["--help"])), 0);
}

#[test]
fn wigner_center_and_metadata() {
    let o = wdl(&["wigner", "--grid", "-1:1:3", "--pgrid", "-1:1:3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 3));
    assert!((rows[1][1] - 1.0 / PI).abs() < 1e-15);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cat.csv");
    let o = wdl(&[
        "wigner", "--state", "cat", "--d", "10", "--grid", "-3:3:31", "--pgrid", "-1:1:21", "--out", p(&out), "--pgm",
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let min: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# min: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(min < 0.0);
    let image = std::fs::read(dir.path().join("cat.pgm")).unwrap();
    let head = String::from_utf8_lossy(&image[..80]);
    assert!(head.starts_with("P5\n"));
    assert!(head.contains("\n21 31\n255\n"), "{head}");
    assert!(image.len() > 31 * 21);
    let body = &image[image.len() - 31 * 21..];
    assert_eq!(body.iter().min(), Some(&0));
    assert_eq!(body.iter().max(), Some(&255));
}

#[test]
fn graymap_needs_an_output_file() {
    assert_eq!(code(&wdl(&["wigner", "--pgm"])), 2);
}

fn attenuation_json(args: &[&str]) -> Value {
    let mut all = vec!["attenuation", "--state", "cat", "--ensemble", "thermal"];
    all.extend_from_slice(args);
    let o = wdl(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn attenuation_reports() {
    let r = attenuation_json(&["--kT", "100", "--d", "10"]);
    let rel = r["relative_difference"].as_f64().unwrap();
    assert!(rel.abs() <= 0.03, "{rel}");
    assert!((r["tau_predicted"].as_f64().unwrap() - 8f64.sqrt() / 100.0).abs() < 1e-15);
    assert_eq!(r["classification"], "decays");

    let r = attenuation_json(&["--kT", "1", "--d", "10", "--space", "momentum"]);
    assert_eq!(r["classification"], "time_independent");

    let r = attenuation_json(&["--kT", "1", "--d", "2", "--space", "phase", "--t", "0", "--t", "3"]);
    for a in r["a_values"].as_array().unwrap() {
        assert!((a.as_f64().unwrap() - 0.1f64.exp()).abs() < 1e-14);
    }
}

fn sweep_taus(args: &[&str]) -> Vec<f64> {
    let mut all = vec!["sweep"];
    all.extend_from_slice(args);
    let o = wdl(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn sweep_scaling_laws() {
    let tau = sweep_taus(&["--kT", "100", "--sweep", "d=5,10,20"]);
    assert!((tau[0] / tau[2] / 4.0 - 1.0).abs() <= 0.03);
    assert!((tau[1] / tau[2] / 2.0 - 1.0).abs() <= 0.03);

    let tau = sweep_taus(&["--d", "10", "--sweep", "kT=25,100"]);
    assert!((tau[1] / tau[0] - 0.5).abs() / 0.5 <= 0.03);
}

#[test]
fn outputs_are_deterministic_across_threads() {
    let args = ["wigner", "--state", "cat", "--ensemble", "thermal", "--kT", "2", "--d", "6", "--t", "1.5"];
    let one = wdl_env(&args, &[("WDL_THREADS", "1")]);
    let three = wdl_env(&args, &[("WDL_THREADS", "3")]);
    let again = wdl_env(&args, &[("WDL_THREADS", "3")]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(three.stdout, again.stdout);

    let scan = ["scan", "--state", "cat", "--d", "3", "--space", "momentum"];
    assert_eq!(wdl_env(&scan, &[("WDL_THREADS", "1")]).stdout, wdl_env(&scan, &[("WDL_THREADS", "4")]).stdout);
}

#[test]
fn header_round_trips_and_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.json");
    std::fs::write(&file, r#"{"sigma": 2.0, "kT": 5.0, "state": "cat", "d": 3.0, "ensemble": "thermal"}"#).unwrap();
    let o = wdl(&["scan", "--config", p(&file), "--d", "7", "--t", "0.3", "--grid", "-9:9:11"]);
    assert_eq!(code(&o), 0);
    let scan = read_scan(&stdout(&o)).unwrap();
    let expected = RunConfig {
        sigma: 2.0,
        kt: 5.0,
        d: 7.0,
        state: wdl_core::StateKind::Cat,
        ensemble: wdl_core::Ensemble::Thermal,
        times: vec![0.3],
        grid: Some("-9:9:11".parse().unwrap()),
        ..RunConfig::default()
    };
    assert_eq!(scan.config, expected);

    // the echoed config reproduces the output byte for byte
    std::fs::write(&file, scan.config.canonical_json()).unwrap();
    let replay = wdl(&["scan", "--config", p(&file)]);
    assert_eq!(replay.stdout, o.stdout);
}

#[test]
fn verify_with_small_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("verify.json");
    std::fs::write(
        &file,
        r#"{"certification": {"kT_values": [1.0], "separations": [2.0], "times": [1.0], "line_points": 11, "phase_points": 5}}"#,
    )
    .unwrap();
    let o = wdl(&["verify", "--config", p(&file)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["report"]["passed"], true);
    assert_eq!(r["report"]["quadrature"]["transform_nodes"], 1023);
    assert_eq!(r["report"]["branches"].as_array().unwrap().len(), 12);

    let o = wdl(&["verify", "--config", p(&file), "--inject-fault", "printed-thermal-momentum"]);
    assert_eq!(code(&o), 4);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let check = r["report"]["errata"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "thermal_momentum_fringe")
        .unwrap();
    assert_eq!(check["passed"], false);
}
