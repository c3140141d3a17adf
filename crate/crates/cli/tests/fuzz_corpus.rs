//! Replays the checked-in fuzz seeds through the same invariants as the
//! fuzz targets, so they run on stable with every `cargo test`.

use std::path::PathBuf;

use wdl_cli::config::{GridSpec, RunConfig, SweepSpec};
use wdl_cli::output::read_scan;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, String::from_utf8_lossy(&std::fs::read(&path).unwrap()).into_owned())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn grid_spec_seeds() {
    let mut accepted = 0;
    for (_, text) in seeds("grid_spec") {
        if let Ok(spec) = text.parse::<GridSpec>() {
            let grid = spec.to_grid().unwrap();
            assert!(grid.count >= 2 && grid.min < grid.max);
            assert_eq!(spec.to_string().parse::<GridSpec>().unwrap(), spec);
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn sweep_spec_seeds() {
    let mut accepted = 0;
    for (_, text) in seeds("sweep_spec") {
        if let Ok(spec) = text.parse::<SweepSpec>() {
            assert!(!spec.values.is_empty() && spec.values.iter().all(|v| v.is_finite()));
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn config_json_seeds() {
    let mut accepted = 0;
    for (_, text) in seeds("config_json") {
        if let Ok(config) = RunConfig::from_json(&text) {
            let json = config.canonical_json();
            assert_eq!(RunConfig::from_json(&json).unwrap().canonical_json(), json);
            let _ = config.state_spec();
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn scan_csv_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("scan_csv") {
        match read_scan(&text) {
            Ok(scan) => {
                assert_eq!(scan.rows.len(), scan.grid.count);
                accepted += 1;
            }
            Err(_) => assert!(name.contains("truncated"), "{name} should parse"),
        }
    }
    assert!(accepted > 0);
}
