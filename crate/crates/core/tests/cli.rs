use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn monotile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monotile")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tile_to(path: &Path) {
    let out = monotile(&["tile", "--set", "1,a", "--core-radius", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn tile_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("region.json");
    tile_to(&file);
    let out = monotile(&["verify", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["partition"]["partition"], true);
}

#[test]
fn corrupted_placement_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("region.json");
    tile_to(&file);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let placements = doc["placements"].as_array_mut().unwrap();
    let anchor = placements[0]["anchor"].as_str().unwrap().to_string();
    placements[0]["anchor"] = Value::String(if anchor == "1" { "b".into() } else { format!("{anchor}b") });
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = monotile(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["error_kind"], "verification_failed");
    assert!(doc["witness"].is_string());
}

#[test]
fn malformed_region_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"F\": 3}").unwrap();
    let out = monotile(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error_kind"], "malformed_input");
}

#[test]
fn exports_from_a_region_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("region.json");
    tile_to(&file);
    let dot = monotile(&["export", "dot", file.to_str().unwrap()]);
    assert_eq!(dot.status.code(), Some(0));
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
    let xml = monotile(&["export", "graphml", file.to_str().unwrap()]);
    assert!(String::from_utf8(xml.stdout).unwrap().contains("<graphml"));
    let direct = monotile(&["tile", "--set", "1,a", "--core-radius", "2", "--format", "dot"]);
    assert!(String::from_utf8(direct.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = monotile(&["tile", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn documents_record_provenance() {
    let out = monotile(&["swinger", "find", "-r", "2", "--min-length", "4", "--seed", "9", "--budget", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["provenance"]["seed"], 9);
    assert_eq!(doc["provenance"]["search_budget"], 500);
    assert_eq!(doc["provenance"]["strategy"], "random");
}
