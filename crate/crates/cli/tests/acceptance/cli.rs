//! Command-line surface: output shapes and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use fillspec::profiles::ProfileTable;
use serde_json::Value;

fn fillspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fillspec")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = fillspec(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fillspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn generated(name: &str, args: &[&str]) -> String {
    let path = scratch(name);
    let out = fillspec(&[&["gen"], args].concat());
    assert!(out.status.success());
    std::fs::write(&path, out.stdout).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn spectrum_of_q22() {
    let q22 = generated("q22.json", &["grid", "--p", "2", "--q", "2"]);
    let v = json(&["spectrum", "--in", &q22]);
    assert!((v["lambda1"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((v["mu1_weighted"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!((v["mu1_unweighted"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn filling_length_and_inversion_chain() {
    let q22 = generated("q22b.json", &["grid", "--p", "2", "--q", "2"]);
    let v = json(&["fl", "--in", &q22]);
    assert_eq!(v["fl"], 8);
    assert_eq!(v["radius"], 4);
    let v = json(&["inversion-check", "--in", &q22]);
    assert_eq!(v["verdict"], true);
    assert!((v["r_eff"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((v["lower_bound"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn resistance_at_eigenfunction_maximum() {
    let q33 = generated("q33.json", &["grid", "--p", "3", "--q", "3"]);
    let v = json(&["resistance", "--in", &q33, "--auto-eigmax"]);
    assert!((v["r_eff"].as_f64().unwrap() - 7.0 / 24.0).abs() < 1e-12);
}

#[test]
fn fillarea_of_builtin_commutator() {
    let v = json(&["fillarea", "--pres", "builtin:z2", "--word", "aabbAABB"]);
    assert_eq!(v["area"].as_f64(), Some(4.0));
    let v = json(&["fillarea", "--pres", "builtin:z2", "--word", "a b b- a-"]);
    assert_eq!(v["area"].as_f64(), Some(0.0));
}

#[test]
fn cheeger_and_hqm_on_q22() {
    let q22 = generated("q22c.json", &["grid", "--p", "2", "--q", "2"]);
    let v = json(&["cheeger", "--in", &q22, "--kind", "dual-unweighted"]);
    assert_eq!((v["result"]["numer"].as_u64(), v["result"]["denom"].as_u64()), (Some(2), Some(1)));
    let v = json(&["hqmcheck", "--in", &q22]);
    assert_eq!(v["status"], "holds");
}

#[test]
fn face_set_commands() {
    let q33 = generated("q33b.json", &["grid", "--p", "3", "--q", "3"]);
    let v = json(&["multiboundary", "--in", &q33, "--faces", "0,1,2,3,5,6,7,8"]);
    assert_eq!(v["total_length"], 16);
    assert_eq!(v["loops"].as_array().unwrap().len(), 2);
    let v = json(&["holefill", "--in", &q33, "--faces", "0,1,2,3,5,6,7,8"]);
    let filled: Vec<u64> = v["faces"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(filled, (0..9).collect::<Vec<_>>());
}

#[test]
fn profile_csv_parses_back() {
    let out = fillspec(&["--out", "csv", "profile", "--family", "grid", "--max", "4"]);
    assert!(out.status.success());
    let t = ProfileTable::read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(t.meta.family, "grid");
    let lambda = t.get(16, "lambda1").unwrap().as_f64();
    assert!((lambda - (1.0 - (std::f64::consts::PI / 4.0).cos())).abs() < 1e-10);
}

#[test]
fn suite_exit_status_reflects_verdicts() {
    let ok = fillspec(&["suite", "--criteria", "5,8", "--no-invariants"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = fillspec(&["suite", "--criteria", "8", "--no-invariants", "--tamper-grid"]);
    assert_eq!(bad.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["checks"][0]["passed"], false);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(fillspec(&["spectrum", "--in", "/nonexistent/diagram.json"]).status.code(), Some(2));
    let junk = scratch("junk.json");
    std::fs::write(&junk, "{\"vertices\": 3}").unwrap();
    let out = fillspec(&["spectrum", "--in", &junk.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn exports() {
    let q22 = generated("q22d.json", &["grid", "--p", "2", "--q", "2"]);
    let out = fillspec(&["export", "diagram", "--in", &q22, "--format", "dot", "--dual"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("graph"));
    let round = fillspec(&["export", "diagram", "--in", &q22]);
    assert_eq!(String::from_utf8(round.stdout).unwrap(), std::fs::read_to_string(&q22).unwrap());

    let frozen = json(&["export", "regressions"]);
    assert_eq!(frozen["version"], "v1");
    let dir = scratch("regen");
    let out = fillspec(&["export", "regressions", "--regenerate", "--dir", &dir.to_string_lossy()]);
    assert!(out.status.success());
    let fresh: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("regressions_v1.json")).unwrap()).unwrap();
    assert_eq!(fresh["heisenberg3_fl_greedy"], frozen["heisenberg3_fl_greedy"]);
}
