use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn catalogue(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "catalogue", &format!("{name}.json")].iter().collect();
    p.display().to_string()
}

fn dvs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvs")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = dvs(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().expect("exit code"), v)
}

#[test]
fn analyze_reports_the_obstruction() {
    let (code, v) = json(&["analyze", &catalogue("nonflat_2_1")]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"]["summary"], "dvs linear type (2,1); frame found; involutivity FAILS");
    assert_eq!(v["certificates"]["frame"][0], "x1 dx3 + dy");
    assert_eq!(v["residuals"]["involutivity"][0], "dx1∧dx3∧dy");
    for key in ["command", "inputs", "verdict", "certificates", "residuals", "timings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["timings"]["total_seconds"].is_f64());
}

#[test]
fn analyze_accepts_points_and_sees_the_model() {
    let (code, v) = json(&["analyze", &catalogue("standard_2_1"), "--point", "1/2,0,0,-1,3", "--samples", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificates"]["samples"].as_array().unwrap().len(), 3);
    assert_eq!(v["certificates"]["samples"][0]["point"], "(1/2, 0, 0, -1, 3)");
    let (code, _) = json(&["analyze", &catalogue("degenerate")]);
    assert_eq!(code, 1);
}

#[test]
fn involutive_with_frame_file() {
    let (code, v) = json(&["involutive", &catalogue("nonflat_family_k2"), "--frame", &catalogue("nonflat_family_k2_frame")]);
    assert_eq!(code, 1);
    assert_eq!(v["certificates"]["frame_in_f"], true);
    let (code, _) = json(&["involutive", &catalogue("standard_2_1"), "--frame", &catalogue("nonflat_2_1_frame")]);
    assert_eq!(code, 1, "dy + x1 dx3 is not in F of the model");
}

#[test]
fn flatten_text_output() {
    let out = dvs(&["flatten", &catalogue("perturbed_1_1"), "--grid", "2", "--steps", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("dvs flatten\nverdict: flattened at 8 grid points"), "{text}");
}

#[test]
fn symmetry_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("dvs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let field = dir.join("field.json");
    let generator = dir.join("generator.json");
    let (code, v) = json(&["symmetry", "build", &catalogue("generator_x1x2y_ydy"), "--out", field.to_str().unwrap()]);
    assert_eq!(code, 0);
    let built = v["certificates"]["field"].clone();
    let (code, _) = json(&["symmetry", "verify", field.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, v) = json(&["symmetry", "decompose", field.to_str().unwrap(), "--out", generator.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["certificates"]["h"], "x1*x2*y");
    let (code, v) = json(&["symmetry", "build", generator.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["certificates"]["field"], built);
    let (code, _) = json(&["symmetry", "hamform", generator.to_str().unwrap()]);
    assert_eq!(code, 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn symmetry_verify_against_another_form() {
    let (code, _) = json(&["symmetry", "verify", &catalogue("field_minus_dx2"), "--form", &catalogue("perturbed_1_1")]);
    assert_eq!(code, 1, "−∂x2 does not preserve (1 + x1x2/5) dx1∧dx2∧dy");
    let (code, _) = json(&["symmetry", "decompose", &catalogue("field_x1dx1")]);
    assert_eq!(code, 1);
}

#[test]
fn cosymplectic_commands() {
    let pair = catalogue("pair_standard_5");
    assert_eq!(json(&["cosymplectic", "validate", &pair]).0, 0);
    assert_eq!(json(&["cosymplectic", "induce", &pair]).0, 0);
    let (code, v) = json(&["cosymplectic", "classify", &pair, "--field", &catalogue("field_dy_5")]);
    assert_eq!(code, 0);
    assert_eq!(v["certificates"]["class"], "weakly co-Hamiltonian");
    assert_eq!(v["certificates"]["alpha_of_x"], "1");
}

#[test]
fn lepage_table() {
    let (code, v) = json(&["lepage", "--m", "2,3", "--l", "1..2"]);
    assert_eq!(code, 0);
    let rows = v["certificates"]["table"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().any(|r| r["m"] == 2 && r["l"] == 2 && r["kernel_dim"] == 5));
}

#[test]
fn catalogue_commands() {
    let (code, v) = json(&["catalogue", "list"]);
    assert_eq!(code, 0);
    assert!(v["certificates"]["entries"].as_array().unwrap().len() >= 20);
    let (code, v) = json(&["catalogue", "run", "nonflat-involutive"]);
    assert_eq!(code, 0);
    assert!(v["verdict"]["summary"].as_str().unwrap().starts_with("as expected: not flat"));
    assert_eq!(json(&["catalogue", "run", "no-such-entry"]).0, 2);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = std::env::temp_dir().join(format!("dvs-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"dim\": 3,\n  \"degree\": 1,\n  \"terms\": [{\"indices\": [5], \"poly\": []}]\n}\n").unwrap();
    let out = dvs(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
    assert_eq!(dvs(&["analyze", "/definitely/missing.json"]).status.code(), Some(2));
    assert_eq!(dvs(&["analyze", &catalogue("standard_1_1"), "--point", "1,2"]).status.code(), Some(2));
    assert_eq!(dvs(&["no-such-command"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
