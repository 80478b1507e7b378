use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn twcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = twcoh(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "twcoh/1");
    v
}

fn groups(v: &Value) -> Vec<String> {
    v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["group"].as_str().unwrap().to_string())
        .collect()
}

const CONE: &str = r#"{"cells": [
  {"id": "s", "dim": 0, "faces": [], "chain": ["0"]},
  {"id": "r", "dim": 0, "faces": [], "chain": ["1"]},
  {"id": "e", "dim": 1, "faces": ["r", "s"], "chain": ["0", "1"]}
]}"#;

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn cohomology_table_from_a_file() {
    let f = temp_json(CONE);
    let path = f.path().to_str().unwrap();
    let o = twcoh(&["cohomology", "--input", path, "--perversity", "0", "--ring", "F2", "--degrees", "0..2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("degree"));
    assert!(lines[2].starts_with("0       F2"));
    assert!(lines[3].starts_with("1       0"));
}

#[test]
fn cohomology_json() {
    let v = json(&["cohomology", "--input", "example:butterfly", "--degrees", "0..1"]);
    assert_eq!(groups(&v), vec!["Z^2", "0"]);
    assert_eq!(v["truncation"], 2);
    assert_eq!(v["ring"], "Z");
    let v = json(&["cohomology", "--input", "example:projective_plane", "--degrees", "0..2"]);
    assert_eq!(groups(&v), vec!["Z", "0", "Z/2"]);
    let v = json(&["cohomology", "--input", "example:sphere_cone", "--perversity", "inf", "--degrees", "2"]);
    assert_eq!(groups(&v), vec!["Z"]);
}

#[test]
fn perversity_as_json() {
    let v = json(&[
        "cohomology",
        "--input",
        "example:sphere_cone",
        "--perversity",
        r#"{"values": {"0": 1}}"#,
        "--degrees",
        "2..2",
    ]);
    assert_eq!(groups(&v), vec!["Z"]);
    assert_eq!(v["perversity"]["0"], 1);
}

#[test]
fn relative_cohomology() {
    let v = json(&[
        "relative",
        "--input",
        "example:crac",
        "--subcomplex",
        "a,b,ab,c,ac,bc,abc",
        "--perversity",
        "inf",
    ]);
    assert_eq!(groups(&v), vec!["0", "0", "0"]);
    let o = twcoh(&["relative", "--input", "example:crac", "--subcomplex", "ab"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn operations_example() {
    let v = json(&["operations", "--P", "unit", "--n", "1", "--m", "1", "--p", "1", "--q", "0", "--ring", "F2"]);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["group"], "F2");
    assert_eq!(v["stable"], true);
    assert_eq!(v["truncation"], 3);
    let v = json(&["operations", "--n", "1", "--m", "1", "--p", "0", "--q", "1"]);
    assert_eq!(v["rank"], 0);
    let o = twcoh(&["operations", "--n", "1", "--m", "1", "--p", "0", "--q", "0", "--strict-stable"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn operations_need_a_prime_field() {
    let o = twcoh(&["operations", "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(2));
    let o = twcoh(&["operations", "--ring", "Fp:4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eml_skeleton_counts() {
    let out = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    let path = out.path().to_str().unwrap().to_string();
    let v = json(&["eml", "--P", "point", "--n", "1", "--truncation", "4", "--output", &path]);
    assert_eq!(v["cells_by_dim"], serde_json::json!([1, 1, 1, 1, 1]));
    let written = std::fs::read_to_string(&path).unwrap();
    let back: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(back["cells"].as_array().unwrap().len(), 5);
}

#[test]
fn gallery_butterfly() {
    let o = twcoh(&["gallery", "--case", "butterfly"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Z^2"));
    assert!(text.lines().last().unwrap().ends_with("ok"));
    let v = json(&["gallery", "--list"]);
    assert!(v["cases"].as_array().unwrap().len() >= 10);
    assert_eq!(twcoh(&["gallery", "--case", "nope"]).status.code(), Some(2));
}

#[test]
fn whole_gallery_passes() {
    let v = json(&["gallery"]);
    assert_eq!(v["pass"], true, "{v}");
}

#[test]
fn check_reports_validity() {
    let v = json(&["check", "--input", "example:crac"]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["nonsingular_cells"], serde_json::json!(["c"]));
    assert_eq!(v["normalization"]["certificate"], true);
    let bad = temp_json(
        r#"{"cells": [
          {"id": "u", "dim": 0, "chain": ["1"]},
          {"id": "v", "dim": 0, "chain": ["0"]},
          {"id": "uv", "dim": 1, "faces": ["v", "u"], "chain": ["1", "0"]}
        ]}"#,
    );
    let o = twcoh(&["check", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn validation_errors_exit_with_two() {
    let f = temp_json(CONE);
    let path = f.path().to_str().unwrap();
    for args in [
        vec!["cohomology", "--input", path, "--degrees", "0..3", "--truncation", "3"],
        vec!["cohomology", "--input", path, "--ring", "R"],
        vec!["cohomology", "--input", path, "--perversity", "{"],
        vec!["cohomology", "--input", path, "--degrees", "2..1"],
        vec!["cohomology", "--input", "example:nothing"],
        vec!["cohomology", "--input", path, "--poset", "linear:x"],
    ] {
        assert_eq!(twcoh(&args).status.code(), Some(2), "{args:?}");
    }
    let o = twcoh(&["cohomology", "--input", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "cohomology", "--input", "example:sphere_cone", "--perversity", "1", "--degrees", "0..2"];
    let a = twcoh(&args);
    let b = twcoh(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = twcoh(&["build", "example", "butterfly"]);
    let b = twcoh(&["build", "example", "butterfly"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn build_and_reload() {
    let o = twcoh(&["build", "boundary", "2"]);
    let circle = temp_json(&stdout(&o));
    let cpath = circle.path().to_str().unwrap();
    let o = twcoh(&["build", "cone", "--input", cpath]);
    assert_eq!(o.status.code(), Some(0));
    let cone = temp_json(&stdout(&o));
    let v = json(&["check", "--input", cone.path().to_str().unwrap()]);
    assert_eq!(v["cells_by_dim"], serde_json::json!([4, 6, 3]));
    let o = twcoh(&["build", "prism", "--input", cpath]);
    let prism = temp_json(&stdout(&o));
    let v = json(&["cohomology", "--input", prism.path().to_str().unwrap(), "--degrees", "0..1"]);
    assert_eq!(groups(&v), vec!["Z", "Z"]);
    let o = twcoh(&["build", "normalize", "--input", "example:butterfly"]);
    let n = temp_json(&stdout(&o));
    let v = json(&["check", "--input", n.path().to_str().unwrap()]);
    assert_eq!(v["cells_by_dim"], serde_json::json!([6, 6, 2]));
    let o = twcoh(&["build", "quotient", "--input", "example:crac", "--cells", "a,b,ab"]);
    assert_eq!(o.status.code(), Some(0));
    let o = twcoh(&["build", "join", "--input", cpath, "--with", cpath]);
    let s3 = temp_json(&stdout(&o));
    let v = json(&["cohomology", "--input", s3.path().to_str().unwrap(), "--degrees", "0..3"]);
    assert_eq!(groups(&v), vec!["Z", "0", "0", "Z"]);
}
