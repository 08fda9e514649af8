//! End-to-end runs of the `qiso` binary: exit codes, report shape and
//! reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn graph(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("graphs")
        .join(format!("{name}.graph"))
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qiso")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.display().to_string();
    full.extend(["--out", &out_str]);
    let o = run(&full);
    let code = o.status.code().unwrap();
    let text = std::fs::read_to_string(&out).unwrap_or_else(|_| panic!("no report; stderr: {}", String::from_utf8_lossy(&o.stderr)));
    (code, serde_json::from_str(&text).unwrap())
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn spectral_k3_numbers() {
    let (code, r) = run_json(&["spectral", "--graph", &graph("k3"), "--level", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["overall"], "pass");
    assert_eq!(r["graph"]["edges"], 6);
    let dims = &check(&r, "levels/dimensions")["detail"];
    assert_eq!(dims["dims"], serde_json::json!([3, 6, 12, 24, 48]));
    let spectrum = check(&r, "dirac/spectrum")["detail"].as_array().unwrap();
    let mult: Vec<u64> = spectrum.iter().map(|e| e["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(&mult[..5], &[2, 3, 6, 12, 24]);
    let perron = &check(&r, "perron")["detail"]["exact"];
    assert_eq!(perron["rho"], "2");
    assert_eq!(check(&r, "measure/cylinders")["detail"]["e12.e21"], "1/12");
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "--graph", &graph("cycle3"), "--level", "3", "--k", "2"];
    let (c1, mut a) = run_json(&args);
    let (c2, mut b) = run_json(&args);
    assert_eq!((c1, c2), (0, 0));
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", "--graph", &graph("k3")]).status.code(), Some(0));
    assert_eq!(run(&["cuntz", "--loops", "2"]).status.code(), Some(0));
    let wrong = run(&["verify", "--graph", &graph("asym4"), "--convention", "range-prepend"]);
    assert_eq!(wrong.status.code(), Some(1));
    assert_eq!(run(&["validate", "--graph", "/nonexistent/x.graph"]).status.code(), Some(2));
    assert_eq!(run(&["spectral", "--graph", &graph("k3"), "--level", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "graph bad\nv 1\ne x 1 2\n").unwrap();
    assert_eq!(run(&["validate", "--graph", &bad.display().to_string()]).status.code(), Some(2));
}

#[test]
fn negative_control_report_names_the_failure() {
    let (code, r) = run_json(&["verify", "--graph", &graph("asym4"), "--convention", "range-prepend"]);
    assert_eq!(code, 1);
    assert_eq!(r["overall"], "fail");
    assert_eq!(r["convention"], "range-prepend");
    let failing: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| c["name"].as_str().unwrap().starts_with("welldefined")));
}

#[test]
fn cuntz_report_contrasts_flavors() {
    let (code, r) = run_json(&["cuntz", "--loops", "3"]);
    assert_eq!(code, 0);
    let text = r.to_string();
    assert!(text.contains("not-isometric"));
    assert!(text.contains("rotation-45"));
}

#[test]
fn reduce_prints_verdicts() {
    let o = run(&["reduce", "sum(k, q[1,k]) - 1", "--graph", &graph("k3")]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("proved-zero") || stdout.contains("ProvedZero"), "{stdout}");
}
