use std::process::{Command, Output};

use serde_json::Value;

fn c4lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_c4lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn untimed(mut v: Value) -> Value {
    if let Some(r) = v.get_mut("result").and_then(Value::as_object_mut) {
        r.remove("wall_time_ms");
    }
    v
}

#[test]
fn plane_build_writes_incidence_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pg8.txt");
    let out = c4lab(&["plane", "build", "--q", "8", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("points 73 lines 73"));
    assert_eq!(text.lines().count(), 74);

    let verify = c4lab(&["plane", "verify", "--input", path.to_str().unwrap()]);
    assert!(verify.status.success(), "{}", String::from_utf8_lossy(&verify.stderr));
}

#[test]
fn broken_plane_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "points 7 lines 7\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 6\n").unwrap();
    let out = c4lab(&["plane", "verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn matching_reports_exact_count() {
    let out = c4lab(&["supersat", "matching", "--q", "16", "--t", "4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["measured"]["c4"], 60);
    assert_eq!(v["config"]["q"], 16);
    assert_eq!(v["config"]["t"], 4);
}

#[test]
fn turan_brute_small_values() {
    let v = json(&c4lab(&["turan", "brute", "--n", "7"]));
    assert_eq!(v["result"]["value"], 9);
    let h = json(&c4lab(&["turan", "brute", "--n", "5", "--t", "1"]));
    assert!(h["result"]["value"].as_u64().unwrap() >= 1);
}

#[test]
fn polarity_graph_round_trip_through_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("er4.txt");
    let p = path.to_str().unwrap();
    assert!(c4lab(&["polarity", "graph", "--q", "4", "--out", p]).status.success());
    let v = json(&c4lab(&["graph", "count-c4", "--input", p]));
    assert_eq!(v["result"]["n"], 21);
    assert_eq!(v["result"]["m"], 50);
    assert_eq!(v["result"]["c4"], 0);
    let s = json(&c4lab(&["graph", "stats", "--input", p, "--q", "4"]));
    assert_eq!(s["result"]["total_deficiency"], 5);
}

#[test]
fn exit_codes() {
    assert_eq!(c4lab(&["plane", "build", "--bogus"]).status.code(), Some(2));
    assert_eq!(c4lab(&["plane", "build", "--q", "6"]).status.code(), Some(2));
    assert_eq!(c4lab(&["supersat", "matching", "--q", "3", "--t", "1"]).status.code(), Some(2));
    assert_eq!(c4lab(&["graph", "count-c4", "--input", "/definitely/missing"]).status.code(), Some(3));
    assert_eq!(c4lab(&["plane", "build", "--q", "4", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn random_experiment_is_reproducible() {
    let args = ["supersat", "random", "--q", "8", "--t", "5", "--trials", "6", "--seed", "3"];
    let a = c4lab(&args);
    let b = c4lab(&args);
    assert!(a.status.code() == Some(0) || a.status.code() == Some(1));
    assert_eq!(untimed(json(&a)), untimed(json(&b)));
    let one = c4lab(&[&["--threads", "1"][..], &args[..]].concat());
    let four = c4lab(&[&["--threads", "4"][..], &args[..]].concat());
    assert_eq!(untimed(json(&one)), untimed(json(&four)));
    let other = c4lab(&["supersat", "random", "--q", "8", "--t", "5", "--trials", "6", "--seed", "4"]);
    assert_ne!(json(&a)["result"]["measured"], json(&other)["result"]["measured"]);
}

#[test]
fn csv_report_has_one_row_per_verdict() {
    let out = c4lab(&["--format", "csv", "supersat", "add-edge", "--q", "4", "--u", "0", "--v", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("experiment,"));
    assert!(lines.count() >= 1);
}

#[test]
fn verify_single_check() {
    let out = c4lab(&["verify", "all", "--only", "10"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"][0]["id"], 10);
    assert_eq!(v["result"][0]["passed"], true);
    assert_eq!(c4lab(&["verify", "all", "--only", "99"]).status.code(), Some(2));
}
