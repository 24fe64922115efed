use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use retract_core::format::{parse_poset, parse_witness};
use retract_core::oracle::oracle_retraction_exists;
use retract_core::{decide_retract, PointSet, RetractionWitness};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn retract(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_retract"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn analyze_crown() {
    let o = retract(&["analyze", data("crown4.poset").to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("crowns: 1 (1 proper, 0 improper)"), "{text}");
    assert!(text.contains("bundles: 0"));
}

#[test]
fn analyze_json_matches_text() {
    let file = data("crown4_mid.poset");
    let o = retract(&["analyze", file.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["crowns"][0]["proper"], false);
    assert_eq!(v["crowns"][0]["inner"][0], "m");
    assert_eq!(v["bundles"].as_array().unwrap().len(), 1);
    assert_eq!(v["levels"]["middle"][0], "m");
    let text = stdout(&retract(&["analyze", file.to_str().unwrap()]));
    assert!(text.contains("inner {m}") && text.contains("bundles: 1"));
}

#[test]
fn decide_exit_codes() {
    let crown = data("crown4.poset");
    let mid = data("crown4_mid.poset");
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("crown.witness");
    let o = retract(&[
        "decide",
        crown.to_str().unwrap(),
        "--lower",
        "a,b",
        "--upper",
        "v,w",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p = parse_poset(&std::fs::read_to_string(&crown).unwrap()).unwrap();
    let (map, verified) = parse_witness(&p, &std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert!(verified);
    RetractionWitness {
        map,
        image: p.carrier(),
    }
    .verify(&p)
    .unwrap();

    let o = retract(&[
        "decide",
        mid.to_str().unwrap(),
        "--lower",
        "a,b",
        "--upper",
        "v,w",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a retract"));

    let o = retract(&[
        "decide",
        mid.to_str().unwrap(),
        "--lower",
        "a,m",
        "--upper",
        "v,w",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not extremal"));

    let o = retract(&[
        "decide",
        mid.to_str().unwrap(),
        "--lower",
        "a,x",
        "--upper",
        "v,w",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown point `x`"));
}

#[test]
fn decide_rejects_non_ordinal_sum() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("n.poset");
    std::fs::write(&file, "points 4\nedge 0 2\nedge 0 3\nedge 1 3\n").unwrap();
    let o = retract(&[
        "decide",
        file.to_str().unwrap(),
        "--lower",
        "0,1",
        "--upper",
        "2,3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ordinal sum"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.poset");
    std::fs::write(&file, "points 3\nedge 0 1\nedge 1 7\n").unwrap();
    let o = retract(&["analyze", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn graph_outputs() {
    let crown = data("crown4.poset");
    let crown = crown.to_str().unwrap();
    let nodes = |dot: &str| dot.lines().filter(|l| l.contains("[label=\"{")).count();
    let o = retract(&[
        "graph", crown, "--which", "c", "--lower", "a,b", "--upper", "v,w",
    ]);
    assert!(o.status.success());
    assert_eq!(nodes(&stdout(&o)), 8);

    let o = retract(&[
        "graph", crown, "--which", "cmax", "--lower", "a,b", "--upper", "v,w",
    ]);
    let golden = std::fs::read_to_string(data("crown4_cmax.dot")).unwrap();
    assert_eq!(stdout(&o), golden);

    let o = retract(&["graph", crown, "--which", "f"]);
    assert_eq!(stdout(&o), "graph G {\n}\n");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.dot");
    let mid = data("crown4_mid.poset");
    let o = retract(&[
        "graph",
        mid.to_str().unwrap(),
        "--which",
        "f",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(nodes(&std::fs::read_to_string(out).unwrap()), 1);
}

#[test]
fn graph_needs_pattern_for_c() {
    let o = retract(&[
        "graph",
        data("crown4.poset").to_str().unwrap(),
        "--which",
        "c",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_tiny_bounds() {
    let o = retract(&["verify", "--max-points", "2", "--random", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 10);
}

#[test]
fn injected_fault_yields_reproducible_counterexample() {
    let o = retract(&[
        "verify",
        "--max-points",
        "5",
        "--random",
        "0",
        "--inject-fault",
    ]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FAIL criterion  1"));
    let err = stderr(&o);
    let text: String = err
        .split_once("counterexample for criterion 1:\n")
        .expect("counterexample printed")
        .1
        .split("\n\n")
        .next()
        .unwrap()
        .to_string();
    let p = parse_poset(&text).unwrap();
    let pattern = text
        .lines()
        .find_map(|l| l.strip_prefix("# --lower "))
        .unwrap();
    let (lower, upper) = pattern.split_once(" --upper ").unwrap();
    let z: PointSet = lower
        .split(',')
        .chain(upper.split(','))
        .map(|n| p.lookup(n).unwrap())
        .collect();
    // the faulty procedure always answers "retract"; the instance is not one
    assert!(oracle_retraction_exists(&p, z).unwrap().is_none());
    assert!(!decide_retract(&p, z).unwrap().is_retract());
}
