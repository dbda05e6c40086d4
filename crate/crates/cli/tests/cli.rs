use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn domtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_domtree"))
        .args(args)
        .env_remove("DOMTREE_TIME_LIMIT")
        .env_remove("DOMTREE_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn generate_json_counts() {
    let v = json(&domtree(&[
        "generate", "--family", "ht", "--levels", "3", "--format", "json",
    ]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 15);
    assert_eq!(v["edges"].as_array().unwrap().len(), 21);
}

#[test]
fn generate_edge_list() {
    let out = domtree(&[
        "generate", "--family", "st", "--levels", "1", "--format", "edgelist",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 2\n1 3\n2 3\n");
}

#[test]
fn generate_rejects_small_root_fault_hypertree() {
    let out = domtree(&["generate", "--family", "ht-star", "--levels", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        domtree(&["solve", "--family", "ht", "--levels", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        domtree(&["generate", "--family", "xx", "--levels", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(domtree(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn solve_root_fault_hypertree() {
    let v = json(&domtree(&[
        "solve",
        "--family",
        "ht-star",
        "--levels",
        "2",
        "--variant",
        "ltd",
    ]));
    assert_eq!(v["value"], 3);
    assert_eq!(v["header"]["tool"], "domtree");
    assert_eq!(v["header"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["lex_least"], true);
}

#[test]
fn construct_with_check() {
    let v = json(&domtree(&[
        "construct",
        "--family",
        "ht",
        "--levels",
        "2",
        "--variant",
        "ltd",
        "--check",
    ]));
    assert_eq!(v["set"], serde_json::json!([2, 3, 4]));
    assert_eq!(v["valid"], true);
}

#[test]
fn json_input_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("st3.json");
    let p = path.to_str().unwrap();
    let out = domtree(&[
        "generate", "--family", "st", "--levels", "3", "--format", "json", "--output", p,
    ]);
    assert!(out.status.success());
    assert!(Path::new(p).exists());
    for (cmd, variant) in [("solve", "ld"), ("construct", "ltd")] {
        let direct = json(&domtree(&[
            cmd,
            "--family",
            "st",
            "--levels",
            "3",
            "--variant",
            variant,
        ]));
        let loaded = json(&domtree(&[cmd, "--input", p, "--variant", variant]));
        assert_eq!(direct, loaded, "{cmd}");
    }
}

#[test]
fn verify_base_cases() {
    let v = json(&domtree(&["verify", "--max-n", "3"]));
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r["agreement"] == "full_match"));
}

#[test]
fn verify_upper_bound_rows() {
    let out = domtree(&[
        "verify",
        "--families",
        "ht",
        "--variants",
        "ld,ltd",
        "--min-level",
        "9",
        "--max-n",
        "10",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(
        rows.iter()
            .all(|r| r.contains(",true,,skipped_size,upper_bound_only")),
        "{text}"
    );
}

#[test]
fn verify_corrupted_formula_fails() {
    let out = domtree(&[
        "verify",
        "--max-n",
        "2",
        "--format",
        "csv",
        "--perturb-formula",
        "st:td:2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("st,td,2,3,2,true,2,optimal,mismatch"));
}

#[test]
fn table_rows() {
    let out = domtree(&["table", "--max-n", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("family,variant,n,value\n"));
    for row in ["ht,ld,4,13", "st,ltd,2,4", "ht,dom,6,37"] {
        assert!(text.lines().any(|l| l == row), "{row}");
    }
    assert_eq!(domtree(&["table", "--max-n", "65"]).status.code(), Some(2));
}

#[test]
fn audit_reports_refutation() {
    let v = json(&domtree(&[
        "audit",
        "--claim",
        "ld-level-n",
        "--families",
        "ht",
        "--max-level",
        "3",
    ]));
    let findings = v["results"].as_array().unwrap();
    let ht2 = findings.iter().find(|f| f["n"] == 2).unwrap();
    assert_eq!(ht2["status"], "refuted");
    assert_eq!(ht2["counterexample"], serde_json::json!([2, 3, 4]));
    assert!(findings
        .iter()
        .all(|f| f["quote"].as_str().is_some_and(|q| !q.is_empty())));
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        &["verify", "--max-n", "3", "--format", "csv"][..],
        &["audit", "--max-level", "3"][..],
        &[
            "solve",
            "--family",
            "st",
            "--levels",
            "3",
            "--variant",
            "ltd",
        ][..],
    ] {
        assert_eq!(stdout(&domtree(args)), stdout(&domtree(args)));
    }
}

#[test]
fn environment_sets_workers() {
    let out = Command::new(env!("CARGO_BIN_EXE_domtree"))
        .args([
            "solve",
            "--family",
            "ht",
            "--levels",
            "3",
            "--variant",
            "ld",
        ])
        .env("DOMTREE_WORKERS", "3")
        .env("DOMTREE_TIME_LIMIT", "60")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["value"], 6);
    let bad = Command::new(env!("CARGO_BIN_EXE_domtree"))
        .args([
            "solve",
            "--family",
            "ht",
            "--levels",
            "3",
            "--variant",
            "ld",
        ])
        .env("DOMTREE_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
