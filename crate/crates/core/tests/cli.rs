use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn wci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wci"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wci-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_reports_invariants() {
    let v = json(&wci(&["classify", "-a", "1,1,2,3", "-d", "6"]));
    assert_eq!(v["weights"], serde_json::json!([1, 1, 2, 3]));
    assert_eq!(v["invariants"]["index"], 1);
    assert_eq!(v["invariants"]["variance"], 1);
    assert_eq!(v["invariants"]["anticanonical_degree"], 1);
    assert_eq!(v["invariants"]["sporadic"], true);
    assert_eq!(v["smoothness"]["smooth"], true);
}

#[test]
fn classify_normalizes_input() {
    let a = wci(&["classify", "-a", "3,1,2,1,1,1", "-d", "6,4"]);
    let b = wci(&["classify", "-a", "1,1,1,1,2,3", "-d", "4,6"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn classify_explains_failures() {
    let v = json(&wci(&["classify", "-a", "1,1,2,2", "-d", "4", "--explain"]));
    assert_eq!(v["smoothness"]["smooth"], false);
    assert!(!v["smoothness"]["failure"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(
        wci(&["classify", "-a", "1,1,2,3", "-d", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(wci(&["classify", "-d", "6"]).status.code(), Some(2));
    assert_eq!(
        wci(&["enumerate", "--variance", "1", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    let out = wci(&["classify", "-a", "1,1,2,2", "-d", "4", "--require-smooth"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_csv() {
    let out = wci(&["enumerate", "--variance", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "no,variance,ambient,degrees,dimension,degree,h0,sporadic\n\
         1.1,1,\"P(1^2,2,3)\",6,2,1,2,Sporadic\n\
         1.2,1,\"P(1^3,2)\",4,2,2,3,Sporadic\n\
         1.3,1,P^3,3,2,3,4,Non-sporadic\n"
    );
}

#[test]
fn enumerate_json_records() {
    let v = json(&wci(&["enumerate", "--variance", "2", "--format", "json"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for row in rows {
        assert_eq!(row["invariants"]["variance"], 2);
        assert!(row["no"].as_str().unwrap().starts_with("2."));
    }
}

#[test]
fn golden_tables_match_with_allowlist() {
    for r in ["0", "1", "2", "3"] {
        let out = wci(&["enumerate", "--variance", r, "--golden", "generators"]);
        assert_eq!(out.status.code(), Some(0), "variance {r}");
    }
    assert_eq!(
        wci(&["sigma", "--c", "2", "--golden", "sigma"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        wci(&[
            "enumerate",
            "--variance",
            "5",
            "--kind",
            "series",
            "--golden",
            "series"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn golden_mismatch_exits_one() {
    let golden = scratch(
        "golden.csv",
        "no,variance,ambient,degrees,dimension,degree,h0,sporadic\n\
         1.1,1,\"P(1^2,2,3)\",6,2,1,2,Sporadic\n\
         1.2,1,\"P(1^3,2)\",4,2,5,3,Sporadic\n\
         1.3,1,P^3,3,2,3,4,Non-sporadic\n",
    );
    let out = wci(&[
        "enumerate",
        "--variance",
        "1",
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DISCREPANCY"));

    // a custom golden file is reported under its file stem
    let allow = scratch(
        "allow.csv",
        "table,no,field,golden,computed,note\ngolden,1.2,degree,5,2,test entry\n",
    );
    let out = wci(&[
        "enumerate",
        "--variance",
        "1",
        "--golden",
        golden.to_str().unwrap(),
        "--allowlist",
        allow.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn output_is_independent_of_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_wci"))
            .args(["enumerate", "--variance", "3", "--format", "json"])
            .env("WCI_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn sigma_markdown() {
    let out = wci(&["sigma", "--c", "1", "--format", "md"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| 1 | 0 | P^{3+2m} | 2^{m+1} | 2+m | 2*4^{m+1} | 2 | Non-sporadic |"));
    assert!(text.contains("| 1' | 1 | P(1^2,2,3) | 6 | 2 | 1 | 1 | Sporadic |"));
}

#[test]
fn nef_command() {
    let v = json(&wci(&[
        "nef",
        "-a",
        "1,1,1,1,2,2,3",
        "-d",
        "4,6",
        "--partition",
        "--minimal",
        "--strong",
    ]));
    assert_eq!(v["partition"]["nice"], true);
    assert_eq!(v["minimal"]["outcome"], "found");
    assert_eq!(v["preminimal"]["strong"], true);
}

#[test]
fn degree_one_and_bounds() {
    let v = json(&wci(&["degree-one", "--variance", "2"]));
    assert_eq!(v[0]["degrees"], serde_json::json!([6, 6]));
    assert_eq!(v[0]["sporadic"], true);
    let v = json(&wci(&["bounds", "--variance", "2"]));
    assert_eq!(v["series_high_found"], 0);
}

#[test]
fn conjecture_sweep() {
    let v = json(&wci(&["conjectures", "--variance-cap", "2"]));
    assert_eq!(v["s2_counterexamples"], serde_json::json!([]));
    assert_eq!(v["nice_nef_partitions_missing"], serde_json::json!([]));
    let minimal = &v["minimal_morphism"];
    assert_eq!(minimal["all_cs"]["checked"], 12);
    assert_eq!(minimal["dimension_at_least_2"]["checked"], 10);
    assert_eq!(minimal["all_cs"]["candidates"], serde_json::json!([]));
}
