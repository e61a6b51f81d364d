use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impartial"))
        .args(args)
        .env_remove("IMPARTIAL_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn select_with_oracle() {
    let out = run(&["select", &fixture("nine_agents.csv"), "-k", "6", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["score"], 25);
    assert_eq!(v["opt_score"], 27);
    assert_eq!(v["ratio"], "25/27");
    assert_eq!(v["alpha"], "1/3");
    assert_eq!(v["selected"], serde_json::json!([2, 3, 5, 6, 8]));
}

#[test]
fn select_with_partition_file() {
    let out = run(&[
        "select",
        &fixture("nine_agents.csv"),
        "-k",
        "6",
        "--partition-file",
        &fixture("nine_agents_layout.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["score"], 17);
}

#[test]
fn select_zero_matrix() {
    let out = run(&["select", &fixture("zero.csv"), "-k", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["score"], 0);
}

#[test]
fn select_pads_when_not_conforming() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.json");
    let out = run(&[
        "generate", "uniform-int", "-n", "13", "--max", "4", "--seed", "3", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["select", path.to_str().unwrap(), "-k", "8", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["params"]["n_tilde"], 16);
    assert!(v["selected"].as_array().unwrap().iter().all(|x| x.as_u64().unwrap() <= 13));
}

#[test]
fn tightness_reports_one_over_b() {
    let out = run(&["tightness", "-n", "9", "-k", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ratio"], "1/3");
    assert_eq!(v["pass"], true);
}

#[test]
fn partitions_document() {
    let out = run(&["partitions", "-n", "9", "-k", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["b"], 3);
    assert_eq!(v["candidate_sets"].as_array().unwrap().len(), 6);
    assert_eq!(v["candidate_sets"][0], serde_json::json!([1, 2, 3]));
}

#[test]
fn alpha_grid_tsv() {
    let out = run(&["alpha-grid", "-n", "9", "-k", "4..=6", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n\tk\talpha_num\talpha_den\talpha_decimal");
    assert_eq!(lines[1], "9\t4\tn/a\tn/a\tn/a");
    assert_eq!(lines[3], "9\t6\t1\t3\t0.333333");

    let out = run(&["alpha-grid", "-n", "16", "-k", "8", "-m", "2"]);
    assert_eq!(json(&out)["cells"][0]["alpha"], "1/8");
}

#[test]
fn assign_and_opt() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = run(&[
        "generate", "uniform-int", "-n", "16", "-m", "2", "--max", "3", "--seed", "9", "--format",
        "csv", "-o", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let p = path.to_str().unwrap();

    let out = run(&["assign", p, "-k", "8", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["alpha"], "1/8");
    assert_eq!(v["jobs"].as_array().unwrap().len(), 2);

    let out = run(&["opt", p, "-k", "8", "--assignment"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["score"], v["opt_score"]);
}

#[test]
fn oracle_budget_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    run(&[
        "generate", "uniform-int", "-n", "12", "-m", "2", "--seed", "1", "-o",
        path.to_str().unwrap(),
    ]);
    let out = run(&["opt", path.to_str().unwrap(), "-k", "4", "--assignment", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_impartial"))
        .args(["opt", path.to_str().unwrap(), "-k", "4", "--assignment"])
        .env("IMPARTIAL_ORACLE_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "select", "-n", "9", "-k", "6", "--count", "2", "--support", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["violation_count"], 0);

    let out = run(&["verify", "top-k", "-n", "6", "-k", "2", "--count", "2", "--support", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["violation_count"].as_u64().unwrap() > 0);

    let out = run(&["verify", "select", "-n", "9", "-k", "6", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["budget_exhausted"], true);
}

#[test]
fn generate_is_deterministic() {
    let a = run(&["generate", "uniform-int", "-n", "9", "--max", "10", "--seed", "5"]);
    let b = run(&["generate", "uniform-int", "-n", "9", "--max", "10", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["weights"].as_array().unwrap().len(), 9);

    let t = run(&["generate", "tightness", "-n", "9", "-k", "6", "--sparse"]);
    assert_eq!(json(&t)["triplets"].as_array().unwrap().len(), 3);
}

#[test]
fn error_exit_codes() {
    assert_eq!(run(&["select", "missing.csv", "-k", "2"]).status.code(), Some(3));
    assert_eq!(run(&["select", "--bogus"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["select", &fixture("nine_agents.csv")]).status.code(), Some(3));
    // 4 < 2·sqrt(9)
    assert_eq!(run(&["select", &fixture("nine_agents.csv"), "-k", "4"]).status.code(), Some(2));
    assert_eq!(run(&["partitions", "-n", "9", "-k", "5"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "2\n0,1\n1,x\n").unwrap();
    let out = run(&["select", bad.to_str().unwrap(), "-k", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, field 2"));
}

#[test]
fn pretty_output() {
    let out = run(&["select", &fixture("nine_agents.csv"), "-k", "6", "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("score     25"), "{text}");
}
