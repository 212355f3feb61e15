use std::path::Path;
use std::process::{Command, Output};

fn tightwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tightwalk"))
        .args(args)
        .env_remove("TIGHTWALK_BUDGET_NODES")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_k6(dir: &Path) -> String {
    let path = dir.join("k6.txt");
    let out = tightwalk(&["generate", "--kind", "complete", "--n", "6", "--k", "3", "--seed", "1", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    path.to_str().unwrap().to_string()
}

#[test]
fn counts_tight_cycles_of_k6() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_k6(dir.path());
    let out = tightwalk(&["count", "--graph", &g]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "tightwalk-report/1");
    assert_eq!(v["result"]["count"], 60);
    assert_eq!(v["result"]["method"], "tight-hc");
}

#[test]
fn matching_average_on_k6_is_a_tenth() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_k6(dir.path());
    let w = dir.path().join("w.txt");
    let out = tightwalk(&["pfm", "--graph", &g, "--method", "matching-average", "-o", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&w).unwrap();
    let weights: Vec<f64> = text
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().last().unwrap().parse().unwrap())
        .collect();
    assert_eq!(weights.len(), 20);
    assert!(weights.iter().all(|w| (w - 0.1).abs() < 1e-12));
}

#[test]
fn ell_cycles_need_divisibility() {
    let out = tightwalk(&["count", "--kind", "complete", "--n", "5", "--k", "3", "--target", "ell-cycles", "--ell", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("divisibility"));
}

#[test]
fn unknown_format_is_a_usage_error() {
    let out = tightwalk(&["info", "--kind", "complete", "--n", "6", "--k", "3", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn two_graph_sources_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_k6(dir.path());
    let out = tightwalk(&["info", "--graph", &g, "--kind", "complete", "--n", "6", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tightwalk"))
        .args(["count", "--kind", "complete", "--n", "7", "--k", "3"])
        .env("TIGHTWALK_BUDGET_NODES", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_tightwalk"))
        .args(["count", "--kind", "complete", "--n", "6", "--k", "3", "--budget", "100000"])
        .env("TIGHTWALK_BUDGET_NODES", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn seeded_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_k6(dir.path());
    let args = ["walk", "--graph", &g, "--length", "3", "--seed", "42"];
    let a = tightwalk(&args);
    let b = tightwalk(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 42);
    let args = ["goodness", "--graph", &g, "--kappa", "2", "--samples", "50", "--seed", "7"];
    assert_eq!(tightwalk(&args).stdout, tightwalk(&args).stdout);
}

#[test]
fn mixing_csv_header() {
    let out = tightwalk(&["mix", "--kind", "complete", "--n", "6", "--k", "3", "--q-max", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,tv_tuple,tv_vertex"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_k6(dir.path());
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed = 9\n").unwrap();
    let out = tightwalk(&["--config", cfg.to_str().unwrap(), "walk", "--graph", &g, "--length", "2"]);
    assert_eq!(json(&out)["seed"], 9);
    std::fs::write(&cfg, "node_budget = 10\n").unwrap();
    let out = tightwalk(&["--config", cfg.to_str().unwrap(), "count", "--graph", &g]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    let out = tightwalk(&["--config", cfg.to_str().unwrap(), "info", "--graph", &g]);
    assert_eq!(out.status.code(), Some(2));
}
