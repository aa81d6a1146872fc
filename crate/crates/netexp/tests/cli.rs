use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn netexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netexp")).args(args).output().expect("binary runs")
}

fn netexp_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netexp"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    example(name).display().to_string()
}

#[test]
fn analyze_series() {
    let out = stdout(&netexp(&["analyze", &path("series2_bsc.json")]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["maxflow"].as_f64().unwrap(), 0.223143551314);
    assert_eq!(v["ratio"].as_f64().unwrap(), 1.0);
    assert_eq!(v["all_reversible"], true);
    assert_eq!(v["edges"].as_array().unwrap().len(), 2);
    assert_eq!(v["backedge_free_mincut"]["exists"], true);
}

#[test]
fn analyze_counterexample_has_no_backedge_free_cut() {
    let out = stdout(&netexp(&["analyze", &path("counterexample.json"), "--messages", "3"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["backedge_free_mincut"]["exists"], false);
    assert!(v["backedge_free_mincut"]["cut"].is_null());
    assert!((v["tilde_flow"].as_f64().unwrap() - 2.64657448449).abs() < 1e-9);
    assert!(v["two_flow"].as_f64().unwrap() > v["tilde_flow"].as_f64().unwrap());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(example("series2_bsc.json")).unwrap().replace("\"bsc\"", "\"gaussian\"");
    std::fs::write(&bad, text).unwrap();
    let o = netexp(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gaussian"));

    let o = netexp(&["analyze", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn odd_block_exits_3() {
    let o = netexp(&["simulate", &path("series2_bsc.json"), "--block", "3", "--horizons", "24"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("block size must be even"));
}

#[test]
fn short_horizon_exits_3() {
    let o = netexp(&["simulate", &path("series2_bsc.json"), "--horizons", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn noiseless_graph_has_no_errors() {
    let out = stdout(&netexp(&[
        "simulate",
        &path("noiseless.json"),
        "--horizons",
        "12,16",
        "--trials",
        "2000",
    ]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(netexp::commands::SIM_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for row in rows {
        assert_eq!(row.split(',').nth(2), Some("0"), "{row}");
    }
}

const GOLDEN_ARGS: &[&str] = &[
    "--messages",
    "2",
    "--block",
    "2",
    "--horizons",
    "12,16,20,24",
    "--trials",
    "100000",
    "--seed",
    "7",
];

#[test]
fn simulate_matches_golden_for_any_thread_count() {
    let golden = include_str!("golden/simulate_bsc005.csv");
    let file = path("series2_bsc005.json");
    let mut args = vec!["simulate", file.as_str()];
    args.extend_from_slice(GOLDEN_ARGS);
    for threads in ["1", "4"] {
        let o = netexp_env(&args, netexp::parallel::THREADS_ENV, threads);
        assert_eq!(stdout(&o), golden, "threads = {threads}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("fitted exponent"));
    }
}

#[test]
fn counterexample_table() {
    let out = stdout(&netexp(&["counterexample"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(netexp::commands::COUNTEREXAMPLE_HEADER));
    assert_eq!(lines.count(), netexp_core::analysis::DEFAULT_P_GRID.len());

    let out = stdout(&netexp(&["counterexample", "--p-grid", "0.01"]));
    assert_eq!(out.lines().nth(1), Some("0.01,3.0078151305,2.64657448449,2.91631906839"));

    let o = netexp(&["counterexample", "--p-grid"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn decompose_examples() {
    let out = stdout(&netexp(&["decompose", &path("diamond.json")]));
    let mut values: Vec<&str> = out
        .lines()
        .map(|l| l.split("value=").nth(1).unwrap().split(' ').next().unwrap())
        .collect();
    values.sort();
    assert_eq!(values, ["0.3", "0.4"]);
    assert!(!out.contains("circulation"));

    let out = stdout(&netexp(&["decompose", &path("series2_bsc.json")]));
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("path 1: "));

    let out = stdout(&netexp(&["decompose", &path("counterexample.json"), "--messages", "3"]));
    let routes: Vec<&str> = out.lines().map(|l| l.split(": ").nth(1).unwrap().split(" value").next().unwrap()).collect();
    assert_eq!(routes.len(), 2);
    assert!(routes.contains(&"1 -> 2 -> 4") && routes.contains(&"1 -> 3 -> 4"), "{out}");
}

#[test]
fn dump_normalized_round_trips() {
    let first = stdout(&netexp(&["analyze", &path("diamond.json"), "--dump-normalized"]));
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("normalized.json");
    std::fs::write(&copy, &first).unwrap();
    let second = stdout(&netexp(&["analyze", copy.to_str().unwrap(), "--dump-normalized"]));
    assert_eq!(first, second);
    let a = stdout(&netexp(&["analyze", &path("diamond.json")]));
    let b = stdout(&netexp(&["analyze", copy.to_str().unwrap()]));
    assert_eq!(a, b);
}

#[test]
fn oracle_command() {
    let out = stdout(&netexp(&["oracle", &path("series2_bsc.json"), "--block", "4"]));
    assert!(out.starts_with("path 1: "));
    assert!(out.contains("d_B(1,2)="));
    assert!(out.contains("ml_error(2)="));

    let dir = tempfile::tempdir().unwrap();
    let hop = dir.path().join("hop.json");
    std::fs::write(
        &hop,
        r#"{"nodes": ["s", "t"], "source": "s", "destination": "t",
            "edges": [{"from": "s", "to": "t", "channel": {"kind": "bsc", "p": 0.1}}]}"#,
    )
    .unwrap();
    let out = stdout(&netexp(&["oracle", hop.to_str().unwrap(), "--horizon", "3"]));
    assert!(out.contains("n=3 p_err=0.028 "), "{out}");

    let o = netexp(&["oracle", &path("series2_bsc.json"), "--horizon", "3"]);
    assert_eq!(o.status.code(), Some(2));
}
