use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn atgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atgraph")).args(args).output().expect("run atgraph")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(dir: &Path, name: &str, seed: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let o = atgraph(&[
        "generate", "--alpha", "0.5", "--arrivals", "constant:1", "--edges", "500", "--seed", seed, "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = fs::read_to_string(generate(dir.path(), "a.txt", "7")).unwrap();
    let b = fs::read_to_string(generate(dir.path(), "b.txt", "7")).unwrap();
    let c = fs::read_to_string(generate(dir.path(), "c.txt", "8")).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("alpha=0.5"));
    assert_eq!(lines.count(), 1000);
}

#[test]
fn edge_list_has_one_pair_per_line() {
    let o = atgraph(&["generate", "--alpha", "0", "--arrivals", "geom:0.5", "--edges", "50", "--seed", "3", "--format", "edgelist"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 50);
    assert!(text.lines().all(|l| l.split_whitespace().count() == 2));
}

#[test]
fn loglik_reports_json_and_flags_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "g.txt", "11");
    let p = path.to_str().unwrap();

    let ok = atgraph(&["loglik", p, "--arrivals", "constant:1"]);
    assert!(ok.status.success());
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(v["logprob"].as_f64().unwrap() < 0.0);
    assert_eq!(v["n"], 1000);
    assert_eq!(v["k"], 500);
    assert_eq!(v["alpha"], 0.5);

    let bad = atgraph(&["loglik", p, "--arrivals", "constant:2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("inconsistent"));
}

#[test]
fn limit_pmf_table() {
    let o = atgraph(&["limit-pmf", "--regime", "sublinear", "--alpha", "0.5", "--dmax", "3", "--format", "csv"]);
    assert!(o.status.success());
    let rows: Vec<(u32, f64)> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let (d, p) = l.split_once(',').unwrap();
            (d.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    let expected = [(1, 0.5), (2, 0.125), (3, 0.0625)];
    assert_eq!(rows.len(), 3);
    for ((d, p), (ed, ep)) in rows.iter().zip(expected) {
        assert_eq!(*d, ed);
        assert!((p - ep).abs() < 1e-14);
    }
}

#[test]
fn degrees_counts_every_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "g.txt", "5");
    let o = atgraph(&["degrees", path.to_str().unwrap(), "--dmax", "2000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["num_vertices"], 500);
    let total: u64 = v["histogram"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 500);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(atgraph(&["generate", "--alpha", "0.5", "--arrivals", "constant:1", "--edges", "5"]).status.code(), Some(2));
    assert_eq!(atgraph(&["generate", "--alpha", "0.5", "--arrivals", "nonsense", "--edges", "5", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(atgraph(&["generate", "--alpha", "1.5", "--arrivals", "constant:1", "--edges", "5", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(atgraph(&["validate", "--seed", "1", "--criteria", "13"]).status.code(), Some(2));
}

#[test]
fn validate_writes_rows() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("rows.json");
    let o = atgraph(&["validate", "--seed", "1", "--criteria", "1,8", "--json", json.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("criterion  1 PASS")));
    assert!(text.lines().any(|l| l.starts_with("criterion  8 PASS")));
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for key in ["criterion", "statistic", "threshold", "passed", "seed", "samples", "runtime_ms"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
}
