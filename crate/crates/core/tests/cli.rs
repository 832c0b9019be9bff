//! End-to-end runs of the `sepkit` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("samples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn sepkit(args: &[&str]) -> Output {
    sepkit_env(args, None)
}

fn sepkit_env(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sepkit"));
    c.args(args).env_remove("SEPKIT_CACHE");
    if let Some(dir) = cache {
        c.env("SEPKIT_CACHE", dir);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn gamma3_from_every_engine() {
    let o = sepkit(&["hstar", "gamma:2", "--engine", "all", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["hstar"], serde_json::json!([1, 10, 22, 10, 1]));
    assert_eq!(v["agree"], true);
    let engines: Vec<&str> = v["engines"].as_array().unwrap().iter().map(|e| e["engine"].as_str().unwrap()).collect();
    assert_eq!(engines, ["ehrhart", "triangulation", "pointing", "closed"]);
    assert_eq!(v["counts"], serde_json::json!([1, 15, 87, 305, 801]));
    assert_eq!(v["gamma"], serde_json::json!([1, 6, 4]));
    assert_eq!(v["volume"], 44);
}

#[test]
fn counterexample_by_triangulation() {
    let o = sepkit(&["hstar", "dual-k3n:6", "--engine", "triangulation", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["gamma"], serde_json::json!([1, 16, 124, 596, 914, -148]));
    assert_eq!(v["predicates"]["symmetric"], true);
    assert_eq!(v["predicates"]["gamma_nonnegative"], false);
    assert_eq!(v["volume"], 26100);
}

#[test]
fn segment_file() {
    let o = sepkit(&["hstar", &sample("segment.json"), "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["hstar"], serde_json::json!([1, 1]));
}

#[test]
fn verify_commands_pass() {
    let o = sepkit(&["verify", "identities", "--lmax", "8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let o = sepkit(&["verify", "contraction", &sample("c4.graph")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = sepkit(&["verify", "trees", "--n", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v[0]["check"], "tree_count_is_volume");
    assert_eq!(v[0]["detail"]["trees"], 1968);
    let o = sepkit(&["verify", "pointing", &sample("k3.graph")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = sepkit(&["verify", "parallel", &sample("c4.graph"), &sample("k3.graph")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn tree_listings() {
    let o = sepkit(&["trees", "gamma:2", "--classify"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 44);
    assert!(out.lines().all(|l| l.contains("chords=") && l.contains("away=")));
    let o = sepkit(&["trees", &sample("k3.graph")]);
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = sepkit(&["trees", "gamma:1"]);
    assert_eq!(stdout(&o).lines().count(), 6);
    // the pointing counts reproduce h*
    let o = sepkit(&["trees", "gamma:2", "--format", "json"]);
    let mut h = [0u64; 5];
    for t in json(&o).as_array().unwrap() {
        h[t["away"].as_u64().unwrap() as usize] += 1;
    }
    assert_eq!(h, [1, 10, 22, 10, 1]);
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = ["hstar", "gamma:3", "--engine", "all", "--format", "json"];
    let one = sepkit(&[&args[..], &["--workers", "1"]].concat());
    let four = sepkit(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let one = sepkit(&["facets", "cycle:5", "--workers", "1"]);
    let three = sepkit(&["facets", "cycle:5", "--workers", "3"]);
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(stdout(&one).lines().count(), 30);
}

#[test]
fn cache_hits_reproduce_results() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hstar", "complete:4", "--engine", "all", "--format", "json"];
    let cold = sepkit_env(&args, Some(dir.path()));
    assert_eq!(code(&cold), 0);
    let entries: Vec<_> = std::fs::read_dir(dir.path().join("ehrhart")).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let warm = sepkit_env(&[&args[..], &["--cache-verify"]].concat(), Some(dir.path()));
    assert_eq!(code(&warm), 0);
    assert_eq!(cold.stdout, warm.stdout);
    let plain = sepkit(&args);
    assert_eq!(cold.stdout, plain.stdout);

    // a corrupted entry is caught by verification
    let entry = entries[0].as_ref().unwrap().path();
    std::fs::write(&entry, "[\"1\",\"2\",\"3\",\"4\"]").unwrap();
    let checked = sepkit_env(&[&args[..], &["--cache-verify"]].concat(), Some(dir.path()));
    assert_eq!(code(&checked), 1);
}

#[test]
fn cache_dir_flag_is_overridden_by_env() {
    let flag = tempfile::tempdir().unwrap();
    let env = tempfile::tempdir().unwrap();
    let o = sepkit_env(
        &["hstar", "cycle:4", "--engine", "ehrhart", "--cache-dir", flag.path().to_str().unwrap()],
        Some(env.path()),
    );
    assert_eq!(code(&o), 0);
    assert!(env.path().join("ehrhart").exists());
    assert!(!flag.path().join("ehrhart").exists());
}

#[test]
fn exit_codes() {
    let o = sepkit(&["hstar", "dual-k3n:6", "--engine", "ehrhart", "--budget-box", "1000"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let o = sepkit(&["hstar", "dual-k3n:6", "--budget-bases", "10"]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&sepkit(&["hstar", "/no/such/file.graph"])), 4);
    assert_eq!(code(&sepkit(&["hstar", "cycle:4", "--engine", "closed"])), 4);
    assert_eq!(code(&sepkit(&["hstar", "gamma:x"])), 4);
    assert_eq!(code(&sepkit(&["frobnicate"])), 4);
    assert_eq!(code(&sepkit(&["hstar", "cycle:4", "--budget-box", "0"])), 4);
    assert_eq!(code(&sepkit(&["verify", "contraction", "complete:3"])), 4, "K3 is not bipartite");
    assert_eq!(code(&sepkit(&["--help"])), 0);
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (builtin, file) in [("gamma:2", "g.graph"), ("dual-k3n:3", "m.json")] {
        let o = sepkit(&["export", builtin]);
        assert_eq!(code(&o), 0);
        let path = dir.path().join(file);
        std::fs::write(&path, &o.stdout).unwrap();
        let a = json(&sepkit(&["hstar", builtin, "--format", "json"]));
        let b = json(&sepkit(&["hstar", path.to_str().unwrap(), "--format", "json"]));
        assert_eq!(a["hstar"], b["hstar"]);
    }
}

#[test]
fn table_and_summaries() {
    let o = sepkit(&["gamma-table", "--nmax", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[2], "2,44,1 10 22 10 1,1 6 4,true");
    let o = sepkit(&["facets", &sample("k3.graph"), "--summary"]);
    assert_eq!(json(&o), serde_json::json!({"facets": 6, "f": [1, 6, 6], "h": [1, 4, 1]}));
    let o = sepkit(&["hstar", "cycle:4", "--engine", "ehrhart", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "input,dim,volume,hstar,gamma,symmetric,unimodal,gamma_nonnegative,agree\ncycle:4,3,12,1 5 5 1,1 2,true,true,true,true\n"
    );
}
