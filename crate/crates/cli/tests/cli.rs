use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fliplab(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fliplab"));
    cmd.args(args)
        .env_remove("FLIPLAB_CAP")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let out = fliplab(args, stdin, &[]);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn hexagon_pipeline_gives_fourteen_node_dot() {
    let pts = ok(&["gen", "convex", "--n", "6"], "");
    assert_eq!(pts.lines().count(), 6);
    let dot = ok(&["flipgraph", "--kind", "edge"], &pts);
    assert!(dot.starts_with("graph edge_flip_graph {"));
    assert_eq!(dot.lines().filter(|l| l.contains(" [label=") && !l.contains(" -- ")).count(), 14);
    // Every hexagon triangulation has 3 diagonals, each flippable.
    assert_eq!(dot.matches(" -- ").count(), 14 * 3 / 2);
    assert_eq!(dot, ok(&["flipgraph", "--kind", "edge"], &pts), "exports are deterministic");
}

#[test]
fn graph_formats_render() {
    let pts = ok(&["gen", "convex", "--n", "5", "--format", "json"], "");
    let gml = ok(&["flipgraph", "--format", "graphml"], &pts);
    assert_eq!(gml.matches("<node ").count(), 5);
    let json: Value = serde_json::from_str(&ok(&["flipgraph", "--format", "json"], &pts)).unwrap();
    assert_eq!(json["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn connectivity_agrees_for_points_and_exported_graphs() {
    let pts = ok(&["gen", "random", "--n", "6", "--seed", "4"], "");
    let direct: Value = serde_json::from_str(&ok(&["connectivity", "--kind", "edge"], &pts)).unwrap();
    let graph = ok(&["flipgraph", "--kind", "edge", "--format", "json"], &pts);
    let via: Value = serde_json::from_str(&ok(&["connectivity"], &graph)).unwrap();
    assert_eq!(direct["connectivity"], via["connectivity"]);
    assert_eq!(direct["nodes"], via["nodes"]);

    let bist: Value = serde_json::from_str(&ok(&["connectivity"], &pts)).unwrap();
    assert_eq!(bist["connectivity"], 3);
}

#[test]
fn link_export_carries_weights() {
    let pts = ok(&["gen", "convex", "--n", "6"], "");
    let dot = ok(&["link", "--id", "0"], &pts);
    assert!(dot.starts_with("graph link {"));
    assert!(dot.contains("weight=2") || dot.contains("weight=3"));
    for line in dot.lines().filter(|l| l.contains(" -- ")) {
        assert!(line.contains("weight=2") || line.contains("weight=3"), "{line}");
    }
}

#[test]
fn poset_json_reports_heights() {
    let pts = ok(&["gen", "convex", "--n", "5"], "");
    let p: Value = serde_json::from_str(&ok(&["poset"], &pts)).unwrap();
    assert_eq!(p["height_max"], 2);
    let nodes = p["nodes"].as_array().unwrap();
    // Five triangulations, five single diagonals, one pentagon.
    assert_eq!(nodes.len(), 11);
    let dot = ok(&["poset", "--format", "dot"], &pts);
    assert!(dot.starts_with("digraph hasse {"));
}

#[test]
fn mother_verdicts() {
    let verdict = |variant: &str| -> [bool; 3] {
        let v: Value = serde_json::from_str(&ok(&["regular", "--mother", variant], "")).unwrap();
        ["S", "T'", "T''"].map(|k| v[k]["regular"].as_bool().unwrap())
    };
    assert_eq!(verdict("concurrent"), [true, false, false]);
    let [s, t1, t2] = verdict("skew");
    assert!(!s && t1 != t2);
}

#[test]
fn regular_reports_witness_or_certificate() {
    let pts = ok(&["gen", "twisted", "--k", "3"], "");
    let v: Value = serde_json::from_str(&ok(&["regular", "--id", "0"], &pts)).unwrap();
    if v["regular"].as_bool().unwrap() {
        assert_eq!(v["witness_verified"], true);
    } else {
        assert_eq!(v["certificate_verified"], true);
    }
}

#[test]
fn verify_suite_passes_with_json_report() {
    let out = fliplab(&["verify", "--suite", "thm5", "--n-max", "7", "--format", "json"], "", &[]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["failed"], 0);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["id"] == "thm5.connectivity.convex-07"));
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.windows(2).all(|w| w[0] <= w[1]), "checks are sorted by id");
}

#[test]
fn verify_table_mirrors_json() {
    let table = ok(&["verify", "--suite", "mother"], "");
    let json: Value = serde_json::from_str(&ok(&["verify", "--suite", "mother", "--format", "json"], "")).unwrap();
    for c in json["checks"].as_array().unwrap() {
        assert!(table.contains(c["id"].as_str().unwrap()));
    }
}

#[test]
fn failing_checks_exit_one() {
    // A cap below the suite's instances turns every enumeration into a
    // failed check.
    let out = fliplab(&["verify", "--suite", "thm4", "--n-max", "5", "--cap", "4", "--format", "json"], "", &[]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["failed"].as_u64().unwrap() > 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("instance has 5 points, cap is 4"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fliplab(&["verify", "--suite", "thm9"], "", &[]).status.code(), Some(2));
    assert_eq!(fliplab(&["frobnicate"], "", &[]).status.code(), Some(2));
    let bad = fliplab(&["flipgraph"], "0 0\n1 1\n2 2\n", &[]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("one point per line"));
    assert_eq!(fliplab(&["gen", "convex"], "", &[]).status.code(), Some(2));
}

#[test]
fn cap_comes_from_flag_or_environment() {
    let pts = ok(&["gen", "convex", "--n", "6"], "");
    let out = fliplab(&["flipgraph"], &pts, &[("FLIPLAB_CAP", "5")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("instance has 6 points, cap is 5"));
    let out = fliplab(&["flipgraph", "--cap", "4"], &pts, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(fliplab(&["flipgraph"], &pts, &[("FLIPLAB_CAP", "6")]).status.success());
}
