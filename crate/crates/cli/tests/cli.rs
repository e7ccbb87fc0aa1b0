use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn rdrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdrlab"))
        .args(args)
        .env_remove("RDRLAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn rdr_reports_witness() {
    let out = rdrlab(&["rdr", "gp:12,5", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rdr"], true);
    assert_eq!(v["schema"], "rdrlab/rdr/v1");
    assert_eq!(v["witness"]["weight"], 12);
}

#[test]
fn rdr_with_wrong_degree_is_negative() {
    let v = json(&rdrlab(&["rdr", "gp:12,5", "--d", "4"]));
    assert_eq!(v["rdr"], false);
}

#[test]
fn census_row_matches_known_counts() {
    let out = rdrlab(&["census", "12", "--row"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for (key, want) in [("order", 12), ("bc", 5), ("rdr3", 3), ("vt", 2), ("vt_rdr3", 1), ("undecided", 0)] {
        assert_eq!(v[key], want, "{key}");
    }
}

#[test]
fn census_emits_graph6_lines() {
    let out = rdrlab(&["census", "10", "--emit-g6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    for line in text.lines() {
        let g = rdrlab::graph6::decode(line).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
    }
}

#[test]
fn iso_accepts_specs_and_graph6() {
    let v = json(&rdrlab(&["iso", "htg:2,12,6", "gp:12,5"]));
    assert_eq!(v["isomorphic"], true);
    let k33 = rdrlab::graph6::encode(&rdrlab::families::complete_bipartite(3).unwrap());
    let v = json(&rdrlab(&["iso", &k33, "mobius:3"]));
    assert_eq!(v["isomorphic"], true);
    let v = json(&rdrlab(&["iso", "prism:6", "mobius:6"]));
    assert_eq!(v["isomorphic"], false);
}

#[test]
fn signature_and_gamma() {
    let v = json(&rdrlab(&["signature", "htg:3,6,3"]));
    assert_eq!(v["girth"], 6);
    assert_eq!(v["signature"], serde_json::json!([4, 4, 4]));
    let v = json(&rdrlab(&["gamma", "cycle:8", "--k", "2"]));
    assert_eq!(v["gamma"], 4);
    assert_eq!(v["status"], "exact");
}

#[test]
fn criteria_report_status() {
    let v = json(&rdrlab(&["criteria", "prism:6", "--krit", "1"]));
    assert_eq!(v["krit1"]["status"], "witness");
    assert!(v.get("krit2").is_none());
    let v = json(&rdrlab(&["criteria", "gp:5,2"]));
    assert_eq!(v["krit2"]["status"], "precondition-failed");
}

#[test]
fn budget_exhaustion_exits_three() {
    let out = rdrlab(&["rdr", "htg:4,12,2", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "undecided");
    let out = Command::new(env!("CARGO_BIN_EXE_rdrlab"))
        .args(["gamma", "gp:12,5", "--k", "3"])
        .env("RDRLAB_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rdrlab(&["gamma", "gp:12,5"]).status.code(), Some(2));
    assert_eq!(rdrlab(&["rdr", "gp:4,2"]).status.code(), Some(2));
    assert_eq!(rdrlab(&["census", "7"]).status.code(), Some(2));
    assert_eq!(rdrlab(&["rdr", "!!"]).status.code(), Some(2));
}

#[test]
fn verify_basic_passes() {
    let out = rdrlab(&["verify", "basic", "--max", "12", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["agree"], v["scanned"]);
}

#[test]
fn switch_explore_reads_graph6_file() {
    let census = rdrlab(&["census", "12", "--emit-g6"]);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    let mut rdr = Vec::new();
    for line in String::from_utf8(census.stdout).unwrap().lines() {
        let g = rdrlab::graph6::decode(line).unwrap();
        if rdrlab::rainbow::is_d_rdr(&g).is_some() {
            rdr.push(line.to_string());
        }
    }
    writeln!(file, "{}", rdr.join("\n")).unwrap();
    let v = json(&rdrlab(&["switch-explore", file.path().to_str().unwrap()]));
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(v["connected"], true);
}

#[test]
fn output_is_deterministic_across_workers() {
    let a = rdrlab(&["census", "14", "--emit-g6", "--workers", "1"]);
    let b = rdrlab(&["census", "14", "--emit-g6", "--workers", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
