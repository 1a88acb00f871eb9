use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use indpoly::families::{build_named_graph, NamedTree};
use serde_json::Value;

const T1_POLY: &str = "1 + 26x + 300x^2 + 2040x^3 + 9142x^4 + 28551x^5 + 63933x^6 + 103736x^7 \
+ 121376x^8 + 100144x^9 + 55499x^10 + 18683x^11 + 2979x^12 + 51x^13 + x^14";

fn indpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("one JSON object")
}

#[test]
fn compute_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write(dir.path(), "k2.g6", "A_\n");
    let o = indpoly(&["compute", "--input", &k2, "--format", "graph6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("I(x) = 1 + 2x\n"));
    assert!(text.contains("log-concave: yes"));

    let tri = write(dir.path(), "tri.txt", "n 3\n0 1\n1 2\n0 2\n");
    let o = indpoly(&[
        "compute", "--input", &tri, "--format", "edgelist", "--method", "brute",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("I(x) = 1 + 3x\n"));

    let o = indpoly(&[
        "compute", "--input", &tri, "--format", "edgelist", "--method", "tree",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compute_t1_from_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write(
        dir.path(),
        "t1.txt",
        &build_named_graph(NamedTree::T1).to_edge_list(),
    );
    let o = indpoly(&["compute", "--input", &t1, "--format", "edgelist"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains(&format!("I(x) = {T1_POLY}\n")));
    assert!(text.contains("method = tree"));
    assert!(
        text.contains("violation at k = 13 (alpha - k = 1): s_k^2 = 2601 < s_(k-1)*s_(k+1) = 2979")
    );

    let o = indpoly(&["compute", "--input", &t1, "--format", "edgelist", "--json"]);
    let v = json(&o);
    assert_eq!(v["alpha"], 14);
    assert_eq!(v["polynomial"]["coeffs"][12], "2979");
    assert_eq!(v["log_concavity"]["log_concave"], false);

    let o = indpoly(&["check", "--input", &t1, "--format", "edgelist"]);
    assert_eq!(o.status.code(), Some(1));
    let o = indpoly(&["check", "--input", &t1, "--format", "edgelist", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["unimodality"]["is_unimodal"], true);
}

#[test]
fn family_reports() {
    let o = indpoly(&[
        "family",
        "--structure",
        "3kk1",
        "--k",
        "4",
        "--emit",
        "report",
        "--json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["closed_form_matches"], true);
    assert_eq!(v["violation_below_top"], true);
    assert_eq!(v["top_coefficients"]["top_exponent"], 2 * 4 + 7);
    let violations = v["log_concavity"]["violations"].as_array().unwrap();
    assert!(violations.iter().any(|x| x["k"] == 2 * 4 + 6));

    let o = indpoly(&[
        "family",
        "--structure",
        "3skk2",
        "--k",
        "3",
        "--emit",
        "report",
        "--json",
    ]);
    let v = json(&o);
    assert_eq!(v["violation_below_top"], true);
    assert_eq!(v["log_concavity"]["log_concave"], false);

    let o = indpoly(&["family", "--structure", "3kk", "--k", "4"]);
    assert_eq!(stdout(&o).trim_end(), T1_POLY);

    let o = indpoly(&[
        "family",
        "--structure",
        "3kk",
        "--k",
        "4",
        "--emit",
        "graph6",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim_end().len(),
        1 + (26 * 25 / 2usize).div_ceil(6)
    );
}

#[test]
fn named_trees_match() {
    for tree in ["t1", "t2", "ex28", "ex35"] {
        let o = indpoly(&["named", "--tree", tree, "--emit", "report", "--json"]);
        assert!(o.status.success(), "{tree}");
        assert_eq!(json(&o)["matches_published"], true, "{tree}");
    }
}

#[test]
fn thresholds_print_root_and_first_k() {
    for (name, root, first) in [
        ("3kk1", "3.2329", "4"),
        ("3skk2", "2.8361", "3"),
        ("3skk", "3.3187", "4"),
    ] {
        let o = indpoly(&["thresholds", "--structure", name]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.starts_with(&format!("threshold: {root}")), "{text}");
        assert!(text.contains(&format!("first violating k: {first}\n")));
    }
    let o = indpoly(&["thresholds", "--structure", "3kk"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = indpoly(&["verify"]);
    let b = indpoly(&["verify"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("FAIL"));

    let v = json(&indpoly(&["verify", "--json"]));
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["failed"], 0);
}

#[test]
fn verify_notices_a_corrupted_tree() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_named_graph(NamedTree::Ex28);
    let mut edges: Vec<_> = g.edges().collect();
    // move one leaf to a different parent
    let (u, v) = edges.pop().unwrap();
    let leaf = if g.degree(u) == 1 { u } else { v };
    let other = (0..g.order()).find(|&w| w != u && w != v).unwrap();
    edges.push((leaf, other));
    let mut text = format!("n {}\n", g.order());
    for (a, b) in edges {
        text.push_str(&format!("{a} {b}\n"));
    }
    let path = write(dir.path(), "ex28.txt", &text);
    let o = indpoly(&["verify", "--ex28-edges", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL ex28: polynomial"));
}

#[test]
fn enumerate_and_search() {
    let o = indpoly(&["enumerate", "--n", "12", "--count-only"]);
    assert_eq!(stdout(&o), "551\n");
    let o = indpoly(&["enumerate", "--n", "6"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l.starts_with('E')));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.jsonl");
    let ckpt = dir.path().join("ckpt.json");
    let o = indpoly(&[
        "search",
        "--min-n",
        "1",
        "--max-n",
        "12",
        "--threads",
        "2",
        "--out",
        out.to_str().unwrap(),
        "--checkpoint",
        ckpt.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
    assert!(String::from_utf8_lossy(&o.stderr).contains("n = 12: 551 trees scanned, 0 found"));

    // offset at least 0 accepts every non-log-concave tree; none below 26
    let o = indpoly(&[
        "search",
        "--min-n",
        "9",
        "--max-n",
        "10",
        "--predicate",
        "offset-at-least:0",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
}

#[test]
fn exit_codes() {
    assert_eq!(
        indpoly(&["family", "--structure", "4kk", "--k", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        indpoly(&["family", "--structure", "3kk", "--k", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(indpoly(&["enumerate", "--n", "33"]).status.code(), Some(2));
    assert_eq!(
        indpoly(&["search", "--min-n", "5", "--max-n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        indpoly(&["search", "--min-n", "1", "--max-n", "3", "--resume"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        indpoly(&[
            "compute",
            "--input",
            "/nonexistent/file",
            "--format",
            "graph6"
        ])
        .status
        .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "0 1\n");
    assert_eq!(
        indpoly(&["compute", "--input", &bad, "--format", "edgelist"])
            .status
            .code(),
        Some(3)
    );
}
