use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn afideal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afideal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn spec_path(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("specs")
        .join(name)
        .display()
        .to_string()
}

fn json_of(args: &[&str]) -> Value {
    let out = afideal(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).unwrap()
}

/// Minimal structural DOT reader: one `digraph` with balanced braces,
/// `;`-terminated statements, and edges only between declared nodes.
/// Returns (node count, edge count).
fn parse_dot(text: &str) -> (usize, usize) {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().expect("header");
    assert!(
        header.starts_with("digraph ") && header.ends_with('{'),
        "header {header:?}"
    );
    let mut depth = 1;
    let mut nodes = BTreeSet::new();
    let mut edges = 0;
    for line in lines {
        if line == "}" {
            depth -= 1;
            continue;
        }
        assert!(depth > 0, "content after closing brace");
        if line.ends_with('{') {
            assert!(line.starts_with("subgraph "), "unexpected block {line:?}");
            depth += 1;
            continue;
        }
        assert!(line.ends_with(';'), "unterminated statement {line:?}");
        let stmt = line.trim_end_matches(';');
        let body = stmt.split(" [").next().unwrap();
        if let Some((a, b)) = body.split_once(" -> ") {
            assert!(
                nodes.contains(a) && nodes.contains(b),
                "edge to undeclared node: {line:?}"
            );
            edges += 1;
        } else if stmt.contains('=') && !stmt.contains('[') {
            // graph attribute
        } else if !matches!(body, "node" | "edge" | "graph") {
            assert!(
                body.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
                "bad id {body:?}"
            );
            assert!(nodes.insert(body.to_string()), "duplicate node {body}");
        }
        if let Some(attrs) = stmt.split_once(" [").map(|(_, a)| a) {
            assert!(attrs.ends_with(']'), "unterminated attribute list {line:?}");
            assert_eq!(attrs.matches('"').count() % 2, 0, "unbalanced quotes {line:?}");
        }
    }
    assert_eq!(depth, 0, "unbalanced braces");
    (nodes.len(), edges)
}

#[test]
fn lattice_count() {
    let out = afideal(&["lattice", "--shape", "4", "--count"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "42\n");
}

#[test]
fn lattice_meet_irreducibles_of_direct_sum() {
    let out = afideal(&["lattice", "--shape", "2,3", "--meet-irreducibles"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 9);
}

#[test]
fn lattice_classify_corner() {
    let out = afideal(&["lattice", "--shape", "4", "--classify-unit", "2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("k4=true prime=false"), "{text}");
}

#[test]
fn lattice_report_and_hasse_agree() {
    let report = json_of(&["lattice", "--shape", "3"]);
    assert_eq!(report["ideal_count"], 14);
    assert_eq!(report["meet_irreducible_count"], 6);
    let dot = stdout(&afideal(&["lattice", "--shape", "3", "--dot", "hasse"]));
    let (nodes, edges) = parse_dot(&dot);
    assert_eq!(nodes, 14);
    assert!(edges >= 13);
}

#[test]
fn lattice_cap_is_input_error() {
    let out = afideal(&["lattice", "--shape", "30", "--count"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap exceeded"));
}

#[test]
fn bad_shape_and_unit_are_input_errors() {
    assert_eq!(afideal(&["lattice", "--shape", "2,x"]).status.code(), Some(2));
    assert_eq!(afideal(&["lattice", "--shape", "0"]).status.code(), Some(2));
    assert_eq!(
        afideal(&["lattice", "--shape", "4", "--classify-unit", "3,2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn topology_small_shapes() {
    for (n, ideals) in [("1", 2), ("3", 14), ("4", 42)] {
        let report = json_of(&["topology", "--shape", n]);
        for k in ["k1", "k2", "k3", "k4"] {
            assert_eq!(report["kuratowski"][k]["status"], "holds", "T{n} {k}");
        }
        assert_eq!(report["bijection"]["ideal_count"], ideals);
        assert_eq!(report["bijection"]["closed_set_count"], ideals);
        assert_eq!(report["bijection"]["bijective"], true);
    }
}

#[test]
fn specialization_dot_round_trips() {
    let report = json_of(&["topology", "--shape", "4"]);
    let dot = stdout(&afideal(&["topology", "--shape", "4", "--dot", "specialization"]));
    let (nodes, edges) = parse_dot(&dot);
    assert_eq!(nodes, report["points"].as_array().unwrap().len());
    assert_eq!(edges, report["specialization"].as_array().unwrap().len());
}

#[test]
fn counterexample_text() {
    let out = afideal(&["tower", "--counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("{a,b,e,f,h}"), "{text}");
    assert!(text.contains("{e,f,h,i,j}"), "{text}");
}

#[test]
fn twist_search_reports_witnesses() {
    let out = afideal(&["tower", "--twist-search"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("candidates: 35\nwitnesses: 1\n"), "{text}");
    let report = json_of(&["tower", "--twist-search", "--json"]);
    assert_eq!(
        report["twist_search"]["witnesses"][0]["strands"],
        serde_json::json!([[1, 2, 7, 8], [3, 4, 5, 6]])
    );
}

#[test]
fn refinement_spec_is_all_standard_form() {
    let report = json_of(&["tower", &spec_path("refinement_depth3.json")]);
    let chains = &report["chains"];
    assert_eq!(chains["chain_count"], chains["standard_form_count"]);
    assert_eq!(chains["containment_failures"], 0);
    assert!(chains["chains"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["k4_limit"] == true));
    assert_eq!(
        report["decomposition"]["sequences"],
        report["decomposition"]["recovered"]
    );
    assert_eq!(report["gelfand"]["violations"], 0);
    assert!(report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn counterexample_spec_skips_standard_only_analyses() {
    let report = json_of(&["tower", &spec_path("counterexample.json")]);
    assert_eq!(report["standard_or_refinement"], false);
    assert_eq!(report["chains"]["containment_failures"], 0);
    assert!(report["chains"]["standard_form_count"].as_u64() < report["chains"]["chain_count"].as_u64());
    assert!(report.get("decomposition").is_none());
    assert_eq!(report["skipped"].as_array().unwrap().len(), 1);
}

#[test]
fn counterexample_alias_kind() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alias.json");
    std::fs::write(
        &path,
        r#"{"schema_version": 1, "shapes": [[4], [8]], "embeddings": [{"kind": "paper_counterexample"}]}"#,
    )
    .unwrap();
    let report = json_of(&["tower", path.to_str().unwrap()]);
    assert_eq!(
        report["embeddings"][0]["strands"][0]["map"],
        serde_json::json!([1, 2, 5, 6])
    );
}

#[test]
fn invalid_specs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("syntax.json", "{"),
        (
            "version.json",
            r#"{"schema_version": 9, "shapes": [[2]], "embeddings": []}"#,
        ),
        (
            "overlap.json",
            r#"{"schema_version": 1, "shapes": [[2], [4]], "embeddings": [{"kind": "strands", "strands": [{"map": [1, 2]}, {"map": [2, 3]}]}]}"#,
        ),
        (
            "nonunital.json",
            r#"{"schema_version": 1, "shapes": [[2], [4]], "embeddings": [{"kind": "strands", "strands": [{"map": [1, 2]}]}]}"#,
        ),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let out = afideal(&["tower", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
    assert_eq!(
        afideal(&["tower", "/nonexistent/spec.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn bratteli_dot_matches_levels() {
    let path = spec_path("mixed_blocks.json");
    let report = json_of(&["tower", &path]);
    let blocks: usize = report["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["blocks"].as_array().unwrap().len())
        .sum();
    let strands: usize = report["embeddings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["strands"].as_array().unwrap().len())
        .sum();
    let dot = stdout(&afideal(&["tower", &path, "--dot", "bratteli"]));
    assert_eq!(parse_dot(&dot), (blocks, strands));
}

#[test]
fn dot_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("hasse.dot");
    let out = afideal(&[
        "lattice",
        "--shape",
        "2",
        "--dot",
        "hasse",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let (nodes, _) = parse_dot(&std::fs::read_to_string(out_path).unwrap());
    assert_eq!(nodes, 5);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["lattice".to_string(), "--shape".into(), "2,2".into()],
        vec!["topology".into(), "--shape".into(), "3".into()],
        vec!["tower".into(), spec_path("standard_depth3.json")],
        vec!["tower".into(), spec_path("counterexample.json")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = afideal(&args);
        let b = afideal(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
