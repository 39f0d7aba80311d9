use std::process::{Command, Output};

use lensdim::render::{parse_csv, parse_jsonl, rows_to_csv, rows_to_jsonl};
use lensdim_core::DerivationNode;

fn lensdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensdim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn table_matches_golden() {
    let out = lensdim(&["table", "--e", "2", "--max-m", "32", "--format", "csv"]);
    assert!(out.status.success());
    let golden = include_str!("golden/table_e2_m32.csv");
    assert_eq!(stdout(&out), golden);
}

#[test]
fn table_outputs_round_trip() {
    for e in ["1", "3"] {
        let csv = stdout(&lensdim(&["table", "--e", e, "--max-m", "64", "--format", "csv"]));
        assert_eq!(rows_to_csv(&parse_csv(&csv).unwrap()), csv);
        let jsonl = stdout(&lensdim(&["table", "--e", e, "--max-m", "64", "--format", "jsonl"]));
        let rows = parse_jsonl(&jsonl).unwrap();
        assert_eq!(rows.len(), 64);
        assert_eq!(rows_to_jsonl(&rows), jsonl);
        assert_eq!(rows, parse_csv(&csv).unwrap());
    }
}

#[test]
fn table_rows_carry_known_values() {
    let rows = parse_csv(&stdout(&lensdim(&["table", "--e", "2", "--max-m", "12", "--format", "csv"]))).unwrap();
    let row = |m: u64| rows.iter().find(|r| r.m == m).unwrap();
    assert_eq!((row(7).upper, row(7).eff), (26, 4));
    assert_eq!(row(11).upper, 41);
    let e1 = parse_csv(&stdout(&lensdim(&[
        "table", "--e", "1", "--max-m", "11", "--format", "csv", "--external",
    ])))
    .unwrap();
    assert_eq!(e1[10].upper, 39);
}

#[test]
fn query_examples() {
    let out = stdout(&lensdim(&["query", "--m", "8", "--e", "3"]));
    assert!(out.contains("exact: 33"), "{out}");
    let out = stdout(&lensdim(&["query", "--m", "7", "--e", "3"]));
    assert!(out.contains("lower 24") && out.contains("upper 27"), "{out}");
    let out = stdout(&lensdim(&["query", "--m", "1", "--e", "4"]));
    assert!(out.contains("exact: 5"), "{out}");
    assert!(out.contains("manifold dimension 3"));
}

#[test]
fn plain_query_hides_flagged_bounds() {
    for (m, e) in [("11", "1"), ("27", "1"), ("255", "1"), ("23", "1")] {
        let out = stdout(&lensdim(&["query", "--m", m, "--e", e, "--all"]));
        assert!(!out.contains("CONJECTURAL") && !out.contains("external-input"), "{out}");
    }
    let out = stdout(&lensdim(&["query", "--m", "11", "--e", "1", "--all", "--external"]));
    assert!(out.contains("external-input"));
}

#[test]
fn query_formats() {
    let out = stdout(&lensdim(&["query", "--m", "13", "--e", "1", "--format", "csv"]));
    let rows = parse_csv(&out).unwrap();
    assert_eq!((rows[0].m, rows[0].upper), (13, 50));
    let out = stdout(&lensdim(&["query", "--m", "13", "--e", "1", "--format", "jsonl", "--all"]));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["upper"]["dim"], 50);
    let out = stdout(&lensdim(&["query", "--m", "13", "--e", "1", "--format", "md"]));
    assert!(out.starts_with("| m | dim |"));
}

#[test]
fn derive_examples() {
    let out = stdout(&lensdim(&["derive", "--m", "3", "--e", "5"]));
    assert!(out.contains("sigma + beta > 4j + 2: 2 + 5 > 6 ... ok"), "{out}");
    assert!(out.contains("2 eta_{1,5} ⊂ R^7"));
    assert!(!out.contains("FAILED"));

    let out = lensdim(&["derive", "--m", "7", "--e", "2", "--format", "jsonl"]);
    assert!(out.status.success());
    let tree = DerivationNode::from_json(stdout(&out).trim()).unwrap();
    assert!(tree.replay().unwrap() > 0);
    let text = tree.render_text();
    assert!(text.contains("sigma(3, 2) = 5"));
    assert!(text.contains("L_{3,2} ⊂ R^11"));

    let out = lensdim(&["derive", "--m", "8", "--e", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lift_and_verify() {
    let out = stdout(&lensdim(&["lift", "--ell", "6"]));
    assert!(out.contains("(23, 27, 39)") && out.contains("R^94"), "{out}");
    assert!(out.contains("BO(39)"));
    let out = lensdim(&["verify", "lifting"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("checks passed"));
}

#[test]
fn exit_codes() {
    assert_eq!(lensdim(&["query", "--m", "x", "--e", "1"]).status.code(), Some(1));
    assert_eq!(lensdim(&["query", "--m", "3", "--e", "0"]).status.code(), Some(1));
    assert_eq!(lensdim(&["query", "--m", "3", "--e", "1", "--k", "4"]).status.code(), Some(1));
    assert_eq!(lensdim(&["table", "--e", "1", "--max-m", "0"]).status.code(), Some(1));
    assert_eq!(lensdim(&["verify", "nowhere"]).status.code(), Some(1));
    assert_eq!(lensdim(&["--help"]).status.code(), Some(0));
    assert_eq!(lensdim(&[]).status.code(), Some(1));
}
