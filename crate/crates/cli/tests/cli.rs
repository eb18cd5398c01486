//! End-to-end tests of the binary: output contracts, exit codes, and
//! the JSON round-trip invariant (every emitted literal re-parses to an
//! equal value).

use std::path::PathBuf;
use std::process::{Command, Output};

use lincomplex::exterior::AlternatingForm;
use lincomplex::gf::Field;
use lincomplex::projspace::Subspace;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lincomplex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn enumerate_counts_and_roundtrips() {
    let v = stdout_json(&[
        "enumerate",
        "--n",
        "3",
        "--q",
        "2",
        "--d",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(v["result"]["count"], 35);
    let field = Field::shared(2).unwrap();
    for item in v["result"]["items"].as_array().unwrap() {
        let s = Subspace::parse(&field, 3, item.as_str().unwrap()).unwrap();
        assert_eq!(s.to_string(), item.as_str().unwrap());
        assert_eq!(s.dim(), 1);
    }
}

#[test]
fn complex_member_count() {
    let v = stdout_json(&[
        "complex", "--n", "3", "--q", "2", "--h", "1", "--form", "01+23", "--count", "--format",
        "json",
    ]);
    assert_eq!(v["result"]["member_count"], 15);
    // the echoed form literal re-parses to the same covector
    let field = Field::shared(2).unwrap();
    let echoed = v["form"].as_str().unwrap();
    let form = AlternatingForm::parse(&field, 3, 2, echoed).unwrap();
    assert_eq!(form.to_literal(), echoed);
}

#[test]
fn singular_lists_seven_lines() {
    let v = stdout_json(&[
        "singular", "--n", "3", "--q", "2", "--h", "2", "--form", "012", "--format", "json",
    ]);
    assert_eq!(v["result"]["count"], 7);
    assert_eq!(v["result"]["kernel_dim"], 2);
    let field = Field::shared(2).unwrap();
    for s in v["result"]["singular"].as_array().unwrap() {
        let line = Subspace::parse(&field, 3, s.as_str().unwrap()).unwrap();
        assert_eq!(line.to_string(), s.as_str().unwrap());
    }
}

#[test]
fn polar_reports_singular_marker() {
    let v = stdout_json(&[
        "polar",
        "--n",
        "3",
        "--q",
        "2",
        "--h",
        "2",
        "--form",
        "012",
        "--subspace",
        "1000;0001",
        "--format",
        "json",
    ]);
    assert_eq!(v["result"]["singular"], true);
}

#[test]
fn search_exhaustive_pg42_exits_zero() {
    let out = run(&[
        "search",
        "--n",
        "4",
        "--q",
        "2",
        "--mode",
        "exhaustive",
        "--workers",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["report"]["forms_tested"], 1023);
    assert_eq!(v["result"]["report"]["forms_without_singular_line"], 0);
}

#[test]
fn search_report_is_deterministic() {
    let args = [
        "search",
        "--n",
        "5",
        "--q",
        "2",
        "--mode",
        "random",
        "--budget",
        "500",
        "--seed",
        "9",
        "--workers",
        "2",
        "--format",
        "json",
    ];
    let mut a = stdout_json(&args);
    let mut b = stdout_json(&args);
    a["result"]["report"]["elapsed_ms"] = 0.into();
    b["result"]["report"]["elapsed_ms"] = 0.into();
    assert_eq!(a, b);
}

#[test]
fn spread_checks_field_reduction() {
    let v = stdout_json(&[
        "spread",
        "--q",
        "2",
        "--field-reduction",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(v["result"]["size"], 21);
    assert_eq!(v["result"]["is_spread"], true);
    assert_eq!(v["result"]["is_geometric"], true);
}

#[test]
fn partition_check_fixture() {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/partition_pg42.txt");
    let v = stdout_json(&[
        "partition",
        "check",
        "--n",
        "4",
        "--q",
        "2",
        "--file",
        fixture.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(v["result"]["valid"], true);
    assert_eq!(v["result"]["linear"], false);
    assert!(v["result"]["witness"].as_str().unwrap().contains("vertex"));
}

#[test]
fn csv_format_emits_rows() {
    let out = run(&[
        "complex", "--n", "3", "--q", "2", "--h", "1", "--form", "01+23", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "member_count,15"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    // malformed literal
    let out = run(&[
        "complex", "--n", "3", "--q", "2", "--h", "1", "--form", "0x+1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // inconsistent parameters: h out of range for the ambient
    let out = run(&[
        "complex", "--n", "3", "--q", "2", "--h", "4", "--form", "01",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // clap-level unknown flag
    let out = run(&["enumerate", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // unsupported field order
    let out = run(&["enumerate", "--n", "3", "--q", "6", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // exhaustive search past the cap
    let out = run(&["search", "--n", "6", "--q", "2", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn polar_table_lists_every_source_subspace() {
    let v = stdout_json(&[
        "polar", "--n", "3", "--q", "2", "--h", "1", "--form", "01+23", "--all", "--format", "json",
    ]);
    let table = v["result"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 15); // one row per point of PG(3,2)
    assert!(table
        .iter()
        .all(|row| row["polar"].as_str().unwrap() != "SINGULAR"));
}
