//! End-to-end tests of the command-line surface: output shapes, exit
//! statuses, config handling, and golden-file checking.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_diracsea"));
    cmd.env_remove("DIRACSEA_CONFIG");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn expand_text_first_order() {
    let out = run(&["expand", "Ktilde", "--order", "1", "--layer", "b"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "k - kBs - sBk");
}

#[test]
fn expand_projector_core_json() {
    let out = run(&[
        "expand", "P", "--order", "0", "--layer", "pk", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["series"], "P");
    assert_eq!(doc["layer"], "pk");
    let terms = doc["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["word"], "p");
    assert_eq!(terms[0]["num"], "1");
    assert_eq!(terms[0]["den"], "2");
    assert_eq!(terms[1]["word"], "k");
    assert_eq!(terms[1]["num"], "-1");
}

#[test]
fn expand_x_below_second_order_is_empty() {
    let out = run(&[
        "expand", "X", "--order", "1", "--layer", "pk", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["terms"].as_array().unwrap().len(), 0);
}

#[test]
fn expand_latex_maps_the_separator() {
    let out = run(&[
        "expand", "Ktilde", "--order", "2", "--layer", "b", "--format", "latex",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\\mathcal{B}"));
    assert!(text.contains("\\pi^{2}"));
}

#[test]
fn unknown_series_is_a_usage_error() {
    let out = run(&["expand", "Nope", "--order", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = run(&["verify", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_exits_zero() {
    let out = run(&["verify", "all"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("[PASS] golden"));
    assert!(text.contains("[PASS] idempotence"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn verify_single_suite_with_order_override() {
    let out = run(&["verify", "idempotence", "--order-pk", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[PASS] idempotence (order 0"));
}

#[test]
fn verify_json_reports() {
    let out = run(&["verify", "coefficients", "--format", "json"]);
    assert!(out.status.success());
    let docs: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(docs[0]["suite"], "coefficients");
    assert_eq!(docs[0]["status"], "pass");
}

#[test]
fn golden_check_passes_on_shipped_file() {
    let out = run(&[
        "golden",
        "check",
        "crates/core/data/reference_expansions.tsv",
    ]);
    // resolve relative to the workspace root when run from elsewhere
    if !out.status.success() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/reference_expansions.tsv");
        let out = run(&["golden", "check", path]);
        assert!(out.status.success(), "{}", stdout(&out));
    }
}

#[test]
fn golden_check_corrupted_table_exits_one_with_one_witness() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/reference_expansions.tsv");
    let text = std::fs::read_to_string(path).unwrap();
    // flip a single sign
    let corrupted = text.replace("Ktilde\tkBkBk\t2\t-1\t1", "Ktilde\tkBkBk\t2\t1\t1");
    assert_ne!(text, corrupted);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(corrupted.as_bytes()).unwrap();
    let out = run(&["golden", "check", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert_eq!(text.matches("witness:").count(), 1, "{text}");
}

#[test]
fn golden_check_malformed_file_exits_two() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"Ktilde\tkBkBk\t2\t-1\n").unwrap();
    let out = run(&["golden", "check", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coeff_tables_print() {
    let out = run(&["coeff", "--max", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("c_1 = 1/2"));
    assert!(text.contains("e_1 = -1/2"));
    assert!(text.contains("f_(1,1) = -1/2"));
    assert!(text.contains("c(1,1) = pi^2 * -1/2"));

    let out = run(&["coeff", "--max", "3", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["c"][0]["num"], "1");
    assert_eq!(doc["c"][0]["den"], "2");
}

#[test]
fn config_file_changes_defaults() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "default_order_b = 1\noutput_format = json").unwrap();
    let out = bin()
        .env("DIRACSEA_CONFIG", file.path())
        .args(["expand", "Ktilde"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["order"], 1);
    assert_eq!(doc["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn missing_config_file_is_an_error() {
    let out = bin()
        .env("DIRACSEA_CONFIG", "/nonexistent/config")
        .args(["verify", "coefficients"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_round_trip_through_the_binary() {
    let out = run(&[
        "expand",
        "KtildeResClosed",
        "--order",
        "3",
        "--layer",
        "b",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let (doc, parsed) = diracsea::render::parse_expand_doc(&stdout(&out)).unwrap();
    assert_eq!(doc.series, "KtildeResClosed");
    let eng = diracsea::Engine::new();
    let expected = diracsea::expand_named(&eng, diracsea::SeriesId::KtildeResClosed, 3);
    assert_eq!(parsed, diracsea::render::ParsedPoly::B(expected));
}
