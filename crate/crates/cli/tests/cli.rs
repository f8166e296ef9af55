//! End-to-end tests of the `disent` binary: output contents, exit codes,
//! and JSON determinism.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn divdiff_prints_double_point_generators() {
    let out = run(&["divdiff", &fixture("germs/b_infty.json"), "--k", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("x1 + x2"), "{text}");
    assert!(text.contains("u1^2"), "{text}");
}

#[test]
fn divdiff_triple_points_include_the_constant() {
    let out = run(&["divdiff", &fixture("germs/s_infty.json"), "--k", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert!(lines.contains(&"1"), "missing constant generator: {lines:?}");
}

#[test]
fn divdiff_rejects_k_below_two() {
    let out = run(&["divdiff", &fixture("germs/s_infty.json"), "--k", "1"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn dimcheck_passes_and_fails_by_verdict() {
    let out = run(&["dimcheck", &fixture("germs/b_infty.json")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("verdict: dimensionally correct"));

    let out = run(&["dimcheck", &fixture("germs/degenerate.json")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("NOT dimensionally correct"));
    assert!(stdout(&out).contains("MISMATCH"));
}

#[test]
fn dimcheck_rejects_malformed_germs() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{\"n\": 2, \"N\": 3, \"components\": [\"x^2 +\"]}}").unwrap();
    let out = run(&["dimcheck", file.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn dimcheck_budget_exhaustion_is_exit_four() {
    let out = run(&["dimcheck", &fixture("germs/b_family.json"), "--budget", "1"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn image_reports_betti_numbers_and_bounds() {
    let out = run(&[
        "image",
        &fixture("diagrams/binfty_topleft.json"),
        "--profile",
        "2,3,1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("(1, 1, 1)"), "{text}");
    assert!(text.contains("bounds verdict: consistent"), "{text}");
    assert!(text.contains("E^1"), "{text}");
    assert!(text.contains("E^2 = E^inf"), "{text}");
}

#[test]
fn image_on_a_non_chain_map_is_a_math_error() {
    let out = run(&["image", &fixture("diagrams/bad_chain_map.json")]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("not a double complex"));
}

#[test]
fn validate_lists_broken_relations() {
    let out = run(&["validate", &fixture("diagrams/broken_braid.json")]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("braid relation"), "{text}");

    let out = run(&["validate", &fixture("diagrams/binfty_topleft.json")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all structural invariants hold"));
}

#[test]
fn validate_flags_non_chain_maps_without_aborting() {
    let out = run(&["validate", &fixture("diagrams/bad_chain_map.json")]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(stdout(&out).contains("does not commute"));
}

#[test]
fn validate_rejects_empty_files() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let out = run(&["validate", file.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = [
        "image",
        &fixture("diagrams/b2.json"),
        "--profile",
        "2,3,0",
        "--json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(parsed["outputs"]["analysis"]["betti"], serde_json::json!([1, 0, 2]));
    assert_eq!(parsed["checks"][1]["pass"], serde_json::json!(true));
}

#[test]
fn bounds_prints_both_degree_readings() {
    let out = run(&["bounds", "2", "3", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("q\\k  1  2  3"), "{text}");
    assert!(text.contains("{0, 1, 2}"), "{text}");
    assert!(text.contains("{0, 2, 3}"), "{text}");
}

#[test]
fn bounds_rejects_bad_profiles() {
    let out = run(&["bounds", "3", "2", "1"]);
    assert_eq!(code(&out), 2);
    let out = run(&["bounds", "2", "3", "5"]);
    assert_eq!(code(&out), 2);
}
