//! End-to-end tests of the `almostchar` binary: every subcommand, the
//! documented exit codes, and CTAB round-trips through real process runs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use almostchar::ctabio;
use almostchar::cyclotomic::Cyc;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_almostchar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_table(name: &str, group: &str) -> PathBuf {
    let out = run(&["table", "compute", "--group", group]);
    assert!(
        out.status.success(),
        "table compute {group}: {}",
        stderr(&out)
    );
    let path = tmp_path(name);
    std::fs::write(&path, stdout(&out)).expect("write table");
    path
}

#[test]
fn fourier_prints_the_z2_quarter_matrix() {
    let out = run(&["fourier", "--gamma", "Z2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(g2,eps)"));
    assert!(text.contains("1/2"));
    assert!(text.contains("-1/2"));
}

#[test]
fn unknown_gamma_is_an_input_error() {
    let out = run(&["fourier", "--gamma", "Q8"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn family_row_prints_the_theta_combination() {
    let out = run(&["family", "row", "--type", "F4", "--pair", "(g3,theta)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("2/3 * F₄[θ]"));
    assert!(text.contains("-1/3 * F₄[θ²]"));
    assert!(text.contains("1/3 * φ_{12,4}"));
}

#[test]
fn sp4_verify_reports_zeta_one() {
    let out = run(&["sp4", "verify"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verified: ζ = 1"));
    assert!(text.contains("order 720"));
    assert!(text.contains("⟨R_{x₀}, R_{x₀}⟩ = 1"));
}

#[test]
fn computed_tables_round_trip_and_validate() {
    let path = write_table("s6_round_trip.ctab", "s6");
    let bytes = std::fs::read(&path).unwrap();
    let doc = ctabio::parse_ctab(&bytes).expect("round-trips");
    assert_eq!(doc.name, "S6");
    assert_eq!(doc.class_count(), 11);

    let out = run(&["table", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("clean"));
}

#[test]
fn sp4f2_table_is_computed_and_clean() {
    let path = write_table("sp4f2.ctab", "sp4f2");
    let out = run(&["table", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let bytes = std::fs::read(&path).unwrap();
    let doc = ctabio::parse_ctab(&bytes).unwrap();
    assert_eq!(doc.order.to_string(), "720");
}

#[test]
fn corrupted_tables_fail_validation_with_code_one() {
    let path = write_table("s3_corrupt.ctab", "gamma:S3");
    let bytes = std::fs::read(&path).unwrap();
    let mut doc = ctabio::parse_ctab(&bytes).unwrap();
    doc.matrix[2][1] = Cyc::from_integer(7);
    let corrupted = tmp_path("s3_corrupted.ctab");
    std::fs::write(&corrupted, ctabio::serialize_ctab(&doc)).unwrap();

    let out = run(&["table", "validate", corrupted.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("orthogonality"));
}

#[test]
fn garbage_input_is_a_format_error() {
    let path = tmp_path("garbage.ctab");
    std::fs::write(&path, "this is not a character table\n").unwrap();
    let out = run(&["table", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "zeta",
        "--type",
        "F4",
        "--table",
        path.to_str().unwrap(),
        "--pair",
        "(g3,theta)",
        "--class",
        "12o",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn fusion_finds_the_unique_z2_embedding() {
    let sub = write_table("fusion_z2.ctab", "gamma:Z2");
    let big = write_table("fusion_s3.ctab", "gamma:S3");
    let out = run(&[
        "fusion",
        "--sub",
        sub.to_str().unwrap(),
        "--big",
        big.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1a->1a 2a->2a"));
    assert!(text.contains("1 fusion(s)"));
}

#[test]
fn inconsistent_pins_are_an_input_error() {
    let sub = write_table("pin_z2.ctab", "gamma:Z2");
    let big = write_table("pin_s3.ctab", "gamma:S3");
    let out = run(&[
        "fusion",
        "--sub",
        sub.to_str().unwrap(),
        "--big",
        big.to_str().unwrap(),
        "--pin",
        "2a=1a",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("pin"));
}

#[test]
fn exhausted_budget_exits_with_code_three() {
    let sub = write_table("budget_s3.ctab", "gamma:S3");
    let big = write_table("budget_s6.ctab", "s6");
    let out = run(&[
        "fusion",
        "--sub",
        sub.to_str().unwrap(),
        "--big",
        big.to_str().unwrap(),
        "--budget",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn extrapolation_follows_the_power_laws() {
    let out = run(&["zeta", "extrapolate", "--zeta", "E(3)", "--m", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");

    let out = run(&["zeta", "extrapolate", "--zeta", "E(4)", "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-1");

    let out = run(&["zeta", "extrapolate", "--zeta", "not-a-number", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
