//! End-to-end tests of the qnoise binary: output formats, determinism and
//! exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn qnoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnoise"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn qnoise_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnoise"))
        .env("QNOISE_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn sweep_csv_has_exact_header_and_row_count() {
    let out = qnoise(&[
        "sweep",
        "--family",
        "ghz",
        "--coupling",
        "ce",
        "--q",
        "1.0",
        "--gamma-ratio",
        "10",
        "--t-max",
        "2",
        "--t-steps",
        "5",
        "--measures",
        "negativity,witness",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "t,q,gamma_over_nu,family,coupling,negativity,lbc,witness,vn_entropy,linear_entropy,qjsd_init,qjsd_mm"
    );
    assert_eq!(lines.len(), 6);
    assert!(lines[1].contains(",ghz,ce,"));
    assert!(lines[1].contains("NaN"));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_thread_counts() {
    let args = [
        "sweep",
        "--family",
        "w",
        "--coupling",
        "ie",
        "--q",
        "0.8,1.0",
        "--gamma-ratio",
        "0.1",
        "--t-max",
        "1.0",
        "--t-steps",
        "4",
        "--mode",
        "mc",
        "--trajectories",
        "512",
        "--seed",
        "9",
        "--measures",
        "negativity,witness,linear_entropy",
    ];
    let a = qnoise_with_threads(&args, "1");
    let b = qnoise_with_threads(&args, "1");
    let c = qnoise_with_threads(&args, "4");
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn sweep_config_file_is_merged_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    std::fs::write(
        &config,
        r#"{
            "family": "ghz",
            "coupling": "ce",
            "q": [0.5],
            "gamma_ratio": [10.0],
            "t_max": 2.0,
            "t_steps": 3,
            "measures": "witness"
        }"#,
    )
    .unwrap();
    let base = qnoise(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&base), 0, "{}", String::from_utf8_lossy(&base.stderr));
    let text = String::from_utf8(base.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains(",0.5,10,ghz,ce,"));

    // a flag overrides the same field from the file
    let override_q = qnoise(&["sweep", "--config", config.to_str().unwrap(), "--q", "1.0"]);
    let text = String::from_utf8(override_q.stdout).unwrap();
    assert!(text.contains(",1,10,ghz,ce,"));
    assert!(!text.contains(",0.5,10,"));
}

#[test]
fn sweep_json_output_parses() {
    let out = qnoise(&[
        "sweep",
        "--family",
        "ghz",
        "--coupling",
        "ie",
        "--t-max",
        "1",
        "--t-steps",
        "3",
        "--measures",
        "negativity",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 2 * 3);
    assert!(rows[0]["negativity"].is_number());
    assert!(rows[0]["lbc"].is_null());
}

#[test]
fn sweep_svg_output_is_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plot.svg");
    let out = qnoise(&[
        "sweep",
        "--family",
        "ghz",
        "--coupling",
        "ce",
        "--q",
        "1.0",
        "--gamma-ratio",
        "10",
        "--t-max",
        "5",
        "--t-steps",
        "11",
        "--measures",
        "negativity,witness",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("polyline"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&qnoise(&["sweep"])), 1); // missing family
    assert_eq!(
        code(&qnoise(&["sweep", "--family", "x", "--coupling", "ce"])),
        1
    );
    assert_eq!(
        code(&qnoise(&[
            "sweep",
            "--family",
            "ghz",
            "--coupling",
            "ce",
            "--q",
            "1.5"
        ])),
        1
    );
    assert_eq!(
        code(&qnoise(&[
            "sweep",
            "--family",
            "ghz",
            "--coupling",
            "ce",
            "--format",
            "yaml"
        ])),
        1
    );
    assert_eq!(code(&qnoise(&["validate", "--preset", "bogus"])), 1);
    assert_eq!(code(&qnoise(&["validate", "--preset", ""])), 1);
    assert_eq!(code(&qnoise(&["no-such-command"])), 1);
    assert_eq!(code(&qnoise(&["--help"])), 0);
}

#[test]
fn validate_quick_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = qnoise(&[
        "validate",
        "--preset",
        "quick",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion  1 (witness_closed_form_equivalence): PASS"));
    assert!(text.contains("validation (quick): PASS"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 10);
}

#[test]
fn mc_compare_within_tolerance_and_exit_two_when_exceeded() {
    let ok = qnoise(&[
        "mc-compare",
        "--family",
        "ghz",
        "--coupling",
        "ie",
        "--q",
        "1.0",
        "--gamma-ratio",
        "10",
        "--t",
        "1.0",
        "--trajectories",
        "3000",
        "--seed",
        "5",
        "--tolerance",
        "0.05",
    ]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.starts_with("t,q,gamma_over_nu,family,coupling,trace_distance"));

    let too_tight = qnoise(&[
        "mc-compare",
        "--family",
        "ghz",
        "--coupling",
        "ie",
        "--q",
        "1.0",
        "--gamma-ratio",
        "10",
        "--t",
        "1.0",
        "--trajectories",
        "3000",
        "--seed",
        "5",
        "--tolerance",
        "1e-9",
    ]);
    assert_eq!(code(&too_tight), 2);
}

#[test]
fn trajectory_emits_pair_series() {
    let out = qnoise(&[
        "trajectory",
        "--family",
        "w",
        "--coupling",
        "ie",
        "--gamma-ratio",
        "10",
        "--t-max",
        "10",
        "--t-steps",
        "21",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,linear_entropy,negativity,qjsd_init,qjsd_mm");
    assert_eq!(lines.len(), 22);

    let svg = qnoise(&[
        "trajectory",
        "--family",
        "w",
        "--coupling",
        "ce",
        "--gamma-ratio",
        "0.1",
        "--t-max",
        "10",
        "--t-steps",
        "51",
        "--format",
        "svg",
    ]);
    assert_eq!(code(&svg), 0);
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.contains("state-space trajectory"));
    assert!(text.contains("linear entropy"));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = qnoise(&[
        "sweep",
        "--family",
        "ghz",
        "--coupling",
        "ce",
        "--t-max",
        "1",
        "--t-steps",
        "2",
        "--measures",
        "witness",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert!(Path::new(&path).exists());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
}
