//! Acceptance suite: runs every validation criterion at its published
//! tolerance and prints one pass/fail line per criterion.
//!
//! Run with `cargo test -p qnoise --test acceptance -- --nocapture` to see
//! the lines; each criterion is an independent test.

use qnoise::validate::{run_named_check, Preset, CHECK_NAMES};

fn run(index: usize) {
    let name = CHECK_NAMES[index];
    let result = run_named_check(name, Preset::Full).expect("known check name");
    println!(
        "criterion {:2} ({name}): {}",
        index + 1,
        if result.passed { "PASS" } else { "FAIL" }
    );
    for line in &result.lines {
        println!(
            "    {} {}: measured={:.6e} bound={:.6e}",
            if line.passed { "ok  " } else { "FAIL" },
            line.label,
            line.measured,
            line.bound
        );
    }
    assert!(result.passed, "criterion {} ({name}) failed", index + 1);
}

#[test]
fn criterion_01_witness_closed_form_equivalence() {
    run(0);
}

#[test]
fn criterion_02_detection_thresholds() {
    run(1);
}

#[test]
fn criterion_03_mc_vs_analytic() {
    run(2);
}

#[test]
fn criterion_04_pure_state_measures() {
    run(3);
}

#[test]
fn criterion_05_regime_behaviors() {
    run(4);
}

#[test]
fn criterion_06_stationary_ordering() {
    run(5);
}

#[test]
fn criterion_07_state_validity() {
    run(6);
}

#[test]
fn criterion_08_beta_mc_consistency() {
    run(7);
}

#[test]
fn criterion_09_trajectory_monotonicity() {
    run(8);
}

#[test]
fn criterion_10_lbc_bound_property() {
    run(9);
}
