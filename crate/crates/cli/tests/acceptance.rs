//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line. Sample counts, budgets and the seed are the defaults
//! pinned in `octo_rank::verify` and `octo_rank::config`.
//!
//! Run with `cargo test -p octo-rank --test acceptance -- --nocapture` to
//! see the lines.

use std::sync::Mutex;

use octo_rank::verify::{run_criterion, VerifyConfig, CRITERIA};

/// Criteria run one at a time so wall-clock budgets are not skewed by
/// sibling tests competing for cores.
static SERIAL: Mutex<()> = Mutex::new(());

fn check(index: usize) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (claim, timing) = run_criterion(index, &VerifyConfig::default());
    println!("{}  [{} ms]", claim.summary_line(), timing.millis);
    assert!(
        claim.passed(),
        "{} failed: {:?}\n{}",
        CRITERIA[index].id,
        claim.reason,
        serde_json::to_string_pretty(&claim.data).unwrap()
    );
}

#[test]
fn ac01_family_dimension_is_seven() {
    check(0);
}

#[test]
fn ac02_exhaustive_census_f3_f5() {
    check(1);
}

#[test]
fn ac03_two_square_classes() {
    check(2);
}

#[test]
fn ac04_division_constant_rank() {
    check(3);
}

#[test]
fn ac05_kernel_image_profile() {
    check(4);
}

#[test]
fn ac06_omega_rank_and_kernels() {
    check(5);
}

#[test]
fn ac07_no_decomposable_kernel_elements() {
    check(6);
}

#[test]
fn ac08_automorphism_invariance() {
    check(7);
}

#[test]
fn ac09_derivation_identity() {
    check(8);
}

#[test]
fn ac10_composition_law() {
    check(9);
}

#[test]
fn ac11_restriction_rank() {
    check(10);
}

#[test]
fn ac12_negative_control() {
    check(11);
}
