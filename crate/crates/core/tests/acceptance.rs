//! Acceptance suite: every criterion from the verify registry, one test per
//! criterion, printing a pass/fail line with its runtime. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use bardyn::verify::{criterion_name, run_criterion};

const SEED: u64 = 17;

fn run(id: u32) {
    let start = std::time::Instant::now();
    let outcome = run_criterion(id, SEED);
    let secs = start.elapsed().as_secs_f64();
    println!(
        "{} criterion {:>2} {:<32} ({:.2}s) {}",
        if outcome.pass { "PASS" } else { "FAIL" },
        id,
        criterion_name(id),
        secs,
        outcome.details
    );
    assert!(outcome.pass, "criterion {id} ({}) failed: {}", criterion_name(id), outcome.details);
}

#[test]
fn criterion_01_s2_morse_barcode() {
    run(1);
}

#[test]
fn criterion_02_reduction_vs_rank_formula() {
    run(2);
}

#[test]
fn criterion_03_isolated_vertex_lower_bound() {
    run(3);
}

#[test]
fn criterion_04_perturbation_stability() {
    run(4);
}

#[test]
fn criterion_05_duality_and_tensor() {
    run(5);
}

#[test]
fn criterion_06_doubling_htop() {
    run(6);
}

#[test]
fn criterion_07_cat_map_htop_and_orbit_growth() {
    run(7);
}

#[test]
fn criterion_08_rotation_htop() {
    run(8);
}

#[test]
fn criterion_09_volume_growth_vs_htop() {
    run(9);
}

#[test]
fn criterion_10_linear_shadowing() {
    run(10);
}

#[test]
fn criterion_11_crofton_integral() {
    run(11);
}

#[test]
fn criterion_12_ellipsoid_linear_growth() {
    run(12);
}

#[test]
fn criterion_13_toric_profile_counts() {
    run(13);
}

#[test]
fn criterion_14_flat_torus_loop_counts() {
    run(14);
}

#[test]
fn criterion_15_estimator_calibration() {
    run(15);
}

#[test]
fn criterion_16_reproducibility() {
    run(16);
}
