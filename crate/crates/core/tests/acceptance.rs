//! Acceptance suite: every criterion below runs at its pinned tolerance and
//! prints one pass/fail line (visible with `cargo test -- --nocapture`).

use std::time::Instant;

use point_vortex::suite::{run_suite, Check};

fn report(criterion: &str, checks: &[Check], budget: Option<(std::time::Duration, f64)>) {
    let mut ok = checks.iter().all(|c| c.passed);
    let mut timing = String::new();
    if let Some((elapsed, limit_s)) = budget {
        timing = format!(
            " [{:.2} s / {:.0} s budget]",
            elapsed.as_secs_f64(),
            limit_s
        );
        ok &= elapsed.as_secs_f64() < limit_s;
    }
    println!(
        "criterion {criterion}: {}{timing}",
        if ok { "PASS" } else { "FAIL" }
    );
    for check in checks {
        println!("  {check}");
    }
    assert!(ok, "criterion {criterion} failed");
}

#[test]
fn criterion_1_algebraic_golden_ratio() {
    let checks = run_suite("bifurcation").unwrap();
    let subset: Vec<Check> = checks
        .into_iter()
        .filter(|c| c.name.starts_with("critical-w"))
        .collect();
    assert_eq!(subset.len(), 2);
    report("1 (golden ratio, algebraic)", &subset, None);
}

#[test]
fn criterion_2_dynamic_cusp_finder() {
    let started = Instant::now();
    let checks: Vec<Check> = run_suite("cusp")
        .unwrap()
        .into_iter()
        .filter(|c| c.name.starts_with("cusp-by-simulation") || c.name.starts_with("stop-event"))
        .collect();
    let elapsed = started.elapsed();
    assert_eq!(checks.len(), 4);
    report("2 (golden ratio, dynamic)", &checks, Some((elapsed, 30.0)));
}

#[test]
fn criterion_3_cross_ratio_identities() {
    let checks: Vec<Check> = run_suite("bifurcation")
        .unwrap()
        .into_iter()
        .filter(|c| {
            c.name.starts_with("cross-ratio")
                || c.name.starts_with("stop-cross-ratio")
                || c.name.starts_with("balance-point")
        })
        .collect();
    assert_eq!(checks.len(), 3);
    report("3 (cross-ratio identities)", &checks, None);
}

#[test]
fn criterion_4_conservation() {
    let started = Instant::now();
    let checks = run_suite("conservation").unwrap();
    let elapsed = started.elapsed();
    assert_eq!(checks.len(), 4);
    report("4 (conservation)", &checks, Some((elapsed, 10.0)));
}

#[test]
fn criterion_5_analytic_scenarios() {
    let checks = run_suite("scenarios").unwrap();
    report("5 (analytic scenarios)", &checks, None);
}

#[test]
fn criterion_6_regime_flip() {
    let checks = run_suite("regimes").unwrap();
    report("6 (regime flip at W*)", &checks, None);
}

#[test]
fn criterion_7_cusp_geometry() {
    let checks: Vec<Check> = run_suite("cusp")
        .unwrap()
        .into_iter()
        .filter(|c| c.name == "cusp-exponent")
        .collect();
    assert_eq!(checks.len(), 1);
    report("7 (cusp geometry)", &checks, None);
}

#[test]
fn criterion_8_grobli_selfsimilar() {
    let started = Instant::now();
    let checks = run_suite("grobli").unwrap();
    let elapsed = started.elapsed();
    report(
        "8 (self-similar three-vortex motion)",
        &checks,
        Some((elapsed, 60.0)),
    );
}

#[test]
fn criterion_9_oracle_equivalence() {
    let checks = run_suite("oracle").unwrap();
    report("9 (velocity vs finite-difference oracle)", &checks, None);
}
