//! Acceptance suite: every exit criterion run end to end, one pass/fail
//! line per criterion (run with `--nocapture` to see them on success).
//! All comparisons are exact; the only tolerances are wall-clock budgets.

use diracsea::coeff::{self, rat, Rational};
use diracsea::expand::expand_core;
use diracsea::golden::embedded_tables;
use diracsea::verify::{self, Status, Suite, SuiteOptions};
use diracsea::{op_mul, replace_p_by_k, Engine, Mutation, SeriesId};
use num_traits::One;
use std::time::Instant;

fn criterion(n: u32, name: &str, passed: bool) {
    println!(
        "criterion {n} ({name}): {}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {n} ({name}) failed");
}

#[test]
fn criterion_1_golden_reproduction() {
    let started = Instant::now();
    let eng = Engine::new();
    let report = verify::check_golden(&eng, &embedded_tables());
    let elapsed = started.elapsed();
    criterion(
        1,
        "golden reproduction of all eight third-order expansions",
        report.status == Status::Pass && report.witnesses.is_empty(),
    );
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "golden check took {elapsed:?}, budget is 5 s"
    );
}

#[test]
fn criterion_2_projector_idempotence() {
    let started = Instant::now();
    let eng = Engine::new();
    let report = verify::check_idempotence(&eng, 6);
    let elapsed = started.elapsed();
    criterion(
        2,
        "projector idempotence P*P = P to order b^6",
        report.status == Status::Pass,
    );
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "idempotence check took {elapsed:?}, budget is 10 s"
    );
}

#[test]
fn criterion_3_route_equivalence() {
    let eng = Engine::new();
    // flow vs closed residual series to b^6, projector routes to b^6,
    // direct vs normalized-core expansions to B^5
    let report = verify::check_route_equivalence(&eng, 6, 5);
    criterion(
        3,
        "route equivalence (pk to b^6, B layer to B^5)",
        report.status == Status::Pass,
    );
}

#[test]
fn criterion_4_residual_pair_identities() {
    let eng = Engine::new();
    let report = verify::check_residual_identities(&eng, 6);
    criterion(
        4,
        "residual quadruple identity to b^6",
        report.status == Status::Pass,
    );
}

#[test]
fn criterion_5_occurrence_counting() {
    let started = Instant::now();
    let eng = Engine::new();
    let report = verify::check_counting(&eng, 3);
    let elapsed = started.elapsed();
    criterion(
        5,
        "brute-force occurrence counts and signs for r <= 3",
        report.status == Status::Pass,
    );
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "counting check took {elapsed:?}, budget is 30 s"
    );
}

#[test]
fn criterion_6_coefficient_identities() {
    let eng = Engine::new();
    let report = verify::check_coefficient_identities(&eng, 10, 6);
    criterion(
        6,
        "coefficient identities (row sums, closed vs summed, l-sum)",
        report.status == Status::Pass,
    );
    // spot checks straight from the definitions
    assert_eq!(coeff::f_lr(0, 1) + coeff::f_lr(1, 1), Rational::one());
    assert_eq!(coeff::c_n(1), rat(1, 2));
    assert_eq!(coeff::e_n(1), rat(-1, 2));
}

#[test]
fn criterion_7_replacement_rule() {
    let eng = Engine::new();
    let report = verify::check_replacement_rule(&eng, 5);
    criterion(
        7,
        "p->k replacement collapses the residual series to ktilde (B^5)",
        report.status == Status::Pass,
    );
    // direct restatement at the top order
    let kres = expand_core(&eng.pk_core(SeriesId::KtildeResClosed, 5), 5, true);
    let ktilde = expand_core(&eng.pk_core(SeriesId::Ktilde, 5), 5, true);
    assert_eq!(replace_p_by_k(&kres), ktilde);
}

#[test]
fn criterion_8_negative_claim_and_high_energy() {
    let eng = Engine::new();
    let t_report = verify::check_t_not_idempotent(&eng);
    let t2 = eng.pk_core(SeriesId::Ttilde, 2);
    let nonzero = !op_mul(&t2, &t2).sub(&t2).is_zero();
    let he_report = verify::check_high_energy(&eng, 5);
    criterion(
        8,
        "t*t differs from t at order 2; high-energy routes agree to B^5 and vanish below B^2",
        t_report.status == Status::Pass && nonzero && he_report.status == Status::Pass,
    );
}

#[test]
fn criterion_9_mutation_sensitivity() {
    let opts = SuiteOptions::default();
    let mut all_detected = true;
    for mutation in Mutation::FLIPS {
        let eng = Engine::with_mutation(mutation);
        let reports = verify::run_suite(&eng, Suite::All, &opts);
        let detected = reports.iter().any(|r| r.status == Status::Fail);
        println!(
            "  mutation {mutation:?}: {}",
            if detected { "detected" } else { "MISSED" }
        );
        all_detected &= detected;
    }
    criterion(
        9,
        "every single-sign mutation breaks at least one check",
        all_detected,
    );
}
