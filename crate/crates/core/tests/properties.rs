mod common;

use common::SuiteResult;

const CASES: u32 = 1000;

fn assert_passes(r: SuiteResult) {
    if let Err(e) = r.outcome {
        panic!("{} failed: {e}", r.name);
    }
}

#[test]
fn print_then_parse_is_identity() {
    assert_passes(common::round_trip(CASES, 1));
}

#[test]
fn substitution_moves_free_variables() {
    assert_passes(common::fv_coherence(CASES, 2));
}

#[test]
fn reletter_keeps_free_variables() {
    assert_passes(common::reletter_free_vars(CASES, 3));
}

#[test]
fn assignment_is_self_dual() {
    assert_passes(common::self_duality(CASES, 4));
}

#[test]
fn substitution_lemma() {
    assert_passes(common::substitution_lemma(CASES, 5));
}

#[test]
fn assignment_outside_free_variables_is_irrelevant() {
    assert_passes(common::sigma_irrelevance(CASES, 6));
}

#[test]
fn relettering_preserves_truth() {
    assert_passes(common::reletter_invariance(CASES, 7));
}

#[test]
fn connectives_follow_truth_tables() {
    assert_passes(common::boolean_sanity(CASES, 8));
}

#[test]
fn kernel_agrees_with_reference_evaluator() {
    assert_passes(common::kernel_matches_reference(CASES, 9));
}

#[test]
fn translation_agrees_with_model_checker() {
    assert_passes(common::translation_agreement(CASES, 10));
}

/// The suites must fail when the property is false: a deliberately wrong
/// claim (every formula equals its negation) is refuted.
#[test]
fn runner_reports_failures() {
    use proptest::test_runner::TestCaseError;
    let r = common::runner(50, 1).run(&common::arb_formula(2), |phi| {
        if phi == elas::syntax::Formula::not(phi.clone()) {
            Ok(())
        } else {
            Err(TestCaseError::fail("differs"))
        }
    });
    assert!(r.is_err());
}
