//! Freezes the enumeration oracle's values. Every statistical test in this
//! crate compares against these numbers.

mod common;

use common::oracle::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

#[test]
fn forward_leg_random_intercept() {
    let o = keygen_random_ir(true, false);
    assert!(close(o.check2_error, 0.25));
    assert!(close(o.check1_matched_error, 0.25));
    assert!(close(o.forward_guess_accuracy, 0.75));
}

#[test]
fn return_leg_random_intercept() {
    let o = keygen_random_ir(false, true);
    assert!(close(o.check2_error, 0.25));
    assert!(close(o.check1_matched_error, 0.0));
}

#[test]
fn both_legs_random_intercept() {
    let o = keygen_random_ir(true, true);
    assert!(close(o.check2_error, 0.375));
    assert!(close(o.check1_matched_error, 0.25));
    // re-using the forward basis on the return leg reads the operation
    assert!(close(o.op_guess_accuracy, 0.75));
}

#[test]
fn fixed_basis_intercept() {
    assert_eq!(keygen_fixed_ir(0, 0), (0.0, 1.0));
    let (err, acc) = keygen_fixed_ir(0, 1);
    assert!(close(err, 0.5) && close(acc, 0.5));
}

#[test]
fn fixed_basis_both_legs() {
    for eb in 0..2u8 {
        let (err, acc) = keygen_fixed_ir_both(eb);
        assert!(close(err, 0.25), "{err}");
        assert!(close(acc, 1.0), "{acc}");
    }
}

#[test]
fn pingpong_control_event() {
    let (joint, conditional) = pingpong_control_detection();
    assert!(close(joint, 0.125));
    assert!(close(conditional, 0.25));
}

#[test]
fn depolarizing_table() {
    for p in [0.0, 0.1, 0.3, 1.0] {
        assert!(close(depolarizing_error(p), p / 2.0));
    }
}

#[test]
fn stream_dynamic_program_matches_closed_form() {
    for (n, ps, eps) in [(50usize, 0.2f64, 0.125f64), (1, 0.3, 0.5), (20, 0.5, 0.25)] {
        let closed = ((1.0 - ps) / (1.0 - (1.0 - eps) * ps)).powi(n as i32);
        let dp = undetected_stream_probability(n, ps, eps);
        assert!((dp - closed).abs() < 1e-10, "{n} {ps} {eps}: {dp} vs {closed}");
    }
    assert!((undetected_stream_probability(50, 0.2, 0.125) - 0.214_685_109).abs() < 1e-8);
}

#[test]
fn wilson_and_entropy() {
    let (lo, hi) = wilson(250.0, 1000.0);
    assert!((lo - 0.224_153_1).abs() < 1e-6 && (hi - 0.277_760_3).abs() < 1e-6);
    assert!((h2(0.1) - 0.468_995_6).abs() < 1e-6);
}
