mod common;

use common::oracle;
use proptest::prelude::*;
use qss_sim::adversary::{AttackStrategy, LegDirection};
use qss_sim::analysis::{estimate_agent_error_rate, Check};
use qss_sim::bits::BitString;
use qss_sim::channel::{AgentLegs, ChannelLeg, NoiseModel};
use qss_sim::protocol::{run_keygen, run_keygen_traced, run_naive_qss_traced, AgentEvent, DealerOutcome, RunConfig};
use qss_sim::qubit::Basis;

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

#[test]
fn same_seed_same_report() {
    let cfg =
        RunConfig::ideal(3, 5_000, 0.1, 0.1, 17).with_attack(AttackStrategy::InterceptResendRandomBasis, 2, true, true);
    let a = serde_json::to_string(&run_keygen(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_keygen(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let mut other = cfg.clone();
    other.seed = 18;
    let c = serde_json::to_string(&run_keygen(&other).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn dealer_decodes_every_agent_op_for_up_to_five_agents() {
    for agents in 2..=5 {
        let run = run_keygen_traced(&RunConfig::ideal(agents, 2_000, 0.1, 0.1, agents as u64)).unwrap();
        for t in &run.transcript {
            for a in &t.agents {
                if let (AgentEvent::Encoded { op }, DealerOutcome::Measured { decoded, .. }) = (a.event, a.dealer) {
                    assert_eq!(decoded, op);
                }
            }
        }
        let r = &run.report;
        assert_eq!(r.dealer_key, BitString::xor_all(&r.agent_keys).unwrap());
        assert!(r.decision.is_accept());
    }
}

#[test]
fn check1_comparable_subset_is_about_half() {
    let run = run_keygen_traced(&RunConfig::ideal(2, 40_000, 0.5, 0.1, 5)).unwrap();
    let est = estimate_agent_error_rate(&run.transcript, Check::One, 0).unwrap();
    let checked = run
        .transcript
        .iter()
        .filter(|t| matches!(t.agents[0].event, AgentEvent::Checked { .. }))
        .count();
    let frac = est.comparable as f64 / checked as f64;
    let sigma = (0.25 / checked as f64).sqrt();
    assert!(within(frac, 0.5, 4.0 * sigma), "{frac}");
    assert_eq!(est.mismatches, 0);
}

#[test]
fn forward_attack_at_default_check_fraction() {
    let cfg = RunConfig::ideal(2, 100_000, 0.1, 0.1, 8).with_attack(
        AttackStrategy::InterceptResendRandomBasis,
        0,
        true,
        false,
    );
    let r = run_keygen(&cfg).unwrap();
    assert!(within(r.check2_error[0].unwrap(), 0.25, 0.02));
    assert!(within(r.check1_error[0].unwrap(), 0.25, 0.02));
    assert_eq!(r.check2_error[1], Some(0.0));
    assert!(!r.decision.is_accept());
}

#[test]
fn return_and_both_leg_attacks_match_enumeration() {
    for (fwd, back) in [(false, true), (true, true)] {
        let expect = oracle::keygen_random_ir(fwd, back);
        let cfg = RunConfig::ideal(2, 100_000, 0.5, 0.5, 40).with_attack(
            AttackStrategy::InterceptResendRandomBasis,
            1,
            fwd,
            back,
        );
        let r = run_keygen(&cfg).unwrap();
        assert!(
            within(r.check2_error[1].unwrap(), expect.check2_error, 0.01),
            "{fwd} {back}"
        );
        assert!(
            within(r.check1_error[1].unwrap(), expect.check1_matched_error, 0.01),
            "{fwd} {back}"
        );
    }
}

#[test]
fn fixed_basis_attack_splits_by_prep_basis() {
    let cfg = RunConfig::ideal(2, 60_000, 0.1, 0.5, 9).with_attack(
        AttackStrategy::InterceptResendFixedBasis { basis: Basis::Z },
        1,
        true,
        false,
    );
    let run = run_keygen_traced(&cfg).unwrap();
    for prep_basis in Basis::ALL {
        let (want_err, want_acc) = oracle::keygen_fixed_ir(0, if prep_basis == Basis::Z { 0 } else { 1 });
        let (mut n, mut errs, mut hits, mut guesses) = (0usize, 0usize, 0usize, 0usize);
        for t in run.transcript.iter().filter(|t| !t.void) {
            let a = &t.agents[1];
            if a.prep.basis != prep_basis {
                continue;
            }
            if let Some(g) = run.ledger.guess_at(t.round, 1, LegDirection::Forward) {
                guesses += 1;
                hits += usize::from(g.guess == a.prep.bit);
            }
            if let (AgentEvent::Encoded { op }, DealerOutcome::Measured { decoded, .. }) = (a.event, a.dealer) {
                n += 1;
                errs += usize::from(decoded != op);
            }
        }
        let err = errs as f64 / n as f64;
        let acc = hits as f64 / guesses as f64;
        assert!(within(err, want_err, 0.01), "{prep_basis}: {err}");
        assert!(within(acc, want_acc, 0.01), "{prep_basis}: {acc}");
    }
}

#[test]
fn learned_bit_accuracy_for_random_basis() {
    let cfg = RunConfig::ideal(2, 50_000, 0.1, 0.1, 10).with_attack(
        AttackStrategy::InterceptResendRandomBasis,
        0,
        true,
        false,
    );
    let run = run_keygen_traced(&cfg).unwrap();
    let learned = run.ledger.learned_bits();
    assert_eq!(run.ledger.intercept_count(), learned.len());
    let mut hits = 0;
    for l in learned {
        let prep = run.transcript[l.at.round as usize].agents[0].prep;
        hits += usize::from(l.guess == prep.bit);
    }
    let acc = hits as f64 / learned.len() as f64;
    assert!(
        within(acc, oracle::keygen_random_ir(true, false).forward_guess_accuracy, 0.01),
        "{acc}"
    );
}

#[test]
fn empirical_efficiency_tracks_theory() {
    let delta = 0.2;
    let n = 50_000;
    let p = (1.0 - delta) * (1.0 - delta);
    let r = run_keygen(&RunConfig::ideal(2, n, delta, delta, 11)).unwrap();
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert!(
        within(r.efficiency.paper.eta, p, 3.0 * sigma),
        "{}",
        r.efficiency.paper.eta
    );
    assert!(r.efficiency.full.eta <= r.efficiency.paper.eta);
    assert!(r.efficiency.full.b_t > 0.0);
}

#[test]
fn estimates_agree_with_report() {
    let cfg = RunConfig::ideal(3, 20_000, 0.2, 0.2, 12).with_attack(
        AttackStrategy::InterceptResendRandomBasis,
        2,
        true,
        true,
    );
    let run = run_keygen_traced(&cfg).unwrap();
    for agent in 0..3 {
        let c1 = estimate_agent_error_rate(&run.transcript, Check::One, agent).unwrap();
        let c2 = estimate_agent_error_rate(&run.transcript, Check::Two, agent).unwrap();
        assert_eq!(Some(c1.rate), run.report.check1_error[agent]);
        assert_eq!(Some(c2.rate), run.report.check2_error[agent]);
        assert!(c2.lower <= c2.rate && c2.rate <= c2.upper);
    }
}

#[test]
fn lossy_legs_void_rounds() {
    let leg = ChannelLeg::ideal().with_survival(0.9);
    let mut cfg = RunConfig::ideal(2, 20_000, 0.1, 0.1, 13);
    cfg.legs = vec![
        AgentLegs {
            forward: leg.clone(),
            back: leg,
        },
        AgentLegs::ideal(),
    ];
    let r = run_keygen(&cfg).unwrap();
    let frac = r.void_rounds as f64 / 20_000.0;
    // the check round skips the return leg
    let lo = 0.1;
    let hi = 1.0 - 0.81;
    assert!(frac > lo - 0.01 && frac < hi + 0.01, "{frac}");
    assert!(r.decision.is_accept());
    assert_eq!(r.dealer_key, BitString::xor_all(&r.agent_keys).unwrap());
}

#[test]
fn depolarizing_noise_matches_table() {
    let p = 0.2;
    let noisy = ChannelLeg::ideal().with_noise(NoiseModel {
        depol_prob: p,
        ..NoiseModel::default()
    });
    let mut cfg = RunConfig::ideal(2, 60_000, 0.1, 0.5, 14);
    cfg.abort_threshold = 1.0;
    cfg.legs = vec![
        AgentLegs {
            forward: noisy,
            back: ChannelLeg::ideal(),
        },
        AgentLegs::ideal(),
    ];
    let r = run_keygen(&cfg).unwrap();
    assert!(within(r.check2_error[0].unwrap(), oracle::depolarizing_error(p), 0.01));
}

#[test]
fn naive_baseline_efficiencies() {
    let run = run_naive_qss_traced(&RunConfig::ideal(2, 40_000, 0.1, 0.1, 15)).unwrap();
    let r = &run.report;
    assert!(r.decision.is_accept());
    for s in &r.efficiency.sessions {
        assert!(within(s.eta, 0.25, 0.01), "{}", s.eta);
    }
    assert!(
        within(r.efficiency.paper.eta, 0.125, 0.01),
        "{}",
        r.efficiency.paper.eta
    );
    assert_eq!(r.dealer_key, BitString::xor_all(&r.agent_keys).unwrap());
    assert_eq!(run.comparison.mismatches, 0);
}

#[test]
fn naive_baseline_catches_intercept() {
    let cfg = RunConfig::ideal(2, 20_000, 0.1, 0.1, 16).with_attack(
        AttackStrategy::InterceptResendRandomBasis,
        1,
        true,
        false,
    );
    let run = run_naive_qss_traced(&cfg).unwrap();
    assert!(!run.report.decision.is_accept());
    assert!(run.comparison.mismatches > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ideal_runs_always_accept(
        agents in 2usize..6,
        photons in 1usize..400,
        d1 in 0.01f64..=0.5,
        d2 in 0.01f64..=0.5,
        seed in any::<u64>(),
    ) {
        let r = run_keygen(&RunConfig::ideal(agents, photons, d1, d2, seed)).unwrap();
        prop_assert!(r.decision.is_accept());
        prop_assert_eq!(r.agent_keys.len(), agents);
        prop_assert!(r.agent_keys.iter().all(|k| k.len() == r.dealer_key.len()));
        prop_assert_eq!(&r.dealer_key, &BitString::xor_all(&r.agent_keys).unwrap());
        prop_assert!(r.check2_error.iter().all(|e| e.is_none_or(|x| x == 0.0)));
    }
}
