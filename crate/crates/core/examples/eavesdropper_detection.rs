//! Intercept-resend attacks on one agent's legs and what the two checks see.
//!
//! `cargo run --release --example eavesdropper_detection`

use qss_sim::adversary::{information_bound, AttackStrategy};
use qss_sim::protocol::run_keygen_traced;
use qss_sim::qubit::Basis;
use qss_sim::RunConfig;

fn main() -> qss_sim::Result<()> {
    let attacks = [
        (
            "random basis, forward leg",
            AttackStrategy::InterceptResendRandomBasis,
            true,
            false,
        ),
        (
            "random basis, return leg",
            AttackStrategy::InterceptResendRandomBasis,
            false,
            true,
        ),
        (
            "random basis, both legs",
            AttackStrategy::InterceptResendRandomBasis,
            true,
            true,
        ),
        (
            "fixed Z, forward leg",
            AttackStrategy::InterceptResendFixedBasis { basis: Basis::Z },
            true,
            false,
        ),
        (
            "dishonest agent 0, both legs",
            AttackStrategy::DishonestAgent { insider: 0 },
            true,
            true,
        ),
    ];
    println!(
        "{:<32} {:>8} {:>8} {:>8} {:>10}",
        "attack on agent 1", "check1", "check2", "I0", "decision"
    );
    for (name, attack, fwd, back) in attacks {
        let cfg = RunConfig::ideal(2, 50_000, 0.1, 0.1, 3).with_attack(attack, 1, fwd, back);
        let run = run_keygen_traced(&cfg)?;
        let r = &run.report;
        let c1 = r.check1_error[1].unwrap_or(f64::NAN);
        let c2 = r.check2_error[1].unwrap_or(f64::NAN);
        let decision = if r.decision.is_accept() { "accept" } else { "abort" };
        println!(
            "{name:<32} {c1:>8.4} {c2:>8.4} {:>8.4} {decision:>10}",
            information_bound(c2)?
        );
        println!("{:<32} intercepts recorded: {}", "", run.ledger.intercept_count());
    }
    Ok(())
}
