//! Three agents share a key with the dealer over ideal channels.
//!
//! `cargo run --example keygen_ideal`

use qss_sim::{run_keygen, BitString, RunConfig};

fn main() -> qss_sim::Result<()> {
    let cfg = RunConfig::ideal(3, 20_000, 0.1, 0.1, 7);
    let report = run_keygen(&cfg)?;

    println!("decision: {:?}", report.decision);
    println!("key length: {}", report.dealer_key.len());
    for (i, k) in report.agent_keys.iter().enumerate() {
        println!("agent {i} first 32 bits: {}", &k.to_string()[..32]);
    }
    let combined = BitString::xor_all(&report.agent_keys)?;
    println!("dealer key equals XOR of agent keys: {}", combined == report.dealer_key);
    println!(
        "efficiency: paper {:.4}, with classical bits {:.4}",
        report.efficiency.paper.eta, report.efficiency.full.eta
    );
    Ok(())
}
