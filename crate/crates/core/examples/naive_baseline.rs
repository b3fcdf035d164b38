//! Two independent BB84 sessions combined into a shared key, compared with
//! the bidirectional scheme at the same photon budget.
//!
//! `cargo run --example naive_baseline`

use qss_sim::{run_keygen, run_naive_qss, RunConfig};

fn main() -> qss_sim::Result<()> {
    let cfg = RunConfig::ideal(2, 20_000, 0.1, 0.1, 5);
    let naive = run_naive_qss(&cfg)?;
    let bid = run_keygen(&cfg)?;

    for (i, s) in naive.efficiency.sessions.iter().enumerate() {
        println!("BB84 session {i}: eta {:.4}", s.eta);
    }
    println!(
        "naive combined key: {} bits, eta {:.4}",
        naive.dealer_key.len(),
        naive.efficiency.paper.eta
    );
    println!(
        "bidirectional key:  {} bits, eta {:.4}",
        bid.dealer_key.len(),
        bid.efficiency.paper.eta
    );
    Ok(())
}
