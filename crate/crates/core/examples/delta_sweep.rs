//! Sweeps the check fraction and compares empirical efficiency with
//! (1 - delta)^2, writing CSV to stdout.
//!
//! `cargo run --release --example delta_sweep`

use qss_sim::cli::{sweep_delta, SWEEP_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let deltas = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
    let rows = sweep_delta(&deltas, 10, 2, 10_000, 2024)?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.serialize((r.delta, r.eta_theory, r.eta_empirical_mean, r.eta_empirical_std))?;
    }
    w.flush()?;
    Ok(())
}
