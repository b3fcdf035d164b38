//! Closed-form quantities: information bound, detection survival and the
//! efficiency comparison table.
//!
//! `cargo run --example formulas`

use qss_sim::{comparison_table, detection_survival, information_bound};

fn main() -> qss_sim::Result<()> {
    for eps in [0.0, 0.05, 0.1, 0.25, 0.5] {
        println!("I0({eps:.2}) = {:.4}", information_bound(eps)?);
    }

    for n in [10, 100, 1_000, 10_000] {
        let s = detection_survival(n, 0.1, 0.1)?;
        println!(
            "P({n}, 0.1, 0.1) = {:.4e} (log10 {:.3})",
            s.probability, s.log10_probability
        );
    }

    println!();
    for row in comparison_table(0.1)? {
        println!("{:<22} {:>6.3}  {}", row.protocol, row.eta, row.note);
    }
    Ok(())
}
