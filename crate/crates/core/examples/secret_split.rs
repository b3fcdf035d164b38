//! Splits a secret into a pad and a ciphertext share with both variants,
//! then shows a block-mode attack caught before anything is encoded.
//!
//! `cargo run --example secret_split`

use qss_sim::adversary::AttackStrategy;
use qss_sim::protocol::Decision;
use qss_sim::splitting::run_split_traced;
use qss_sim::{recombine, run_split_block, run_split_pingpong, BitString, SplitConfig, SplitMode};

fn main() -> qss_sim::Result<()> {
    let secret: BitString = "1011001110001111010100101100".parse()?;

    let pp = run_split_pingpong(&SplitConfig::ideal(secret.clone(), SplitMode::PingPong, 11))?;
    println!("ping-pong  bob {}  charlie {}", pp.bob_share, pp.charlie_share);
    println!(
        "           recovered {}  photons per sender {:?}",
        recombine(&pp.bob_share, &pp.charlie_share)?,
        pp.detection.iter().map(|d| d.photons_sent).collect::<Vec<_>>()
    );

    let block = run_split_block(&SplitConfig::ideal(secret.clone(), SplitMode::Block, 11))?;
    println!("block      bob {}  charlie {}", block.bob_share, block.charlie_share);
    println!("           recovered {}", block.recovered);

    let attacked = SplitConfig::ideal(secret, SplitMode::Block, 12).with_attack(
        AttackStrategy::InterceptResendRandomBasis,
        1,
        true,
        false,
    );
    let run = run_split_traced(&attacked)?;
    if let Decision::Abort(reason) = &run.report.decision {
        println!(
            "block under attack: abort ({reason}), encode operations {}",
            run.transcript.encode_ops()
        );
    }
    Ok(())
}
