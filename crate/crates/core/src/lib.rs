//! Simulation toolkit for bidirectional quantum secret sharing with polarized
//! single photons.
//!
//! - [`qubit`]: single-photon states, the four protocol states, `I`/`U`
//!   encodings and projective measurement.
//! - [`channel`]: lossy, noisy channel legs with an optional tap.
//! - [`adversary`]: intercept-resend attacks and the information bound.
//! - [`protocol`]: multi-party key generation and the naive BB84 baseline.
//! - [`splitting`]: secret splitting in ping-pong and block modes.
//! - [`analysis`]: efficiency and detection formulas and estimators.
//! - [`cli`]: configuration files, experiment runner and output writers
//!   behind the `qss-sim` binary.

pub mod adversary;
pub mod analysis;
pub mod bits;
pub mod channel;
pub mod cli;
pub mod error;
pub mod protocol;
pub mod qubit;
pub mod rng;
pub mod splitting;

pub use adversary::{information_bound, AttackLedger, AttackStrategy, Eavesdropper, LegDirection};
pub use analysis::{comparison_table, detection_survival, efficiency, efficiency_vs_delta};
pub use bits::BitString;
pub use channel::{AgentLegs, ChannelLeg, NoiseModel};
pub use error::{Error, Result};
pub use protocol::{run_keygen, run_naive_qss, Decision, RunConfig, RunReport};
pub use qubit::{Basis, EncodeOp, PrepRecord, Qubit};
pub use splitting::{recombine, run_split_block, run_split_pingpong, SplitConfig, SplitMode, SplitReport};
