//! Secret splitting.
//!
//! The dealer draws a one-time pad `L`, forms `G = L xor S`, and delivers `L`
//! to the first agent and `G` to the second by encoding `I`/`U` on photons the
//! agents send her. Two variants:
//!
//! - **Ping-pong**: photons travel one at a time. For each arriving photon
//!   the dealer picks control mode with probability `p_s` (measure in a random
//!   basis, the sender announces its preparation) or message mode (encode the
//!   next bit, or a random redundancy operation, and send it back). The sender
//!   decodes in its preparation basis; redundancy positions are announced
//!   after the stream and dropped.
//! - **Block**: each sender ships a whole block first. The dealer samples a
//!   fraction for the eavesdropping check and only encodes if the block is
//!   clean, so an attack on the first phase leaks nothing.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{AttackLedger, AttackStrategy, Eavesdropper, LegDirection, TapPoint};
use crate::bits::BitString;
use crate::channel::{check_probability, transmit, AgentLegs};
use crate::error::{Error, Result};
use crate::protocol::{check_fraction, validate_legs, Decision, DEFAULT_ABORT_THRESHOLD};
use crate::qubit::{apply, measure, prepare, Basis, EncodeOp, PrepRecord, Qubit};
use crate::rng::{substream, SimRng, STREAM_BLOCK_LAYOUT, STREAM_PAD};

/// Number of senders (the pad holder and the ciphertext holder).
pub const SENDERS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    PingPong,
    Block,
}

fn default_control_prob() -> f64 {
    0.1
}
fn default_redundancy() -> f64 {
    0.1
}
fn default_check_fraction() -> f64 {
    0.1
}
fn default_threshold() -> f64 {
    DEFAULT_ABORT_THRESHOLD
}
fn default_window() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub secret: BitString,
    pub mode: SplitMode,
    /// Probability `p_s` of control mode (ping-pong).
    #[serde(default = "default_control_prob")]
    pub control_prob: f64,
    /// Redundancy rate `r`.
    #[serde(default = "default_redundancy")]
    pub redundancy_rate: f64,
    /// Fraction of each block checked before encoding (block).
    #[serde(default = "default_check_fraction")]
    pub check_fraction: f64,
    #[serde(default = "default_threshold")]
    pub abort_threshold: f64,
    /// Control events between running-error evaluations (ping-pong).
    #[serde(default = "default_window")]
    pub abort_window: usize,
    /// Photons per block; the smallest admissible size when absent.
    #[serde(default)]
    pub block_size: Option<usize>,
    /// Photon budget per sender stream (ping-pong); unlimited when absent.
    #[serde(default)]
    pub max_photons: Option<usize>,
    /// `[first agent, second agent]`; `forward` is sender to dealer.
    #[serde(default)]
    pub legs: Vec<AgentLegs>,
    #[serde(default)]
    pub attack: AttackStrategy,
    pub seed: u64,
}

impl SplitConfig {
    pub fn ideal(secret: BitString, mode: SplitMode, seed: u64) -> Self {
        SplitConfig {
            secret,
            mode,
            control_prob: default_control_prob(),
            redundancy_rate: default_redundancy(),
            check_fraction: default_check_fraction(),
            abort_threshold: DEFAULT_ABORT_THRESHOLD,
            abort_window: default_window(),
            block_size: None,
            max_photons: None,
            legs: Vec::new(),
            attack: AttackStrategy::None,
            seed,
        }
    }

    pub fn with_attack(mut self, attack: AttackStrategy, agent: usize, forward: bool, back: bool) -> Self {
        if self.legs.is_empty() {
            self.legs = vec![AgentLegs::ideal(); SENDERS];
        }
        if let Some(l) = self.legs.get_mut(agent) {
            l.forward.tapped |= forward;
            l.back.tapped |= back;
        }
        self.attack = attack;
        self
    }

    pub fn legs_for(&self, agent: usize) -> AgentLegs {
        self.legs.get(agent).copied().unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        if self.secret.is_empty() {
            return Err(Error::config("secret", "must contain at least one bit"));
        }
        if !(self.control_prob > 0.0 && self.control_prob < 1.0) {
            return Err(Error::config(
                "control_prob",
                format!("{} is outside (0, 1)", self.control_prob),
            ));
        }
        if !(0.0..1.0).contains(&self.redundancy_rate) {
            return Err(Error::config(
                "redundancy_rate",
                format!("{} is outside [0, 1)", self.redundancy_rate),
            ));
        }
        check_probability("abort_threshold", self.abort_threshold)?;
        if self.abort_window == 0 {
            return Err(Error::config("abort_window", "must be positive"));
        }
        validate_legs(&self.legs, SENDERS, &self.attack)?;
        match self.mode {
            SplitMode::PingPong => {
                if let Some(max) = self.max_photons {
                    let need = self.secret.len() as f64 / ((1.0 - self.control_prob) * (1.0 - self.redundancy_rate));
                    if (max as f64) < need.ceil() {
                        return Err(Error::config(
                            "max_photons",
                            format!(
                                "{max} photons cannot carry {} message bits (need about {})",
                                self.secret.len(),
                                need.ceil()
                            ),
                        ));
                    }
                }
            }
            SplitMode::Block => {
                check_fraction("check_fraction", self.check_fraction)?;
                if let Some(b) = self.block_size {
                    let need = minimum_block_size(self.secret.len(), self.check_fraction, self.redundancy_rate);
                    if b < need {
                        return Err(Error::config(
                            "block_size",
                            format!("{b} is too small: |block| ≥ |S|/((1−δ₁)(1−r)) requires {need}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Checked positions in a block of `b` photons.
fn check_count(block: usize, check_fraction: f64) -> usize {
    (check_fraction * block as f64).ceil() as usize
}

/// Smallest block whose unchecked part, after redundancy at rate `r`, still
/// carries `message_len` bits.
pub fn minimum_block_size(message_len: usize, check_fraction: f64, redundancy_rate: f64) -> usize {
    let carriers = (message_len as f64 / (1.0 - redundancy_rate)).ceil() as usize;
    let mut b = carriers;
    while b - check_count(b, check_fraction).min(b) < carriers {
        b += 1;
    }
    b
}

/// Draws the pad and forms the ciphertext share: `(L, L xor S)`.
pub fn split_secret<R: Rng + ?Sized>(secret: &BitString, rng: &mut R) -> (BitString, BitString) {
    let pad = BitString::random(secret.len(), rng);
    let cipher = pad.xor(secret).expect("pad has the secret's length");
    (pad, cipher)
}

/// `S = L xor G`.
pub fn recombine(pad: &BitString, cipher: &BitString) -> Result<BitString> {
    pad.xor(cipher)
}

/// Fate of one photon of a sender's stream or block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PhotonKind {
    /// Lost between sender and dealer.
    LostForward,
    /// Measured by the dealer for the eavesdropping check.
    Control {
        basis: Basis,
        outcome: bool,
        comparable: bool,
    },
    /// Encoded and returned. `decoded` is `None` when lost on the way back.
    Message {
        op: EncodeOp,
        redundancy: bool,
        decoded: Option<bool>,
    },
    /// Stored by the dealer and never encoded (block variant after an abort).
    Stored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhotonEvent {
    pub index: usize,
    pub prep: PrepRecord,
    #[serde(flatten)]
    pub kind: PhotonKind,
}

/// Everything sent over the public classical channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClassicalMessage {
    /// The sender reveals how it prepared a control photon.
    PrepAnnouncement {
        sender: usize,
        photon: usize,
        basis: Basis,
        bit: bool,
    },
    LossNotice {
        sender: usize,
        photon: usize,
        direction: LegDirection,
    },
    CheckPositions {
        sender: usize,
        positions: Vec<usize>,
    },
    RedundancyPositions {
        sender: usize,
        positions: Vec<usize>,
    },
    Abort {
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DetectionStats {
    pub photons_sent: usize,
    pub control_events: usize,
    pub comparable: usize,
    pub mismatches: usize,
    pub message_photons: usize,
    pub redundancy_photons: usize,
    pub encode_ops: usize,
    /// At least one comparable control event disagreed.
    pub detected: bool,
    /// Message photons already sent when the first mismatch appeared.
    pub message_photons_before_detection: Option<usize>,
}

impl DetectionStats {
    pub fn error_rate(&self) -> Option<f64> {
        (self.comparable > 0).then(|| self.mismatches as f64 / self.comparable as f64)
    }

    fn score(&mut self, comparable: bool, mismatch: bool) {
        self.control_events += 1;
        if comparable {
            self.comparable += 1;
            if mismatch {
                self.mismatches += 1;
                self.detected = true;
                self.message_photons_before_detection
                    .get_or_insert(self.message_photons);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub mode: SplitMode,
    pub seed: u64,
    /// `L` as decoded by the first agent.
    pub bob_share: BitString,
    /// `G` as decoded by the second agent.
    pub charlie_share: BitString,
    /// `L xor G`; empty when the shares are incomplete.
    pub recovered: BitString,
    pub check_error: Vec<Option<f64>>,
    pub decision: Decision,
    pub detection: Vec<DetectionStats>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitTranscript {
    pub streams: Vec<Vec<PhotonEvent>>,
    pub classical: Vec<ClassicalMessage>,
}

impl SplitTranscript {
    pub fn encode_ops(&self) -> usize {
        self.streams
            .iter()
            .flatten()
            .filter(|e| matches!(e.kind, PhotonKind::Message { .. }))
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct SplitRun {
    pub report: SplitReport,
    /// The dealer's pad `L`.
    pub pad: BitString,
    /// The dealer's ciphertext share `G`.
    pub cipher: BitString,
    pub transcript: SplitTranscript,
    pub ledger: AttackLedger,
}

pub fn run_split(cfg: &SplitConfig) -> Result<SplitReport> {
    run_split_traced(cfg).map(|r| r.report)
}

pub fn run_split_traced(cfg: &SplitConfig) -> Result<SplitRun> {
    match cfg.mode {
        SplitMode::PingPong => run_split_pingpong_traced(cfg),
        SplitMode::Block => run_split_block_traced(cfg),
    }
}

pub fn run_split_pingpong(cfg: &SplitConfig) -> Result<SplitReport> {
    run_split_pingpong_traced(cfg).map(|r| r.report)
}

pub fn run_split_block(cfg: &SplitConfig) -> Result<SplitReport> {
    run_split_block_traced(cfg).map(|r| r.report)
}

struct StreamOutcome {
    events: Vec<PhotonEvent>,
    classical: Vec<ClassicalMessage>,
    /// Decoded bits with redundancy removed.
    share: BitString,
    stats: DetectionStats,
    abort: Option<String>,
}

pub fn run_split_pingpong_traced(cfg: &SplitConfig) -> Result<SplitRun> {
    if cfg.mode != SplitMode::PingPong {
        return Err(Error::config("mode", "expected ping_pong"));
    }
    cfg.validate()?;
    let (pad, cipher) = split_secret(&cfg.secret, &mut substream(cfg.seed, STREAM_PAD));
    let mut eve = Eavesdropper::new(cfg.attack);
    let outcomes: Vec<StreamOutcome> = [&pad, &cipher]
        .into_iter()
        .enumerate()
        .map(|(sender, payload)| {
            let mut rng = substream(cfg.seed, sender as u64);
            pingpong_stream(cfg, sender, payload, &mut eve, &mut rng)
        })
        .collect();
    Ok(assemble(cfg, pad, cipher, outcomes, eve.ledger))
}

fn pingpong_stream(
    cfg: &SplitConfig,
    sender: usize,
    payload: &BitString,
    eve: &mut Eavesdropper,
    rng: &mut SimRng,
) -> StreamOutcome {
    let legs = cfg.legs_for(sender);
    let mut events = Vec::new();
    let mut classical = Vec::new();
    let mut stats = DetectionStats::default();
    let mut raw: Vec<(usize, bool)> = Vec::new();
    let mut redundancy_positions = Vec::new();
    let mut next_bit = 0;
    let mut abort = None;

    while next_bit < payload.len() {
        if cfg.max_photons.is_some_and(|max| stats.photons_sent >= max) {
            abort = Some(format!("sender {sender} exhausted its photon budget"));
            break;
        }
        let index = stats.photons_sent;
        stats.photons_sent += 1;
        let at = |direction| TapPoint {
            round: index as u64,
            agent: sender,
            direction,
        };
        let prep = PrepRecord::random(rng);
        let Some(arrived) = transmit(
            &legs.forward,
            prepare(prep),
            rng,
            Some((&mut *eve, at(LegDirection::Forward))),
        ) else {
            events.push(PhotonEvent {
                index,
                prep,
                kind: PhotonKind::LostForward,
            });
            classical.push(ClassicalMessage::LossNotice {
                sender,
                photon: index,
                direction: LegDirection::Forward,
            });
            continue;
        };

        if rng.random_bool(cfg.control_prob) {
            let (basis, outcome, comparable) = control_measurement(&arrived, prep, rng);
            classical.push(ClassicalMessage::PrepAnnouncement {
                sender,
                photon: index,
                basis: prep.basis,
                bit: prep.bit,
            });
            stats.score(comparable, comparable && outcome != prep.bit);
            events.push(PhotonEvent {
                index,
                prep,
                kind: PhotonKind::Control {
                    basis,
                    outcome,
                    comparable,
                },
            });
            if stats.control_events % cfg.abort_window == 0 {
                if let Some(reason) = running_abort(sender, &stats, cfg.abort_threshold) {
                    abort = Some(reason);
                    break;
                }
            }
            continue;
        }

        stats.message_photons += 1;
        let redundancy = rng.random_bool(cfg.redundancy_rate);
        let op = if redundancy {
            stats.redundancy_photons += 1;
            EncodeOp::random(rng)
        } else {
            EncodeOp::from_bit(payload.get(next_bit).expect("loop guard"))
        };
        stats.encode_ops += 1;
        let back = transmit(
            &legs.back,
            apply(op, arrived),
            rng,
            Some((&mut *eve, at(LegDirection::Return))),
        );
        let decoded = back.map(|q| measure(&q, prep.basis, rng).0 ^ prep.bit);
        events.push(PhotonEvent {
            index,
            prep,
            kind: PhotonKind::Message {
                op,
                redundancy,
                decoded,
            },
        });
        match decoded {
            Some(bit) => {
                raw.push((index, bit));
                if redundancy {
                    redundancy_positions.push(index);
                } else {
                    next_bit += 1;
                }
            }
            // the sender reports the loss and the dealer re-sends the bit
            None => classical.push(ClassicalMessage::LossNotice {
                sender,
                photon: index,
                direction: LegDirection::Return,
            }),
        }
    }

    if abort.is_none() {
        abort = running_abort(sender, &stats, cfg.abort_threshold);
    }
    if let Some(reason) = &abort {
        classical.push(ClassicalMessage::Abort { reason: reason.clone() });
    }
    classical.push(ClassicalMessage::RedundancyPositions {
        sender,
        positions: redundancy_positions.clone(),
    });
    let share = raw
        .into_iter()
        .filter(|(i, _)| redundancy_positions.binary_search(i).is_err())
        .map(|(_, b)| b)
        .collect();
    StreamOutcome {
        events,
        classical,
        share,
        stats,
        abort,
    }
}

/// Dealer measures in a random basis; the sender's announcement is
/// comparable only when its basis matches.
fn control_measurement(q: &Qubit, prep: PrepRecord, rng: &mut SimRng) -> (Basis, bool, bool) {
    let basis = Basis::random(rng);
    let (outcome, _) = measure(q, basis, rng);
    (basis, outcome, basis == prep.basis)
}

fn running_abort(sender: usize, stats: &DetectionStats, threshold: f64) -> Option<String> {
    let rate = stats.error_rate()?;
    (rate > threshold).then(|| {
        format!(
            "sender {sender} control error rate {rate:.4} exceeds {threshold:.4} after {} control events",
            stats.control_events
        )
    })
}

pub fn run_split_block_traced(cfg: &SplitConfig) -> Result<SplitRun> {
    if cfg.mode != SplitMode::Block {
        return Err(Error::config("mode", "expected block"));
    }
    cfg.validate()?;
    let block = cfg
        .block_size
        .unwrap_or_else(|| minimum_block_size(cfg.secret.len(), cfg.check_fraction, cfg.redundancy_rate));
    let (pad, cipher) = split_secret(&cfg.secret, &mut substream(cfg.seed, STREAM_PAD));
    let mut eve = Eavesdropper::new(cfg.attack);
    let mut layout = substream(cfg.seed, STREAM_BLOCK_LAYOUT);
    let mut rngs: Vec<SimRng> = (0..SENDERS as u64).map(|s| substream(cfg.seed, s)).collect();

    // phase 1: both blocks travel to the dealer and are stored
    let mut stored: Vec<Vec<(PrepRecord, Option<Qubit>)>> = Vec::with_capacity(SENDERS);
    let mut classical = Vec::new();
    let mut stats = vec![DetectionStats::default(); SENDERS];
    for (sender, rng) in rngs.iter_mut().enumerate() {
        let leg = cfg.legs_for(sender).forward;
        let photons = (0..block)
            .map(|index| {
                let prep = PrepRecord::random(rng);
                let at = TapPoint {
                    round: index as u64,
                    agent: sender,
                    direction: LegDirection::Forward,
                };
                let q = transmit(&leg, prepare(prep), rng, Some((&mut eve, at)));
                if q.is_none() {
                    classical.push(ClassicalMessage::LossNotice {
                        sender,
                        photon: index,
                        direction: LegDirection::Forward,
                    });
                }
                (prep, q)
            })
            .collect();
        stats[sender].photons_sent = block;
        stored.push(photons);
    }

    // eavesdropping check on a random subset of each block
    let k = check_count(block, cfg.check_fraction);
    let mut events: Vec<Vec<Option<PhotonKind>>> = vec![vec![None; block]; SENDERS];
    for sender in 0..SENDERS {
        let mut positions = sample(&mut layout, block, k).into_vec();
        positions.sort_unstable();
        classical.push(ClassicalMessage::CheckPositions {
            sender,
            positions: positions.clone(),
        });
        for p in positions {
            let (prep, q) = stored[sender][p];
            let Some(q) = q else { continue };
            let (basis, outcome, comparable) = control_measurement(&q, prep, &mut rngs[sender]);
            classical.push(ClassicalMessage::PrepAnnouncement {
                sender,
                photon: p,
                basis: prep.basis,
                bit: prep.bit,
            });
            stats[sender].score(comparable, comparable && outcome != prep.bit);
            events[sender][p] = Some(PhotonKind::Control {
                basis,
                outcome,
                comparable,
            });
        }
    }

    let mut abort = (0..SENDERS).find_map(|s| {
        let rate = stats[s].error_rate()?;
        (rate > cfg.abort_threshold).then(|| {
            format!(
                "sender {s} block check error rate {rate:.4} exceeds {:.4}",
                cfg.abort_threshold
            )
        })
    });
    let carriers: Vec<Vec<usize>> = (0..SENDERS)
        .map(|s| {
            (0..block)
                .filter(|&p| events[s][p].is_none() && stored[s][p].1.is_some())
                .collect()
        })
        .collect();
    if abort.is_none() {
        if let Some(s) = carriers.iter().position(|c| c.len() < cfg.secret.len()) {
            abort = Some(format!("sender {s} block lost too many photons to carry the message"));
        }
    }

    // phase 2: encode and return, only if both blocks are clean
    let mut shares = vec![BitString::new(); SENDERS];
    if abort.is_none() {
        for (sender, payload) in [&pad, &cipher].into_iter().enumerate() {
            let positions = &carriers[sender];
            let leg = cfg.legs_for(sender).back;
            let rng = &mut rngs[sender];
            let mut red = Vec::new();
            let mut raw = Vec::new();
            for (k, &p) in positions.iter().enumerate() {
                let (prep, q) = stored[sender][p];
                let owed = payload.len() - raw.len();
                // spare carriers take random ops; a payload bit lost on return moves to the next carrier
                let redundancy = owed == 0 || (positions.len() - k > owed && rng.random_bool(cfg.redundancy_rate));
                let op = if redundancy {
                    stats[sender].redundancy_photons += 1;
                    red.push(p);
                    EncodeOp::random(rng)
                } else {
                    EncodeOp::from_bit(payload.get(raw.len()).expect("bits owed"))
                };
                stats[sender].message_photons += 1;
                stats[sender].encode_ops += 1;
                let at = TapPoint {
                    round: p as u64,
                    agent: sender,
                    direction: LegDirection::Return,
                };
                let q = q.expect("carrier photons are present");
                let back = transmit(&leg, apply(op, q), rng, Some((&mut eve, at)));
                let decoded = back.map(|q| measure(&q, prep.basis, rng).0 ^ prep.bit);
                match decoded {
                    Some(bit) if !redundancy => raw.push(bit),
                    Some(_) => {}
                    None => classical.push(ClassicalMessage::LossNotice {
                        sender,
                        photon: p,
                        direction: LegDirection::Return,
                    }),
                }
                events[sender][p] = Some(PhotonKind::Message {
                    op,
                    redundancy,
                    decoded,
                });
            }
            classical.push(ClassicalMessage::RedundancyPositions { sender, positions: red });
            if raw.len() < payload.len() && abort.is_none() {
                abort = Some(format!("sender {sender} ran out of carriers after return losses"));
            }
            shares[sender] = raw.into_iter().collect();
        }
    }
    if let Some(reason) = &abort {
        classical.push(ClassicalMessage::Abort { reason: reason.clone() });
    }

    let outcomes = (0..SENDERS)
        .map(|s| {
            let evs = (0..block)
                .map(|p| {
                    let (prep, q) = stored[s][p];
                    let kind = match (events[s][p], q) {
                        (Some(kind), _) => kind,
                        (None, None) => PhotonKind::LostForward,
                        (None, Some(_)) => PhotonKind::Stored,
                    };
                    PhotonEvent { index: p, prep, kind }
                })
                .collect();
            StreamOutcome {
                events: evs,
                classical: Vec::new(),
                share: std::mem::take(&mut shares[s]),
                stats: stats[s],
                abort: None,
            }
        })
        .collect::<Vec<_>>();

    let mut run = assemble(cfg, pad, cipher, outcomes, eve.ledger);
    run.transcript.classical = classical;
    if let Some(reason) = abort {
        run.report.decision = Decision::Abort(reason);
        run.report.recovered = BitString::new();
    }
    Ok(run)
}

fn assemble(
    cfg: &SplitConfig,
    pad: BitString,
    cipher: BitString,
    outcomes: Vec<StreamOutcome>,
    mut ledger: AttackLedger,
) -> SplitRun {
    ledger.sort_by_round();
    let abort = outcomes.iter().find_map(|o| o.abort.clone());
    let mut transcript = SplitTranscript::default();
    let mut detection = Vec::new();
    let mut shares = Vec::new();
    for o in outcomes {
        transcript.streams.push(o.events);
        transcript.classical.extend(o.classical);
        detection.push(o.stats);
        shares.push(o.share);
    }
    let charlie_share = shares.pop().unwrap_or_default();
    let bob_share = shares.pop().unwrap_or_default();
    let complete = bob_share.len() == cfg.secret.len() && charlie_share.len() == cfg.secret.len();
    let recovered = if abort.is_none() && complete {
        recombine(&bob_share, &charlie_share).unwrap_or_default()
    } else {
        BitString::new()
    };
    let decision = match abort {
        Some(reason) => Decision::Abort(reason),
        None => Decision::Accept,
    };
    SplitRun {
        report: SplitReport {
            mode: cfg.mode,
            seed: cfg.seed,
            bob_share,
            charlie_share,
            recovered,
            check_error: detection.iter().map(DetectionStats::error_rate).collect(),
            decision,
            detection,
        },
        pad,
        cipher,
        transcript,
        ledger,
    }
}
