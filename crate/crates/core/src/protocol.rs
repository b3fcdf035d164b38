//! Multi-party key generation.
//!
//! Each round the dealer prepares one photon per agent in a uniformly random
//! protocol state (a product state over agents) and sends it out. On a
//! sampled round every agent measures its photon in a random basis and
//! announces basis and outcome (first check). Otherwise each agent applies a
//! random `I` or `U`, and returns the photon; the dealer measures it in the
//! basis she prepared it in and reads the operation off the bit flip. After
//! all rounds the dealer samples decoded rounds and asks the agents to
//! announce their operations (second check). Rounds that survive both checks
//! form the agents' keys `K_i`; the dealer's key is the XOR of her decoded
//! bits.
//!
//! [`run_naive_qss`] implements the baseline built from two independent
//! BB84 sessions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{AttackLedger, AttackStrategy, Eavesdropper, LegDirection, TapPoint};
use crate::analysis::EfficiencyRecord;
use crate::bits::BitString;
use crate::channel::{check_probability, transmit, AgentLegs};
use crate::error::{Error, Result};
use crate::qubit::{apply, measure, prepare, Basis, EncodeOp, PrepRecord};
use crate::rng::{substream, SimRng, STREAM_CHECK2, STREAM_VERIFY};

pub const DEFAULT_CHECK_FRACTION: f64 = 0.1;
/// One-way BB84 error threshold.
pub const DEFAULT_ABORT_THRESHOLD: f64 = 0.11;

fn default_check_fraction() -> f64 {
    DEFAULT_CHECK_FRACTION
}

fn default_abort_threshold() -> f64 {
    DEFAULT_ABORT_THRESHOLD
}

/// Full description of a key-generation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_agents: usize,
    pub n_photons: usize,
    /// Fraction of rounds the agents sample for the first check.
    #[serde(default = "default_check_fraction")]
    pub check1_fraction: f64,
    /// Fraction of decoded rounds the dealer samples for the second check.
    #[serde(default = "default_check_fraction")]
    pub check2_fraction: f64,
    #[serde(default = "default_abort_threshold")]
    pub abort_threshold: f64,
    /// One entry per agent; empty means every link is ideal.
    #[serde(default)]
    pub legs: Vec<AgentLegs>,
    #[serde(default)]
    pub attack: AttackStrategy,
    pub seed: u64,
}

impl RunConfig {
    /// Ideal channels, no attacker, default threshold.
    pub fn ideal(n_agents: usize, n_photons: usize, check1: f64, check2: f64, seed: u64) -> Self {
        RunConfig {
            n_agents,
            n_photons,
            check1_fraction: check1,
            check2_fraction: check2,
            abort_threshold: DEFAULT_ABORT_THRESHOLD,
            legs: Vec::new(),
            attack: AttackStrategy::None,
            seed,
        }
    }

    /// Installs `attack` on the given legs of `agent`.
    pub fn with_attack(mut self, attack: AttackStrategy, agent: usize, forward: bool, back: bool) -> Self {
        if self.legs.is_empty() {
            self.legs = vec![AgentLegs::ideal(); self.n_agents];
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
        if self.n_agents < 2 {
            return Err(Error::config("n_agents", "at least two agents are required"));
        }
        if self.n_photons == 0 {
            return Err(Error::config("n_photons", "must be positive"));
        }
        check_fraction("check1_fraction", self.check1_fraction)?;
        check_fraction("check2_fraction", self.check2_fraction)?;
        check_probability("abort_threshold", self.abort_threshold)?;
        validate_legs(&self.legs, self.n_agents, &self.attack)
    }
}

/// Check fractions live in `0 < delta <= 1/2`.
pub(crate) fn check_fraction(field: &str, delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 0.5 {
        Ok(())
    } else {
        Err(Error::config(field, format!("{delta} violates 0 < δ ≤ 1/2")))
    }
}

pub(crate) fn validate_legs(legs: &[AgentLegs], n_agents: usize, attack: &AttackStrategy) -> Result<()> {
    if !legs.is_empty() && legs.len() != n_agents {
        return Err(Error::config(
            "legs",
            format!("expected {n_agents} entries (one per agent), got {}", legs.len()),
        ));
    }
    for (i, l) in legs.iter().enumerate() {
        l.forward.validate(&format!("legs[{i}].forward"))?;
        l.back.validate(&format!("legs[{i}].return"))?;
    }
    if let AttackStrategy::DishonestAgent { insider } = *attack {
        if insider >= n_agents {
            return Err(Error::config(
                "attack.insider",
                format!("agent {insider} does not exist (n_agents = {n_agents})"),
            ));
        }
        if let Some(l) = legs.get(insider) {
            if l.forward.tapped || l.back.tapped {
                return Err(Error::config(
                    "attack.insider",
                    "a dishonest agent taps only the other agents' legs",
                ));
            }
        }
    }
    Ok(())
}

/// What an agent did with the photon it received.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AgentEvent {
    /// Measured for the first check and announced.
    Checked {
        basis: Basis,
        outcome: bool,
    },
    Encoded {
        op: EncodeOp,
    },
    /// Lost on the forward leg.
    NotReceived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DealerOutcome {
    Measured {
        outcome: bool,
        decoded: EncodeOp,
    },
    /// Lost on the return leg.
    Lost,
    /// No photon was due back (checked by the agent or never delivered).
    NotReturned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentRound {
    pub prep: PrepRecord,
    pub event: AgentEvent,
    pub dealer: DealerOutcome,
}

/// Per-round log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTranscript {
    pub round: u64,
    /// Sampled for the agents' check.
    pub check1: bool,
    pub agents: Vec<AgentRound>,
    /// Some photon of the round was lost; the round contributes nothing.
    pub void: bool,
    /// Sampled for the dealer's check.
    pub check2: bool,
}

impl RoundTranscript {
    /// Decoded and neither checked nor void.
    pub fn is_key_round(&self) -> bool {
        !self.void && !self.check1 && !self.check2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "reason")]
pub enum Decision {
    Accept,
    Abort(String),
}

impl Decision {
    pub fn is_accept(&self) -> bool {
        matches!(self, Decision::Accept)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    Bidirectional,
    NaiveQkd,
}

/// Efficiency accounting, with and without the classical bits spent on checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyAccounting {
    /// Key rounds only; check announcements excluded from `b_t`.
    pub paper: EfficiencyRecord,
    /// Every classical announcement counted.
    pub full: EfficiencyRecord,
    /// Per-session efficiencies (naive baseline only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sessions: Vec<EfficiencyRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub protocol: ProtocolKind,
    pub seed: u64,
    pub n_agents: usize,
    pub n_photons: usize,
    /// `K_i`, the agents' own operation bits on key rounds.
    pub agent_keys: Vec<BitString>,
    /// `K_A`.
    pub dealer_key: BitString,
    /// Per-agent first-check error rate; `None` with no comparable event.
    pub check1_error: Vec<Option<f64>>,
    pub check2_error: Vec<Option<f64>>,
    pub decision: Decision,
    pub efficiency: EfficiencyAccounting,
    pub void_rounds: usize,
}

/// A key-generation run with its full transcript and the attacker's ledger.
#[derive(Debug, Clone)]
pub struct KeygenRun {
    pub report: RunReport,
    pub transcript: Vec<RoundTranscript>,
    pub ledger: AttackLedger,
}

/// Reads the agent's operation from the dealer's measurement.
pub fn decode_round(prep: PrepRecord, outcome: bool) -> EncodeOp {
    EncodeOp::from_bit(outcome != prep.bit)
}

pub fn run_keygen(cfg: &RunConfig) -> Result<RunReport> {
    run_keygen_traced(cfg).map(|r| r.report)
}

pub fn run_keygen_traced(cfg: &RunConfig) -> Result<KeygenRun> {
    cfg.validate()?;
    let legs: Vec<AgentLegs> = (0..cfg.n_agents).map(|i| cfg.legs_for(i)).collect();
    let mut eve = Eavesdropper::new(cfg.attack);

    let mut transcript: Vec<RoundTranscript> = (0..cfg.n_photons as u64)
        .map(|round| {
            let mut rng = substream(cfg.seed, round);
            keygen_round(round, cfg.check1_fraction, &legs, &mut eve, &mut rng)
        })
        .collect();

    let mut sel = substream(cfg.seed, STREAM_CHECK2);
    for t in transcript.iter_mut().filter(|t| !t.void && !t.check1) {
        t.check2 = sel.random_bool(cfg.check2_fraction);
    }

    let report = summarize_keygen(cfg, &transcript)?;
    eve.ledger.sort_by_round();
    Ok(KeygenRun {
        report,
        transcript,
        ledger: eve.ledger,
    })
}

fn keygen_round(
    round: u64,
    check1_fraction: f64,
    legs: &[AgentLegs],
    eve: &mut Eavesdropper,
    rng: &mut SimRng,
) -> RoundTranscript {
    let check1 = rng.random_bool(check1_fraction);
    let mut void = false;
    let agents = legs
        .iter()
        .enumerate()
        .map(|(agent, leg)| {
            let prep = PrepRecord::random(rng);
            let at = |direction| TapPoint {
                round,
                agent,
                direction,
            };
            let Some(arrived) = transmit(
                &leg.forward,
                prepare(prep),
                rng,
                Some((&mut *eve, at(LegDirection::Forward))),
            ) else {
                void = true;
                return AgentRound {
                    prep,
                    event: AgentEvent::NotReceived,
                    dealer: DealerOutcome::NotReturned,
                };
            };
            if check1 {
                let basis = Basis::random(rng);
                let (outcome, _) = measure(&arrived, basis, rng);
                return AgentRound {
                    prep,
                    event: AgentEvent::Checked { basis, outcome },
                    dealer: DealerOutcome::NotReturned,
                };
            }
            let op = EncodeOp::random(rng);
            let encoded = apply(op, arrived);
            let dealer = match transmit(&leg.back, encoded, rng, Some((&mut *eve, at(LegDirection::Return)))) {
                Some(back) => {
                    let (outcome, _) = measure(&back, prep.basis, rng);
                    DealerOutcome::Measured {
                        outcome,
                        decoded: decode_round(prep, outcome),
                    }
                }
                None => {
                    void = true;
                    DealerOutcome::Lost
                }
            };
            AgentRound {
                prep,
                event: AgentEvent::Encoded { op },
                dealer,
            }
        })
        .collect();
    RoundTranscript {
        round,
        check1,
        agents,
        void,
        check2: false,
    }
}

fn rate(mismatches: usize, comparable: usize) -> Option<f64> {
    (comparable > 0).then(|| mismatches as f64 / comparable as f64)
}

fn summarize_keygen(cfg: &RunConfig, transcript: &[RoundTranscript]) -> Result<RunReport> {
    let n = cfg.n_agents;
    let mut c1 = vec![(0usize, 0usize); n];
    let mut c2 = vec![(0usize, 0usize); n];
    let mut announcements = 0usize;
    let mut agent_keys = vec![BitString::new(); n];
    let mut dealer_view = vec![BitString::new(); n];

    for t in transcript.iter().filter(|t| !t.void) {
        for (i, a) in t.agents.iter().enumerate() {
            match (a.event, a.dealer) {
                (AgentEvent::Checked { basis, outcome }, _) => {
                    // basis and outcome
                    announcements += 2;
                    if basis == a.prep.basis {
                        c1[i].1 += 1;
                        c1[i].0 += (outcome != a.prep.bit) as usize;
                    }
                }
                (AgentEvent::Encoded { op }, DealerOutcome::Measured { decoded, .. }) => {
                    if t.check2 {
                        announcements += 1;
                        c2[i].1 += 1;
                        c2[i].0 += (decoded != op) as usize;
                    } else {
                        agent_keys[i].push(op.bit());
                        dealer_view[i].push(decoded.bit());
                    }
                }
                _ => {}
            }
        }
    }

    let check1_error: Vec<Option<f64>> = c1.iter().map(|&(k, m)| rate(k, m)).collect();
    let check2_error: Vec<Option<f64>> = c2.iter().map(|&(k, m)| rate(k, m)).collect();
    let decision = threshold_decision(&check1_error, &check2_error, cfg.abort_threshold);
    let dealer_key = BitString::xor_all(&dealer_view)?;

    let b_s = agent_keys.iter().map(BitString::len).sum::<usize>() as f64;
    let q_t = (n * cfg.n_photons) as f64;
    let efficiency = EfficiencyAccounting {
        paper: EfficiencyRecord::new(b_s, q_t, 0.0)?,
        full: EfficiencyRecord::new(b_s, q_t, announcements as f64)?,
        sessions: Vec::new(),
    };

    Ok(RunReport {
        protocol: ProtocolKind::Bidirectional,
        seed: cfg.seed,
        n_agents: n,
        n_photons: cfg.n_photons,
        agent_keys,
        dealer_key,
        check1_error,
        check2_error,
        decision,
        efficiency,
        void_rounds: transcript.iter().filter(|t| t.void).count(),
    })
}

fn threshold_decision(check1: &[Option<f64>], check2: &[Option<f64>], threshold: f64) -> Decision {
    for (name, rates) in [("first", check1), ("second", check2)] {
        for (i, r) in rates.iter().enumerate() {
            if let Some(r) = r.filter(|r| *r > threshold) {
                return Decision::Abort(format!(
                    "agent {i} {name}-check error rate {r:.4} exceeds {threshold:.4}"
                ));
            }
        }
    }
    Decision::Accept
}

/// Outcome of comparing the agents' combined key against the dealer's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyComparison {
    pub sampled: usize,
    pub mismatches: usize,
    pub rate: f64,
    pub accepted: bool,
}

/// XORs the agents' keys and compares a random `sample_fraction` of
/// positions with the dealer's key. Accepts iff the mismatch rate is at most
/// `threshold`. Returns the sampled positions alongside the verdict.
pub fn verify_combined_key<R: Rng + ?Sized>(
    dealer_key: &BitString,
    agent_keys: &[BitString],
    sample_fraction: f64,
    threshold: f64,
    rng: &mut R,
) -> Result<(KeyComparison, Vec<usize>)> {
    check_probability("sample_fraction", sample_fraction)?;
    let combined = BitString::xor_all(agent_keys)?;
    if combined.len() != dealer_key.len() {
        return Err(Error::LengthMismatch {
            left: dealer_key.len(),
            right: combined.len(),
        });
    }
    let positions: Vec<usize> = (0..dealer_key.len())
        .filter(|_| rng.random_bool(sample_fraction))
        .collect();
    let mismatches = positions
        .iter()
        .filter(|&&p| dealer_key.get(p) != combined.get(p))
        .count();
    let rate = if positions.is_empty() {
        0.0
    } else {
        mismatches as f64 / positions.len() as f64
    };
    Ok((
        KeyComparison {
            sampled: positions.len(),
            mismatches,
            rate,
            accepted: rate <= threshold,
        },
        positions,
    ))
}

/// Naive baseline run plus the attacker's ledger.
#[derive(Debug, Clone)]
pub struct NaiveRun {
    pub report: RunReport,
    pub comparison: KeyComparison,
    pub ledger: AttackLedger,
}

pub fn run_naive_qss(cfg: &RunConfig) -> Result<RunReport> {
    run_naive_qss_traced(cfg).map(|r| r.report)
}

/// Two independent BB84 sessions (dealer to each agent over the forward
/// legs), combined into `K_A = K_B xor K_C` and checked by sampling.
///
/// The dealer tolerates no mismatch when both links are noiseless, and up to
/// `abort_threshold` otherwise. The `check2_fraction` is used as the sample
/// fraction of the consistency test.
pub fn run_naive_qss_traced(cfg: &RunConfig) -> Result<NaiveRun> {
    cfg.validate()?;
    if cfg.n_agents != 2 {
        return Err(Error::config(
            "n_agents",
            "the naive baseline is defined for exactly two agents",
        ));
    }
    let mut eve = Eavesdropper::new(cfg.attack);
    let mut dealer_sifted = Vec::new();
    let mut agent_sifted = Vec::new();
    let mut sessions = Vec::new();
    for agent in 0..2 {
        let leg = cfg.legs_for(agent).forward;
        let mut dealer = BitString::new();
        let mut mine = BitString::new();
        for round in 0..cfg.n_photons as u64 {
            let mut rng = substream(cfg.seed, ((agent as u64) << 48) | round);
            let prep = PrepRecord::random(&mut rng);
            let at = TapPoint {
                round,
                agent,
                direction: LegDirection::Forward,
            };
            let Some(arrived) = transmit(&leg, prepare(prep), &mut rng, Some((&mut eve, at))) else {
                continue;
            };
            let basis = Basis::random(&mut rng);
            let (outcome, _) = measure(&arrived, basis, &mut rng);
            if basis == prep.basis {
                dealer.push(prep.bit);
                mine.push(outcome);
            }
        }
        // one basis announcement per qubit
        sessions.push(EfficiencyRecord::new(
            dealer.len() as f64,
            cfg.n_photons as f64,
            cfg.n_photons as f64,
        )?);
        dealer_sifted.push(dealer);
        agent_sifted.push(mine);
    }

    let m = dealer_sifted.iter().map(BitString::len).min().unwrap_or(0);
    let truncate = |s: &BitString| s.iter().take(m).collect::<BitString>();
    let dealer_parts: Vec<BitString> = dealer_sifted.iter().map(truncate).collect();
    let agent_parts: Vec<BitString> = agent_sifted.iter().map(truncate).collect();
    let dealer_full = BitString::xor_all(&dealer_parts)?;

    let noiseless = (0..2).all(|i| cfg.legs_for(i).is_noiseless());
    let threshold = if noiseless { 0.0 } else { cfg.abort_threshold };
    let mut rng = substream(cfg.seed, STREAM_VERIFY);
    let (comparison, sampled) =
        verify_combined_key(&dealer_full, &agent_parts, cfg.check2_fraction, threshold, &mut rng)?;

    // sampled positions were announced and leave the key
    let mut keep = vec![true; m];
    for p in &sampled {
        keep[*p] = false;
    }
    let strip = |s: &BitString| {
        s.iter()
            .zip(&keep)
            .filter_map(|(b, k)| k.then_some(b))
            .collect::<BitString>()
    };
    let agent_keys: Vec<BitString> = agent_parts.iter().map(strip).collect();
    let dealer_key = strip(&dealer_full);

    let decision = if comparison.accepted {
        Decision::Accept
    } else {
        Decision::Abort(format!(
            "combined-key mismatch rate {:.4} exceeds {threshold:.4}",
            comparison.rate
        ))
    };

    let q_t = (2 * cfg.n_photons) as f64;
    let b_t = q_t + comparison.sampled as f64;
    let efficiency = EfficiencyAccounting {
        paper: EfficiencyRecord::new(m as f64, q_t, q_t)?,
        full: EfficiencyRecord::new(dealer_key.len() as f64, q_t, b_t)?,
        sessions,
    };

    let report = RunReport {
        protocol: ProtocolKind::NaiveQkd,
        seed: cfg.seed,
        n_agents: 2,
        n_photons: cfg.n_photons,
        agent_keys,
        dealer_key,
        check1_error: vec![None, None],
        check2_error: vec![Some(comparison.rate); 2],
        decision,
        efficiency,
        void_rounds: 0,
    };
    eve.ledger.sort_by_round();
    Ok(NaiveRun {
        report,
        comparison,
        ledger: eve.ledger,
    })
}
