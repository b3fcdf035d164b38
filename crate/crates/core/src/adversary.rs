//! Eavesdropping strategies and the attacker's ledger.
//!
//! Attacks are intercept-resend: the photon is measured in some basis, the
//! outcome kept as a guess, and the collapsed eigenstate forwarded. The
//! dishonest-agent model is the same attack run by an insider on the other
//! agents' legs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{measure, Basis, Qubit};
use rand::Rng;

/// Direction of travel along an agent's round trip. `Forward` is the first
/// traversal of a photon (dealer to agent when generating keys, sender to
/// dealer when splitting), `Return` the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegDirection {
    Forward,
    Return,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AttackStrategy {
    #[default]
    None,
    InterceptResendRandomBasis,
    InterceptResendFixedBasis {
        basis: Basis,
    },
    /// An agent who knows its own operations and intercepts the other
    /// agents' tapped legs with random bases.
    DishonestAgent {
        insider: usize,
    },
}

impl AttackStrategy {
    pub fn is_none(&self) -> bool {
        matches!(self, AttackStrategy::None)
    }

    /// Basis used for the next interception.
    fn choose_basis<R: Rng + ?Sized>(&self, rng: &mut R) -> Basis {
        match self {
            AttackStrategy::InterceptResendFixedBasis { basis } => *basis,
            _ => Basis::random(rng),
        }
    }
}

/// Where an interception happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TapPoint {
    pub round: u64,
    pub agent: usize,
    pub direction: LegDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnedBit {
    pub at: TapPoint,
    pub basis: Basis,
    pub guess: bool,
}

/// Everything the attacker observed in one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttackLedger {
    intercept_count: usize,
    learned_bits: Vec<LearnedBit>,
}

impl AttackLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, bit: LearnedBit) {
        self.intercept_count += 1;
        self.learned_bits.push(bit);
    }

    pub fn intercept_count(&self) -> usize {
        self.intercept_count
    }

    pub fn learned_bits(&self) -> &[LearnedBit] {
        &self.learned_bits
    }

    /// Legs tapped in `round`, in interception order.
    pub fn tapped_legs(&self, round: u64) -> Vec<(usize, LegDirection)> {
        self.learned_bits
            .iter()
            .filter(|b| b.at.round == round)
            .map(|b| (b.at.agent, b.at.direction))
            .collect()
    }

    /// The guess taken at a particular leg, if that leg was tapped.
    pub fn guess_at(&self, round: u64, agent: usize, direction: LegDirection) -> Option<&LearnedBit> {
        let start = self.learned_bits.partition_point(|b| b.at.round < round);
        self.learned_bits[start..]
            .iter()
            .take_while(|b| b.at.round == round)
            .find(|b| b.at.agent == agent && b.at.direction == direction)
    }

    /// Appends a shard recorded by another worker.
    pub fn merge(&mut self, other: AttackLedger) {
        self.intercept_count += other.intercept_count;
        self.learned_bits.extend(other.learned_bits);
        self.sort_by_round();
    }

    /// Stable sort of the learned bits by round; `guess_at` relies on it.
    pub(crate) fn sort_by_round(&mut self) {
        self.learned_bits.sort_by_key(|b| b.at.round);
    }
}

/// Measures `q` in `basis_choice` and resends the collapsed eigenstate.
pub fn intercept_resend<R: Rng + ?Sized>(q: &Qubit, basis_choice: Basis, rng: &mut R) -> (Qubit, bool) {
    let (guess, collapsed) = measure(q, basis_choice, rng);
    (collapsed, guess)
}

/// An active attacker: a strategy plus its ledger.
#[derive(Debug, Clone, Default)]
pub struct Eavesdropper {
    pub strategy: AttackStrategy,
    pub ledger: AttackLedger,
}

impl Eavesdropper {
    pub fn new(strategy: AttackStrategy) -> Self {
        Eavesdropper {
            strategy,
            ledger: AttackLedger::new(),
        }
    }

    /// Acts on a photon passing a tapped leg. A `None` strategy passes the
    /// photon through untouched.
    pub fn intercept<R: Rng + ?Sized>(&mut self, q: Qubit, at: TapPoint, rng: &mut R) -> Qubit {
        if self.strategy.is_none() {
            return q;
        }
        let basis = self.strategy.choose_basis(rng);
        let (resent, guess) = intercept_resend(&q, basis, rng);
        self.ledger.record(LearnedBit { at, basis, guess });
        resent
    }
}

/// Binary Shannon entropy `H(eps)`, the per-qubit bound on what an attacker
/// inducing error rate `eps` can learn. Uses `0 log 0 = 0`.
pub fn information_bound(epsilon: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&epsilon) || epsilon.is_nan() {
        return Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            domain: "[0, 1]",
        });
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(epsilon) + term(1.0 - epsilon))
}
