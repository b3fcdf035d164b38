//! Quantum channel legs with loss, Pauli noise, depolarization and an
//! optional eavesdropper tap.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{Eavesdropper, TapPoint};
use crate::error::{Error, Result};
use crate::qubit::{prepare, PrepRecord, Qubit};

/// Independent noise processes applied on every traversal, in the order
/// flip, phase, depolarize.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    /// Probability of a sigma_x.
    pub flip_prob: f64,
    /// Probability of a sigma_z.
    pub phase_prob: f64,
    /// Probability of replacing the state by one of the four protocol states
    /// chosen uniformly.
    pub depol_prob: f64,
}

impl NoiseModel {
    pub fn is_noiseless(&self) -> bool {
        self.flip_prob == 0.0 && self.phase_prob == 0.0 && self.depol_prob == 0.0
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        check_probability(&format!("{field}.flip_prob"), self.flip_prob)?;
        check_probability(&format!("{field}.phase_prob"), self.phase_prob)?;
        check_probability(&format!("{field}.depol_prob"), self.depol_prob)
    }

    pub fn apply<R: Rng + ?Sized>(&self, mut q: Qubit, rng: &mut R) -> Qubit {
        if rng.random_bool(self.flip_prob) {
            q = q.sigma_x();
        }
        if rng.random_bool(self.phase_prob) {
            q = q.sigma_z();
        }
        if rng.random_bool(self.depol_prob) {
            q = prepare(PrepRecord::random(rng));
        }
        q
    }
}

/// One direction of one agent's link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelLeg {
    pub survival_prob: f64,
    pub noise: NoiseModel,
    /// Whether the run's attacker sits on this leg.
    pub tapped: bool,
}

impl Default for ChannelLeg {
    fn default() -> Self {
        ChannelLeg::ideal()
    }
}

impl ChannelLeg {
    /// Lossless, noiseless, untapped.
    pub fn ideal() -> Self {
        ChannelLeg {
            survival_prob: 1.0,
            noise: NoiseModel::default(),
            tapped: false,
        }
    }

    pub fn with_tap(mut self) -> Self {
        self.tapped = true;
        self
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_survival(mut self, survival_prob: f64) -> Self {
        self.survival_prob = survival_prob;
        self
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        check_probability(&format!("{field}.survival_prob"), self.survival_prob)?;
        self.noise.validate(&format!("{field}.noise"))
    }
}

/// Both legs of an agent's round trip.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentLegs {
    pub forward: ChannelLeg,
    #[serde(rename = "return")]
    pub back: ChannelLeg,
}

impl AgentLegs {
    pub fn ideal() -> Self {
        AgentLegs::default()
    }

    pub fn is_noiseless(&self) -> bool {
        self.forward.noise.is_noiseless() && self.back.noise.is_noiseless()
    }
}

/// Sends `q` across `leg`. Returns `None` when the photon is lost.
///
/// Loss is sampled first; a tapped leg then hands the photon to the
/// attacker, and channel noise acts last.
pub fn transmit<R: Rng + ?Sized>(
    leg: &ChannelLeg,
    q: Qubit,
    rng: &mut R,
    adversary: Option<(&mut Eavesdropper, TapPoint)>,
) -> Option<Qubit> {
    if !rng.random_bool(leg.survival_prob) {
        return None;
    }
    let q = match adversary {
        Some((eve, at)) if leg.tapped => eve.intercept(q, at, rng),
        _ => q,
    };
    Some(leg.noise.apply(q, rng))
}

pub(crate) fn check_probability(field: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::config(field, format!("{p} is not a probability in [0, 1]")))
    }
}
