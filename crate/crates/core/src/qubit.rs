//! Single-photon polarization states.
//!
//! A [`Qubit`] is a normalized complex 2-vector `a|0> + b|1>`. The protocol
//! uses four states drawn from two conjugate bases:
//!
//! | record  | state  | amplitudes          |
//! |---------|--------|---------------------|
//! | (Z, 0)  | `|+z>` | (1, 0)              |
//! | (Z, 1)  | `|-z>` | (0, 1)              |
//! | (X, 0)  | `|+x>` | (1/sqrt2, 1/sqrt2)  |
//! | (X, 1)  | `|-x>` | (1/sqrt2, -1/sqrt2) |
//!
//! Agents encode a bit with `I` (0) or `U = i*sigma_y` (1). `U` maps every
//! protocol state to the opposite state of the same basis, up to a global
//! phase, so states are only ever compared with [`equal_up_to_phase`].

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Normalization tolerance.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance on `|<a|b>|` when comparing states up to a global phase.
pub const PHASE_TOLERANCE: f64 = 1e-9;

/// Measuring basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Rectilinear basis, eigenstates of sigma_z.
    Z,
    /// Diagonal basis, eigenstates of sigma_x.
    X,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::Z, Basis::X];

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random::<bool>() {
            Basis::X
        } else {
            Basis::Z
        }
    }

    pub fn conjugate(self) -> Self {
        match self {
            Basis::Z => Basis::X,
            Basis::X => Basis::Z,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
        })
    }
}

/// How a photon was prepared: a basis and the bit value within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrepRecord {
    pub basis: Basis,
    pub bit: bool,
}

impl PrepRecord {
    pub fn new(basis: Basis, bit: bool) -> Self {
        PrepRecord { basis, bit }
    }

    /// One of the four protocol states, uniformly.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let basis = Basis::random(rng);
        PrepRecord {
            basis,
            bit: rng.random(),
        }
    }

    pub fn all() -> [PrepRecord; 4] {
        [
            PrepRecord::new(Basis::Z, false),
            PrepRecord::new(Basis::Z, true),
            PrepRecord::new(Basis::X, false),
            PrepRecord::new(Basis::X, true),
        ]
    }
}

/// Encoding operation applied by an agent (or by the dealer when splitting).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EncodeOp {
    /// Identity, encodes bit 0.
    I,
    /// `i*sigma_y = |0><1| - |1><0|`, encodes bit 1.
    U,
}

impl EncodeOp {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            EncodeOp::U
        } else {
            EncodeOp::I
        }
    }

    pub fn bit(self) -> bool {
        matches!(self, EncodeOp::U)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        EncodeOp::from_bit(rng.random())
    }
}

/// Normalized single-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Qubit {
    amp0: Complex64,
    amp1: Complex64,
}

impl Qubit {
    /// Builds a state from raw amplitudes, renormalizing them.
    ///
    /// Returns `None` for the zero vector or non-finite input.
    pub fn new(amp0: Complex64, amp1: Complex64) -> Option<Self> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        Some(Qubit {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
        })
    }

    pub fn from_real(a: f64, b: f64) -> Option<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.amp0, self.amp1)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Qubit) -> Complex64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    /// Multiplies both amplitudes by `factor` (a global phase when `|factor| = 1`).
    pub fn scaled(&self, factor: Complex64) -> Qubit {
        Qubit::new(self.amp0 * factor, self.amp1 * factor).unwrap_or(*self)
    }

    /// Pauli X (bit flip).
    pub fn sigma_x(&self) -> Qubit {
        Qubit {
            amp0: self.amp1,
            amp1: self.amp0,
        }
    }

    /// Pauli Z (phase flip).
    pub fn sigma_z(&self) -> Qubit {
        Qubit {
            amp0: self.amp0,
            amp1: -self.amp1,
        }
    }

    fn renormalized(self) -> Qubit {
        let n = self.norm_sqr();
        if (n - 1.0).abs() <= NORM_TOLERANCE {
            self
        } else {
            let s = n.sqrt();
            Qubit {
                amp0: self.amp0 / s,
                amp1: self.amp1 / s,
            }
        }
    }
}

/// Eigenstate `value` of `basis`.
pub fn basis_state(basis: Basis, value: bool) -> Qubit {
    let (a, b) = match (basis, value) {
        (Basis::Z, false) => (1.0, 0.0),
        (Basis::Z, true) => (0.0, 1.0),
        (Basis::X, false) => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        (Basis::X, true) => (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    };
    Qubit {
        amp0: Complex64::new(a, 0.0),
        amp1: Complex64::new(b, 0.0),
    }
}

/// The protocol state for a preparation record.
pub fn prepare(rec: PrepRecord) -> Qubit {
    basis_state(rec.basis, rec.bit)
}

/// Applies an encoding operation.
pub fn apply(op: EncodeOp, q: Qubit) -> Qubit {
    match op {
        EncodeOp::I => q,
        EncodeOp::U => Qubit {
            amp0: q.amp1,
            amp1: -q.amp0,
        }
        .renormalized(),
    }
}

/// Probability of reading `value` when measuring `q` in `basis`.
pub fn outcome_probability(q: &Qubit, basis: Basis, value: bool) -> f64 {
    basis_state(basis, value).inner(q).norm_sqr()
}

/// Projective measurement in `basis`. Returns the outcome bit and the
/// collapsed eigenstate.
pub fn measure<R: Rng + ?Sized>(q: &Qubit, basis: Basis, rng: &mut R) -> (bool, Qubit) {
    let p1 = outcome_probability(q, basis, true).clamp(0.0, 1.0);
    // always one draw, even for eigenstates, so stream alignment never depends on p1
    let outcome = rng.random::<f64>() < p1;
    (outcome, basis_state(basis, outcome))
}

/// True iff `|<a|b>| = 1` within [`PHASE_TOLERANCE`].
pub fn equal_up_to_phase(a: &Qubit, b: &Qubit) -> bool {
    equal_up_to_phase_within(a, b, PHASE_TOLERANCE)
}

pub fn equal_up_to_phase_within(a: &Qubit, b: &Qubit, tolerance: f64) -> bool {
    (a.inner(b).norm() - 1.0).abs() <= tolerance
}
