//! Closed-form efficiency and security formulas, plus estimators over
//! simulated transcripts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{AgentEvent, DealerOutcome, RoundTranscript};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Secret bits, qubits and classical bits of a run, and the resulting total
/// efficiency `b_s / (q_t + b_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRecord {
    pub b_s: f64,
    pub q_t: f64,
    pub b_t: f64,
    pub eta: f64,
}

impl EfficiencyRecord {
    pub fn new(b_s: f64, q_t: f64, b_t: f64) -> Result<Self> {
        Ok(EfficiencyRecord {
            b_s,
            q_t,
            b_t,
            eta: efficiency(b_s, q_t, b_t)?,
        })
    }
}

/// Total efficiency `b_s / (q_t + b_t)`.
pub fn efficiency(b_s: f64, q_t: f64, b_t: f64) -> Result<f64> {
    for (name, v) in [("b_s", b_s), ("q_t", q_t), ("b_t", b_t)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::Domain {
                name,
                value: v,
                domain: "[0, inf)",
            });
        }
    }
    let denom = q_t + b_t;
    if denom <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(b_s / denom)
}

/// Efficiency of the bidirectional scheme when a fraction `delta` of qubits
/// is spent on each of the two checks: `(1 - delta)^2`, for `0 < delta <= 1/2`.
pub fn efficiency_vs_delta(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            domain: "0 < delta <= 1/2",
        });
    }
    Ok((1.0 - delta).powi(2))
}

/// Probability that an attacker eavesdropping `n` message bits escapes
/// detection, in natural and logarithmic scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Survival {
    pub probability: f64,
    pub ln_probability: f64,
    pub log10_probability: f64,
}

/// `((1 - p_s) / (1 - (1 - eps) p_s))^n`, evaluated in log space.
pub fn detection_survival(n: u64, p_s: f64, epsilon: f64) -> Result<Survival> {
    if n < 1 {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            domain: "n >= 1",
        });
    }
    if !(p_s > 0.0 && p_s <= 1.0) {
        return Err(Error::Domain {
            name: "p_s",
            value: p_s,
            domain: "(0, 1]",
        });
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            domain: "[0, 1]",
        });
    }
    let per_bit = if epsilon == 0.0 {
        0.0
    } else {
        (-p_s).ln_1p() - (-(1.0 - epsilon) * p_s).ln_1p()
    };
    let ln_probability = n as f64 * per_bit;
    Ok(Survival {
        probability: ln_probability.exp(),
        ln_probability,
        log10_probability: ln_probability / std::f64::consts::LN_10,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub protocol: String,
    pub eta: f64,
    pub note: String,
}

/// Total efficiency of the reference schemes next to this protocol at the
/// caller's check fraction (`delta = 0` gives the limiting value 1).
pub fn comparison_table(delta: f64) -> Result<Vec<ComparisonRow>> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            domain: "0 <= delta <= 1/2",
        });
    }
    let row = |protocol: &str, eta: f64, note: &str| ComparisonRow {
        protocol: protocol.to_owned(),
        eta,
        note: note.to_owned(),
    };
    Ok(vec![
        row("BB84", 0.25, "b_s=0.5, q_t=1, b_t=1"),
        row("HBB99", 0.20, "0.5 / (1 + 1.5)"),
        row("KKI", 0.20, "same accounting as HBB99"),
        row("naive-QKD-QSS", 0.125, "two BB84 sessions combined into one key"),
        row("bidirectional-QSS", (1.0 - delta).powi(2), "(1 - delta)^2"),
    ])
}

/// Which eavesdropping check an estimate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// Agents measure sampled incoming photons; scored when the agent's
    /// basis matches the preparation basis.
    One,
    /// Dealer compares decoded operations against agent announcements.
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub mismatches: usize,
    pub comparable: usize,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ErrorEstimate {
    pub fn from_counts(mismatches: usize, comparable: usize) -> Result<Self> {
        if comparable == 0 {
            return Err(Error::EmptySample);
        }
        let (lower, upper) = wilson_interval(mismatches as f64, comparable as f64, Z_95);
        Ok(ErrorEstimate {
            mismatches,
            comparable,
            rate: mismatches as f64 / comparable as f64,
            lower,
            upper,
        })
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: f64, n: f64, z: f64) -> (f64, f64) {
    let p = k / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Pooled error rate of a check across all agents.
pub fn estimate_error_rate(transcripts: &[RoundTranscript], check: Check) -> Result<ErrorEstimate> {
    let (k, n) = count_check(transcripts, check, None);
    ErrorEstimate::from_counts(k, n)
}

/// Error rate of a check restricted to one agent.
pub fn estimate_agent_error_rate(transcripts: &[RoundTranscript], check: Check, agent: usize) -> Result<ErrorEstimate> {
    let (k, n) = count_check(transcripts, check, Some(agent));
    ErrorEstimate::from_counts(k, n)
}

fn count_check(transcripts: &[RoundTranscript], check: Check, agent: Option<usize>) -> (usize, usize) {
    let mut mismatches = 0;
    let mut comparable = 0;
    for t in transcripts.iter().filter(|t| !t.void) {
        for (i, a) in t.agents.iter().enumerate() {
            if agent.is_some_and(|want| want != i) {
                continue;
            }
            match (check, &a.event, &a.dealer) {
                (Check::One, AgentEvent::Checked { basis, outcome }, _) if *basis == a.prep.basis => {
                    comparable += 1;
                    mismatches += (*outcome != a.prep.bit) as usize;
                }
                (Check::Two, AgentEvent::Encoded { op }, DealerOutcome::Measured { decoded, .. }) if t.check2 => {
                    comparable += 1;
                    mismatches += (decoded != op) as usize;
                }
                _ => {}
            }
        }
    }
    (mismatches, comparable)
}

/// Mutual information in bits of the empirical joint distribution of
/// `(guess, truth)` pairs.
pub fn empirical_mutual_information<I>(pairs: I) -> f64
where
    I: IntoIterator<Item = (bool, bool)>,
{
    let mut joint = [[0usize; 2]; 2];
    let mut total = 0usize;
    for (g, t) in pairs {
        joint[g as usize][t as usize] += 1;
        total += 1;
    }
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let pg = [
        (joint[0][0] + joint[0][1]) as f64 / n,
        (joint[1][0] + joint[1][1]) as f64 / n,
    ];
    let pt = [
        (joint[0][0] + joint[1][0]) as f64 / n,
        (joint[0][1] + joint[1][1]) as f64 / n,
    ];
    let mut mi = 0.0;
    for g in 0..2 {
        for t in 0..2 {
            let p = joint[g][t] as f64 / n;
            if p > 0.0 {
                mi += p * (p / (pg[g] * pt[t])).log2();
            }
        }
    }
    mi.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn efficiency_examples() {
        assert_eq!(efficiency(0.5, 1.0, 1.0).unwrap(), 0.25);
        assert!((efficiency(0.5, 1.0, 1.5).unwrap() - 0.20).abs() < 1e-15);
        assert_eq!(efficiency(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(efficiency(1.0, 0.0, 0.0), Err(Error::ZeroDenominator));
        assert!(efficiency(-1.0, 1.0, 0.0).is_err());
        let rec = EfficiencyRecord::new(50.0, 100.0, 100.0).unwrap();
        assert_eq!(rec.eta, 0.25);
    }

    #[test]
    fn efficiency_vs_delta_examples() {
        assert_eq!(efficiency_vs_delta(0.5).unwrap(), 0.25);
        assert!((efficiency_vs_delta(0.1).unwrap() - 0.81).abs() < 1e-15);
        assert!((efficiency_vs_delta(1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert!(efficiency_vs_delta(0.0).is_err());
        assert!(efficiency_vs_delta(0.6).is_err());
    }

    #[test]
    fn detection_survival_examples() {
        let one = detection_survival(1, 0.3, 0.2).unwrap();
        let direct = (1.0 - 0.3) / (1.0 - (1.0 - 0.2) * 0.3);
        assert!((one.probability - direct).abs() < 1e-15);

        let s = detection_survival(10_000, 0.1, 0.1).unwrap();
        assert!(s.probability > 1e-49 && s.probability < 1e-47, "{s:?}");
        assert!((s.log10_probability - (-47.989)).abs() < 0.001, "{s:?}");

        for n in [1, 10, 1_000_000] {
            assert_eq!(detection_survival(n, 0.5, 0.0).unwrap().probability, 1.0);
        }
        assert!(detection_survival(0, 0.1, 0.1).is_err());
        assert!(detection_survival(1, 0.0, 0.1).is_err());
        assert!(detection_survival(1, 0.1, 1.1).is_err());
    }

    #[test]
    fn survival_does_not_underflow_in_log_space() {
        let s = detection_survival(10_000_000, 0.5, 0.5).unwrap();
        assert_eq!(s.probability, 0.0);
        assert!(s.ln_probability.is_finite() && s.ln_probability < -1e6);
    }

    #[test]
    fn table_constants() {
        let rows = comparison_table(0.1).unwrap();
        let eta = |name: &str| rows.iter().find(|r| r.protocol == name).unwrap().eta;
        assert_eq!(eta("BB84"), 0.25);
        assert_eq!(eta("HBB99"), 0.20);
        assert_eq!(eta("KKI"), 0.20);
        assert_eq!(eta("naive-QKD-QSS"), 0.125);
        assert!((eta("bidirectional-QSS") - 0.81).abs() < 1e-15);
        let limit = comparison_table(0.0).unwrap();
        assert_eq!(limit.last().unwrap().eta, 1.0);
        assert!(comparison_table(0.7).is_err());
    }

    #[test]
    fn wilson_examples() {
        // expected values from the closed-form Wilson score at z = 1.96
        let e = ErrorEstimate::from_counts(0, 1000).unwrap();
        assert_eq!(e.rate, 0.0);
        assert!(e.upper < 0.005 && e.lower < 1e-12);
        assert!((e.upper - 0.003_826_758).abs() < 1e-6);

        let e = ErrorEstimate::from_counts(250, 1000).unwrap();
        assert!((e.lower - 0.224_153_1).abs() < 1e-6, "{e:?}");
        assert!((e.upper - 0.277_760_3).abs() < 1e-6, "{e:?}");

        let e = ErrorEstimate::from_counts(1, 1).unwrap();
        assert_eq!(e.rate, 1.0);
        assert!(e.upper - e.lower > 0.5);
        assert_eq!(ErrorEstimate::from_counts(0, 0), Err(Error::EmptySample));
    }

    #[test]
    fn mutual_information_extremes() {
        let perfect = (0..1000).map(|i| (i % 2 == 0, i % 2 == 0));
        assert!((empirical_mutual_information(perfect) - 1.0).abs() < 1e-12);
        let independent = (0..1000).map(|i| (i % 2 == 0, (i / 2) % 2 == 0));
        assert!(empirical_mutual_information(independent).abs() < 1e-12);
        assert_eq!(empirical_mutual_information(std::iter::empty()), 0.0);
    }

    proptest! {
        #[test]
        fn survival_strictly_decreasing(n in 1u64..500, p in 0.01f64..0.98, e in 0.01f64..0.98, d in 0.005f64..0.02) {
            let base = detection_survival(n, p, e).unwrap().ln_probability;
            prop_assert!(detection_survival(n + 1, p, e).unwrap().ln_probability < base);
            prop_assert!(detection_survival(n, p + d, e).unwrap().ln_probability < base);
            prop_assert!(detection_survival(n, p, e + d).unwrap().ln_probability < base);
        }

        #[test]
        fn survival_is_power_of_single_bit(n in 1u64..10_000, p in 0.01f64..1.0, e in 0.0f64..=1.0) {
            let one = detection_survival(1, p, e).unwrap().ln_probability;
            let many = detection_survival(n, p, e).unwrap().ln_probability;
            prop_assert!((many - n as f64 * one).abs() <= 1e-12 * many.abs().max(1.0));
        }
    }
}
