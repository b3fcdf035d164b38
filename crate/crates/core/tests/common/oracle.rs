//! Exact probability-tree enumeration used as the reference for every
//! statistical test. Deliberately shares no code with the library: states are
//! plain real 2-vectors (every state reachable here has real amplitudes) and
//! every random choice is expanded into weighted branches.

#![allow(dead_code)]

type State = [f64; 2];

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// basis 0 = Z, basis 1 = X
fn prep(basis: u8, bit: u8) -> State {
    match (basis, bit) {
        (0, 0) => [1.0, 0.0],
        (0, _) => [0.0, 1.0],
        (_, 0) => [H, H],
        _ => [H, -H],
    }
}

fn encode(op: u8, s: State) -> State {
    if op == 0 {
        s
    } else {
        // i sigma_y = |0><1| - |1><0|
        [s[1], -s[0]]
    }
}

/// (probability, outcome, collapsed state) for a projective measurement.
fn measure(s: State, basis: u8) -> Vec<(f64, u8, State)> {
    (0..2u8)
        .map(|v| {
            let e = prep(basis, v);
            let amp = e[0] * s[0] + e[1] * s[1];
            (amp * amp, v, e)
        })
        .filter(|(p, _, _)| *p > 1e-15)
        .collect()
}

/// Branches of an intercept-resend with a uniformly random basis:
/// (probability, eve basis, guess, resent state).
fn intercept_random(s: State) -> Vec<(f64, u8, u8, State)> {
    let mut out = Vec::new();
    for eb in 0..2u8 {
        for (p, g, c) in measure(s, eb) {
            out.push((0.5 * p, eb, g, c));
        }
    }
    out
}

fn no_tap(s: State) -> Vec<(f64, u8, u8, State)> {
    vec![(1.0, 0, 0, s)]
}

#[derive(Debug, Clone, Copy)]
pub struct KeygenAttackOracle {
    /// P(dealer decode != agent op) over encoded rounds.
    pub check2_error: f64,
    /// P(outcome != prep bit | agent basis == prep basis) over check-1 rounds.
    pub check1_matched_error: f64,
    /// P(attacker's forward-leg guess == prep bit), when the forward leg is tapped.
    pub forward_guess_accuracy: f64,
    /// P(forward guess xor return guess == op) when both legs are tapped.
    pub op_guess_accuracy: f64,
}

/// Enumerates one keygen round for a single agent with random-basis
/// intercept-resend on the selected legs.
pub fn keygen_random_ir(forward: bool, back: bool) -> KeygenAttackOracle {
    let mut check2_err = 0.0;
    let mut c1_cmp = 0.0;
    let mut c1_err = 0.0;
    let mut fwd_acc = 0.0;
    let mut op_acc = 0.0;
    for pb in 0..2u8 {
        for bit in 0..2u8 {
            let p_prep = 0.25;
            let s0 = prep(pb, bit);
            let fwd = if forward { intercept_random(s0) } else { no_tap(s0) };
            for (pf, _eb, g1, s1) in fwd {
                if forward && g1 == bit {
                    fwd_acc += p_prep * pf;
                }
                // first check: agent measures in a random basis
                for ab in 0..2u8 {
                    for (pm, o, _) in measure(s1, ab) {
                        if ab == pb {
                            let w = p_prep * pf * 0.5 * pm;
                            c1_cmp += w;
                            if o != bit {
                                c1_err += w;
                            }
                        }
                    }
                }
                // encode path
                for op in 0..2u8 {
                    let s2 = encode(op, s1);
                    let ret = if back { intercept_random(s2) } else { no_tap(s2) };
                    for (pr, _rb, g2, s3) in ret {
                        if forward && back && (g1 ^ g2) == op {
                            op_acc += p_prep * pf * 0.5 * pr;
                        }
                        for (pd, o, _) in measure(s3, pb) {
                            let decoded = o ^ bit;
                            if decoded != op {
                                check2_err += p_prep * pf * 0.5 * pr * pd;
                            }
                        }
                    }
                }
            }
        }
    }
    KeygenAttackOracle {
        check2_error: check2_err,
        check1_matched_error: c1_err / c1_cmp,
        forward_guess_accuracy: fwd_acc,
        op_guess_accuracy: op_acc,
    }
}

/// Fixed-basis intercept on the forward leg. Returns the dealer's check-2
/// error rate and the guess accuracy, conditioned on the preparation basis.
pub fn keygen_fixed_ir(eve_basis: u8, prep_basis: u8) -> (f64, f64) {
    let mut err = 0.0;
    let mut acc = 0.0;
    for bit in 0..2u8 {
        let s0 = prep(prep_basis, bit);
        for (pe, g, s1) in measure(s0, eve_basis) {
            if g == bit {
                acc += 0.5 * pe;
            }
            for op in 0..2u8 {
                for (pd, o, _) in measure(encode(op, s1), prep_basis) {
                    if o ^ bit != op {
                        err += 0.5 * pe * 0.5 * pd;
                    }
                }
            }
        }
    }
    (err, acc)
}

/// Per-control-event probability that a ping-pong control measurement
/// reveals the attacker: Alice measures in a random basis, the sender
/// announces (basis, bit), and only matched-basis events are scored.
/// Returns (P(comparable and mismatch), P(mismatch | comparable)).
pub fn pingpong_control_detection() -> (f64, f64) {
    let mut cmp = 0.0;
    let mut err = 0.0;
    for pb in 0..2u8 {
        for bit in 0..2u8 {
            for (pf, _, _, s1) in intercept_random(prep(pb, bit)) {
                for ab in 0..2u8 {
                    for (pm, o, _) in measure(s1, ab) {
                        if ab == pb {
                            let w = 0.25 * pf * 0.5 * pm;
                            cmp += w;
                            if o != bit {
                                err += w;
                            }
                        }
                    }
                }
            }
        }
    }
    (err, err / cmp)
}

/// Error rate of a prep-basis measurement after a depolarizing replacement
/// with probability `p`, by brute force over the 4x4 replacement table.
pub fn depolarizing_error(p: f64) -> f64 {
    let mut err = 0.0;
    for pb in 0..2u8 {
        for bit in 0..2u8 {
            for rb in 0..2u8 {
                for rbit in 0..2u8 {
                    for (pm, o, _) in measure(prep(rb, rbit), pb) {
                        if o != bit {
                            err += 0.25 * 0.25 * pm;
                        }
                    }
                }
            }
        }
    }
    p * err
}

/// Probability that a stream of `n` message photons, with control photons
/// interleaved at rate `p_s` each detecting with probability `eps`, passes
/// undetected. Evaluated by dynamic programming over the photon sequence,
/// truncated once the residual mass is negligible.
pub fn undetected_stream_probability(n: usize, p_s: f64, eps: f64) -> f64 {
    // state: number of message photons already sent; mass of undetected paths
    let mut mass = vec![0.0f64; n + 1];
    mass[0] = 1.0;
    let mut done = 0.0;
    for _ in 0..100_000 {
        let mut next = vec![0.0f64; n + 1];
        for k in 0..n {
            let m = mass[k];
            if m == 0.0 {
                continue;
            }
            next[k] += m * p_s * (1.0 - eps);
            if k + 1 == n {
                done += m * (1.0 - p_s);
            } else {
                next[k + 1] += m * (1.0 - p_s);
            }
        }
        mass = next;
        if mass.iter().sum::<f64>() < 1e-18 {
            break;
        }
    }
    done
}

/// Binary Shannon entropy, written out independently of the library.
pub fn h2(p: f64) -> f64 {
    let t = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    t(p) + t(1.0 - p)
}

/// Wilson score interval at z = 1.959964.
pub fn wilson(k: f64, n: f64) -> (f64, f64) {
    let z = 1.959_963_984_540_054_f64;
    let p = k / n;
    let d = 1.0 + z * z / n;
    let c = (p + z * z / (2.0 * n)) / d;
    let h = z * ((p * (1.0 - p) / n) + z * z / (4.0 * n * n)).sqrt() / d;
    (c - h, c + h)
}

/// Fixed-basis intercept on both legs of one keygen round, averaged over the
/// preparation basis. Returns (dealer check-2 error, P(fwd guess xor return
/// guess == op)).
pub fn keygen_fixed_ir_both(eve_basis: u8) -> (f64, f64) {
    let mut err = 0.0;
    let mut acc = 0.0;
    for pb in 0..2u8 {
        for bit in 0..2u8 {
            for (p1, g1, s1) in measure(prep(pb, bit), eve_basis) {
                for op in 0..2u8 {
                    for (p2, g2, s2) in measure(encode(op, s1), eve_basis) {
                        let w = 0.25 * p1 * 0.5 * p2;
                        if g1 ^ g2 == op {
                            acc += w;
                        }
                        for (pd, o, _) in measure(s2, pb) {
                            if o ^ bit != op {
                                err += w * pd;
                            }
                        }
                    }
                }
            }
        }
    }
    (err, acc)
}
