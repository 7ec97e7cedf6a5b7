//! Unitary and lossy channels acting on truncated Fock states.

use num_complex::Complex64;

use super::state::{FockState, MixedStateEnsemble, QuantumState, NORM_TOLERANCE};
use super::FockError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_pair(state: &FockState, a: usize, b: usize) -> Result<(), FockError> {
    state.check_mode(a)?;
    state.check_mode(b)?;
    if a == b {
        return Err(FockError::IdenticalModes(a));
    }
    Ok(())
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<(), FockError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(FockError::InvalidProbability { name, value })
    }
}

/// `sqrt(n (n-1) ⋯ (n-k+1))`
fn sqrt_falling(n: usize, k: usize) -> f64 {
    ((n + 1 - k)..=n).map(|j| j as f64).product::<f64>().sqrt()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Mean pair number of the two-mode squeezed vacuum at coupling `epsilon`.
pub fn mean_pairs_from_epsilon(epsilon: f64) -> f64 {
    epsilon.sinh().powi(2)
}

/// Inverse of [`mean_pairs_from_epsilon`].
pub fn epsilon_from_mean_pairs(mean: f64) -> f64 {
    mean.sqrt().asinh()
}

/// Evolves `state` under `exp(-i H)` with `H = ε (a†b† + a b)` acting on
/// modes `mode_a`, `mode_b`, projected onto the truncated basis and
/// renormalized.
///
/// Uses the normal-ordered factorization of the two-mode squeezer,
/// `exp(-i t a†b†) · cosh(ε)^-(n_a + n_b + 1) · exp(-i t a b)` with
/// `t = tanh ε`. The lowering and diagonal factors stay inside the
/// truncation, so the only approximation is dropping the part of the raising
/// factor that leaves it. On the double vacuum the amplitudes are
/// `(-i tanh ε)^n / cosh ε` on `|n, n⟩`.
pub fn apply_spdc(
    state: &FockState,
    mode_a: usize,
    mode_b: usize,
    epsilon: f64,
) -> Result<FockState, FockError> {
    check_pair(state, mode_a, mode_b)?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(FockError::InvalidSqueezing(epsilon));
    }
    state.require_normalized()?;
    if epsilon == 0.0 {
        return Ok(state.clone());
    }

    let cutoff = state.cutoff();
    let base = cutoff + 1;
    let (sa, sb) = (state.stride(mode_a), state.stride(mode_b));
    let t = epsilon.tanh();
    let inv_cosh = 1.0 / epsilon.cosh();
    // -i t raised to k, divided by k!
    let coeff: Vec<Complex64> = (0..base)
        .scan(Complex64::new(1.0, 0.0), |c, k| {
            if k > 0 {
                *c *= Complex64::new(0.0, -t) / k as f64;
            }
            Some(*c)
        })
        .collect();

    let mut out = state.zeros_like();
    let mut block = vec![ZERO; base * base];
    let mut lowered = vec![ZERO; base * base];
    for rest in state.rest_offsets(&[mode_a, mode_b]) {
        for na in 0..base {
            for nb in 0..base {
                block[na * base + nb] = state.amplitudes()[rest + na * sa + nb * sb];
            }
        }
        lowered.fill(ZERO);
        for na in 0..base {
            for nb in 0..base {
                let amp = block[na * base + nb];
                if amp == ZERO {
                    continue;
                }
                for k in 0..=na.min(nb) {
                    let w = sqrt_falling(na, k) * sqrt_falling(nb, k);
                    lowered[(na - k) * base + (nb - k)] += amp * coeff[k] * w;
                }
            }
        }
        for na in 0..base {
            for nb in 0..base {
                lowered[na * base + nb] *= inv_cosh.powi((na + nb + 1) as i32);
            }
        }
        let amps = out.amplitudes_mut();
        for na in 0..base {
            for nb in 0..base {
                let amp = lowered[na * base + nb];
                if amp == ZERO {
                    continue;
                }
                for k in 0..base - na.max(nb) {
                    let w = sqrt_falling(na + k, k) * sqrt_falling(nb + k, k);
                    amps[rest + (na + k) * sa + (nb + k) * sb] += amp * coeff[k] * w;
                }
            }
        }
    }
    out.renormalize()?;
    Ok(out)
}

/// Two-mode beam splitter with intensity transmissivity `transmissivity` and
/// reflection phase `phase`:
///
/// `a₁† → √t a₁† + e^{iφ}√(1-t) a₂†`, `a₂† → -e^{-iφ}√(1-t) a₁† + √t a₂†`.
///
/// Photon number in the two modes is conserved. If the input populates a
/// sector whose output cannot be represented at this cutoff (for instance
/// `|2, 2⟩` at cutoff 3), the call fails rather than silently dropping norm.
pub fn apply_beamsplitter(
    state: &FockState,
    mode_1: usize,
    mode_2: usize,
    transmissivity: f64,
    phase: f64,
) -> Result<FockState, FockError> {
    check_pair(state, mode_1, mode_2)?;
    check_unit_interval("transmissivity", transmissivity)?;
    state.require_normalized()?;

    let cutoff = state.cutoff();
    let base = cutoff + 1;
    let wide = 2 * cutoff + 1;
    let (s1, s2) = (state.stride(mode_1), state.stride(mode_2));
    let tau = Complex64::new(transmissivity.sqrt(), 0.0);
    let rho = Complex64::from_polar((1.0 - transmissivity).sqrt(), phase);
    let minus_rho_conj = -rho.conj();

    let powers = |z: Complex64| -> Vec<Complex64> {
        (0..=2 * cutoff)
            .scan(Complex64::new(1.0, 0.0), |acc, k| {
                let v = *acc;
                if k < 2 * cutoff {
                    *acc *= z;
                }
                Some(v)
            })
            .collect()
    };
    let (tau_p, rho_p, mrc_p) = (powers(tau), powers(rho), powers(minus_rho_conj));
    let fact: Vec<f64> = (0..=2 * cutoff)
        .scan(1.0, |f, k| {
            if k > 0 {
                *f *= k as f64;
            }
            Some(*f)
        })
        .collect();

    let mut out = state.zeros_like();
    let mut wide_block = vec![ZERO; wide * wide];
    let mut lost = 0.0;
    for rest in state.rest_offsets(&[mode_1, mode_2]) {
        wide_block.fill(ZERO);
        for n1 in 0..base {
            for n2 in 0..base {
                let amp = state.amplitudes()[rest + n1 * s1 + n2 * s2];
                if amp == ZERO {
                    continue;
                }
                let norm_in = (fact[n1] * fact[n2]).sqrt();
                for j in 0..=n1 {
                    for k in 0..=n2 {
                        let p = j + k;
                        let q = n1 + n2 - p;
                        let c = binomial(n1, j) * binomial(n2, k) * (fact[p] * fact[q]).sqrt()
                            / norm_in;
                        wide_block[p * wide + q] +=
                            amp * tau_p[j + n2 - k] * rho_p[n1 - j] * mrc_p[k] * c;
                    }
                }
            }
        }
        let amps = out.amplitudes_mut();
        for p in 0..wide {
            for q in 0..wide {
                let v = wide_block[p * wide + q];
                if p <= cutoff && q <= cutoff {
                    amps[rest + p * s1 + q * s2] = v;
                } else {
                    lost += v.norm_sqr();
                }
            }
        }
    }
    if lost > NORM_TOLERANCE {
        return Err(FockError::TruncationOverflow(lost));
    }
    out.renormalize()?;
    Ok(out)
}

/// Phase shifter `exp(i φ n)` on one mode.
pub fn apply_phase_shift(
    state: &FockState,
    mode: usize,
    phase: f64,
) -> Result<FockState, FockError> {
    state.check_mode(mode)?;
    let mut out = state.clone();
    for (i, amp) in out.amplitudes_mut().iter_mut().enumerate() {
        let n = state.occupation(i, mode);
        if n > 0 {
            *amp *= Complex64::from_polar(1.0, phase * n as f64);
        }
    }
    Ok(out)
}

/// Pure-loss channel with transmission `transmission` on one mode.
///
/// Unravelled over the Kraus operators
/// `E_k = Σ_n √(C(n,k) T^(n-k) (1-T)^k) |n-k⟩⟨n|` (k photons lost), so each
/// ensemble component is `E_k ψ / ‖E_k ψ‖` with weight `‖E_k ψ‖²`. This is
/// exact for arbitrary input superpositions, not only number states.
pub fn apply_loss<S: QuantumState + ?Sized>(
    state: &S,
    mode: usize,
    transmission: f64,
) -> Result<MixedStateEnsemble, FockError> {
    check_unit_interval("transmission", transmission)?;
    let mut components = Vec::new();
    for (weight, pure) in state.weighted_states() {
        pure.check_mode(mode)?;
        pure.require_normalized()?;
        let stride = pure.stride(mode);
        let base = pure.base();
        for lost in 0..base {
            let mut branch = pure.zeros_like();
            let mut any = false;
            for (i, &amp) in pure.amplitudes().iter().enumerate() {
                let n = pure.occupation(i, mode);
                if n < lost || amp == ZERO {
                    continue;
                }
                let kraus = (binomial(n, lost)
                    * transmission.powi((n - lost) as i32)
                    * (1.0 - transmission).powi(lost as i32))
                .sqrt();
                if kraus == 0.0 {
                    continue;
                }
                branch.amplitudes_mut()[i - lost * stride] = amp * kraus;
                any = true;
            }
            if !any {
                continue;
            }
            let p = branch.norm_sqr();
            if p > 0.0 {
                branch.renormalize()?;
                components.push((weight * p, branch));
            }
        }
    }
    MixedStateEnsemble::from_weights(components)
}
