//! Zero-delay second-order correlation.

use super::state::QuantumState;
use super::FockError;

/// `g²(0) = ⟨a†² a²⟩ / ⟨a†a⟩²` on `mode`.
///
/// A mode with zero mean photon number has no defined `g²`; that is reported
/// as [`FockError::VacuumMode`] instead of a NaN.
pub fn g2_zero<S: QuantumState + ?Sized>(state: &S, mode: usize) -> Result<f64, FockError> {
    let dist = state.photon_number_distribution(mode)?;
    g2_from_distribution(&dist).ok_or(FockError::VacuumMode(mode))
}

/// `g²(0)` of a photon-number distribution, `None` if its mean is zero.
pub fn g2_from_distribution(dist: &[f64]) -> Option<f64> {
    let (mut first, mut second) = (0.0, 0.0);
    for (n, p) in dist.iter().enumerate() {
        let n = n as f64;
        first += n * p;
        second += n * (n - 1.0) * p;
    }
    (first > 0.0).then(|| second / (first * first))
}

/// Click probabilities behind a balanced beam splitter with two bucket
/// detectors of efficiency `efficiency`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbtClicks {
    pub t: f64,
    pub r: f64,
    pub both: f64,
}

impl HbtClicks {
    /// Click-based estimate `P(TR) / (P(T) P(R))`. Tends to `g²(0)` as the
    /// efficiency goes to zero, not for ideal detectors.
    pub fn g2_estimate(&self) -> Option<f64> {
        (self.t > 0.0 && self.r > 0.0).then(|| self.both / (self.t * self.r))
    }
}

/// Splits `mode` on a 50:50 beam splitter and detects both outputs.
///
/// With `n` photons, neither arm clicks with probability `(1 - η)^n` and a
/// given arm stays dark with probability `(1 - η/2)^n`.
pub fn hbt_click_probabilities<S: QuantumState + ?Sized>(
    state: &S,
    mode: usize,
    efficiency: f64,
) -> Result<HbtClicks, FockError> {
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(FockError::InvalidProbability {
            name: "efficiency",
            value: efficiency,
        });
    }
    let dist = state.photon_number_distribution(mode)?;
    // x^n - 1 without cancellation at small efficiency
    let dark_minus_one = |n: usize, loss: f64| match n {
        0 => 0.0,
        _ => (n as f64 * (-loss).ln_1p()).exp_m1(),
    };
    let (mut single, mut both) = (0.0, 0.0);
    for (n, p) in dist.iter().enumerate() {
        let one = dark_minus_one(n, efficiency / 2.0);
        single -= p * one;
        both += p * (dark_minus_one(n, efficiency) - 2.0 * one);
    }
    Ok(HbtClicks {
        t: single,
        r: single,
        both,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        apply_beamsplitter, apply_loss, apply_spdc, detection_distribution, DetectorModel,
        FockState, MixedStateEnsemble,
    };
    use num_complex::Complex64;

    #[test]
    fn number_states() {
        assert_eq!(
            g2_zero(&FockState::basis(4, &[1]).unwrap(), 0).unwrap(),
            0.0
        );
        assert_eq!(
            g2_zero(&FockState::basis(4, &[2]).unwrap(), 0).unwrap(),
            0.5
        );
        assert_eq!(
            g2_zero(&FockState::vacuum(1, 4).unwrap(), 0),
            Err(FockError::VacuumMode(0))
        );
    }

    #[test]
    fn coherent_state_is_unity() {
        let s = FockState::coherent(Complex64::new(1.0, 0.0), 8).unwrap();
        assert!((g2_zero(&s, 0).unwrap() - 1.0).abs() < 1e-3);
    }

    /// Analytic value for the renormalized geometric distribution on 0..=c,
    /// summed independently of the state machinery.
    fn truncated_thermal_g2(x: f64, c: usize) -> f64 {
        let z: f64 = (0..=c).map(|n| x.powi(n as i32)).sum();
        let m1: f64 = (0..=c).map(|n| n as f64 * x.powi(n as i32)).sum::<f64>() / z;
        let m2: f64 = (0..=c)
            .map(|n| (n * n.saturating_sub(1)) as f64 * x.powi(n as i32))
            .sum::<f64>()
            / z;
        m2 / (m1 * m1)
    }

    #[test]
    fn thermal_marginal_approaches_two() {
        let mut previous_gap = f64::INFINITY;
        for cutoff in [2, 4, 8, 16] {
            let eps: f64 = 0.5;
            let tmsv = apply_spdc(&FockState::vacuum(2, cutoff).unwrap(), 0, 1, eps).unwrap();
            let g2 = g2_zero(&tmsv, 1).unwrap();
            let oracle = truncated_thermal_g2(eps.tanh().powi(2), cutoff);
            assert!((g2 - oracle).abs() < 1e-12);
            let gap = (g2 - 2.0).abs();
            assert!(gap < previous_gap, "cutoff {cutoff}: gap {gap}");
            previous_gap = gap;
        }
        assert!(previous_gap < 1e-4);

        let tmsv = apply_spdc(&FockState::vacuum(2, 4).unwrap(), 0, 1, 0.1).unwrap();
        assert!((g2_zero(&tmsv, 0).unwrap() - 2.0).abs() < 1e-2);
    }

    #[test]
    fn loss_leaves_g2_unchanged() {
        let tmsv = apply_spdc(&FockState::vacuum(2, 4).unwrap(), 0, 1, 0.3).unwrap();
        let before = g2_zero(&tmsv, 1).unwrap();
        let lossy: MixedStateEnsemble = apply_loss(&tmsv, 1, 0.37).unwrap();
        assert!((g2_zero(&lossy, 1).unwrap() - before).abs() < 1e-12);
    }

    #[test]
    fn hbt_matches_explicit_beam_splitter() {
        // |ψ⟩ = (|1⟩ + |2⟩ + |3⟩)/√3 in mode 0, vacuum in mode 1
        let r = 1.0 / 3f64.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 25];
        for n in 1..=3 {
            amps[n * 5] = Complex64::new(r, 0.0);
        }
        let input = FockState::from_amplitudes(2, 4, amps).unwrap();
        let split = apply_beamsplitter(&input, 0, 1, 0.5, 0.0).unwrap();
        let eta = 0.7;
        let det = DetectorModel::bucket(eta).unwrap();
        let click_t = detection_distribution(&split, 0, &det).unwrap()[1];
        let mut both = 0.0;
        for (i, a) in split.amplitudes().iter().enumerate() {
            let occ = split.occupations(i);
            both += a.norm_sqr() * det.click_probability(occ[0]) * det.click_probability(occ[1]);
        }
        let single = FockState::from_amplitudes(
            1,
            4,
            (0..5)
                .map(|n| Complex64::new(if n > 0 && n < 4 { r } else { 0.0 }, 0.0))
                .collect(),
        )
        .unwrap();
        let h = hbt_click_probabilities(&single, 0, eta).unwrap();
        assert!((h.t - click_t).abs() < 1e-12);
        assert!((h.both - both).abs() < 1e-12);
    }

    #[test]
    fn hbt_estimate_tends_to_g2() {
        let two = FockState::basis(4, &[2]).unwrap();
        let ideal = hbt_click_probabilities(&two, 0, 1.0).unwrap();
        assert!((ideal.g2_estimate().unwrap() - 0.5 / 0.5625).abs() < 1e-12);
        let weak = hbt_click_probabilities(&two, 0, 1e-6).unwrap();
        assert!((weak.g2_estimate().unwrap() - 0.5).abs() < 1e-5);
    }
}
