//! Two-photon interference through the Mach-Zehnder router.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::MonteCarloError;
use crate::analytic::check_unit;
use crate::fock::{apply_beamsplitter, apply_phase_shift, FockState};

/// MZI router fed by one photon in each input.
#[derive(Debug, Clone, PartialEq)]
pub struct HomScanConfig {
    pub delays: Vec<f64>,
    pub mzi_phase: f64,
    /// `σ` of `χ(τ) = χ₀ exp(-τ² / 2σ²)`, same unit as `delays`.
    pub coherence_time: f64,
    /// `χ₀`, overlap at zero delay.
    pub peak_indistinguishability: f64,
    pub routing_visibility: f64,
    pub pulses_per_point: u64,
    pub seed: u64,
}

impl HomScanConfig {
    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if !(self.coherence_time > 0.0 && self.coherence_time.is_finite()) {
            return Err(MonteCarloError::InvalidCoherenceTime(self.coherence_time));
        }
        if self.delays.is_empty() {
            return Err(MonteCarloError::EmptyGrid("delays"));
        }
        if self.pulses_per_point == 0 {
            return Err(MonteCarloError::ZeroPulses);
        }
        check_unit("peak indistinguishability", self.peak_indistinguishability)?;
        check_unit("routing visibility", self.routing_visibility)?;
        Ok(())
    }

    /// `χ(τ)`
    pub fn indistinguishability(&self, delay: f64) -> f64 {
        let s = self.coherence_time;
        self.peak_indistinguishability * (-delay * delay / (2.0 * s * s)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomScanPoint {
    pub delay: f64,
    pub mzi_phase: f64,
    pub pulses: u64,
    pub coincidences: u64,
    pub singles_b: u64,
    pub singles_c: u64,
    /// Exact coincidence probability the counts were drawn from.
    pub coincidence_probability: f64,
}

/// Output-port probabilities `[both in b, one each, both in c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonOutcome {
    pub both_b: f64,
    pub split: f64,
    pub both_c: f64,
}

/// First splitter ratio giving fringe visibility `V`:
/// `4 t (1 - t) = V²`, on the branch `t ≥ 1/2`.
fn first_splitter(visibility: f64) -> f64 {
    (1.0 + (1.0 - visibility * visibility).max(0.0).sqrt()) / 2.0
}

fn mzi(state: &FockState, phase: f64, visibility: f64) -> Result<FockState, MonteCarloError> {
    let s = apply_beamsplitter(state, 0, 1, first_splitter(visibility), 0.0)?;
    let s = apply_phase_shift(&s, 0, phase)?;
    Ok(apply_beamsplitter(&s, 0, 1, 0.5, 0.0)?)
}

/// Exact output statistics for interference weight `chi_sq = χ²`: the
/// indistinguishable two-photon amplitude mixed incoherently with two
/// independently routed photons.
pub fn two_photon_outcome(
    phase: f64,
    routing_visibility: f64,
    chi_sq: f64,
) -> Result<TwoPhotonOutcome, MonteCarloError> {
    let pair = mzi(&FockState::basis(2, &[1, 1])?, phase, routing_visibility)?;
    let ind = [
        pair.probability(&[2, 0])?,
        pair.probability(&[1, 1])?,
        pair.probability(&[0, 2])?,
    ];
    // q: a photon entering port 0 leaves through output 0
    let single = mzi(&FockState::basis(2, &[1, 0])?, phase, routing_visibility)?;
    let q = single.probability(&[1, 0])?;
    let dist = [q * (1.0 - q), q * q + (1.0 - q) * (1.0 - q), q * (1.0 - q)];
    let mix = |i: usize| chi_sq * ind[i] + (1.0 - chi_sq) * dist[i];
    Ok(TwoPhotonOutcome {
        both_b: mix(0),
        split: mix(1),
        both_c: mix(2),
    })
}

/// Samples every delay of the scan. Point `i` draws from stream `i` of the
/// seeded generator.
pub fn hom_scan(config: &HomScanConfig) -> Result<Vec<HomScanPoint>, MonteCarloError> {
    config.validate()?;
    let outcomes = config
        .delays
        .iter()
        .map(|&tau| {
            let chi = config.indistinguishability(tau);
            two_photon_outcome(config.mzi_phase, config.routing_visibility, chi * chi)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(config
        .delays
        .par_iter()
        .zip(outcomes.par_iter())
        .enumerate()
        .map(|(i, (&delay, o))| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let (mut both_b, mut split) = (0u64, 0u64);
            for _ in 0..config.pulses_per_point {
                let u: f64 = rng.random();
                if u < o.both_b {
                    both_b += 1;
                } else if u < o.both_b + o.split {
                    split += 1;
                }
            }
            let both_c = config.pulses_per_point - both_b - split;
            HomScanPoint {
                delay,
                mzi_phase: config.mzi_phase,
                pulses: config.pulses_per_point,
                coincidences: split,
                singles_b: both_b + split,
                singles_c: both_c + split,
                coincidence_probability: o.split,
            }
        })
        .collect())
}

/// Weighted least-squares fit of `C(τ) = A - B exp(-τ² / σ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipFit {
    pub baseline: f64,
    pub depth: f64,
    /// `B / A`
    pub visibility: f64,
    pub visibility_std_error: f64,
}

/// Straight-line fit `C(τ) = a + b τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_std_error: f64,
}

/// Solves the weighted normal equations for two regressors. Returns the
/// coefficients and their covariance `(XᵀWX)⁻¹`.
fn weighted_linear_fit(
    x: &[(f64, f64)],
    y: &[f64],
    w: &[f64],
) -> Result<([f64; 2], [[f64; 2]; 2]), MonteCarloError> {
    let mut m = [[0.0; 2]; 2];
    let mut v = [0.0; 2];
    for ((&(a, b), &yi), &wi) in x.iter().zip(y).zip(w) {
        m[0][0] += wi * a * a;
        m[0][1] += wi * a * b;
        m[1][1] += wi * b * b;
        v[0] += wi * a * yi;
        v[1] += wi * b * yi;
    }
    m[1][0] = m[0][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() <= f64::EPSILON * m[0][0] * m[1][1] {
        return Err(MonteCarloError::DegenerateFit);
    }
    let inv = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];
    let coef = [
        inv[0][0] * v[0] + inv[0][1] * v[1],
        inv[1][0] * v[0] + inv[1][1] * v[1],
    ];
    Ok((coef, inv))
}

fn poisson_weights(points: &[HomScanPoint]) -> Vec<f64> {
    points
        .iter()
        .map(|p| 1.0 / (p.coincidences as f64).max(1.0))
        .collect()
}

pub fn fit_dip(points: &[HomScanPoint], coherence_time: f64) -> Result<DipFit, MonteCarloError> {
    if points.len() < 3 {
        return Err(MonteCarloError::TooFewPoints(points.len()));
    }
    let s2 = coherence_time * coherence_time;
    let x: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (1.0, -(-p.delay * p.delay / s2).exp()))
        .collect();
    let y: Vec<f64> = points.iter().map(|p| p.coincidences as f64).collect();
    let ([a, b], cov) = weighted_linear_fit(&x, &y, &poisson_weights(points))?;
    if a <= 0.0 {
        return Err(MonteCarloError::DegenerateFit);
    }
    let v = b / a;
    // delta method on V = B / A
    let var = (cov[1][1] - 2.0 * v * cov[0][1] + v * v * cov[0][0]) / (a * a);
    Ok(DipFit {
        baseline: a,
        depth: b,
        visibility: v,
        visibility_std_error: var.max(0.0).sqrt(),
    })
}

pub fn fit_slope(points: &[HomScanPoint]) -> Result<SlopeFit, MonteCarloError> {
    if points.len() < 3 {
        return Err(MonteCarloError::TooFewPoints(points.len()));
    }
    let x: Vec<(f64, f64)> = points.iter().map(|p| (1.0, p.delay)).collect();
    let y: Vec<f64> = points.iter().map(|p| p.coincidences as f64).collect();
    let ([a, b], cov) = weighted_linear_fit(&x, &y, &poisson_weights(points))?;
    Ok(SlopeFit {
        intercept: a,
        slope: b,
        slope_std_error: cov[1][1].sqrt(),
    })
}

/// `χ₀` for which the ideal-router dip at phase π/2 has visibility `V`.
pub fn indistinguishability_for_visibility(visibility: f64) -> f64 {
    visibility.clamp(0.0, 1.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn balanced_router_cancels_coincidences() {
        let o = two_photon_outcome(FRAC_PI_2, 1.0, 1.0).unwrap();
        assert!(o.split.abs() < 1e-14);
        assert!((o.both_b - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_phase_routes_straight_through() {
        for chi_sq in [0.0, 0.4, 1.0] {
            let o = two_photon_outcome(0.0, 1.0, chi_sq).unwrap();
            assert!((o.split - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn distinguishable_photons_split_half_the_time() {
        let o = two_photon_outcome(FRAC_PI_2, 1.0, 0.0).unwrap();
        assert!((o.split - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cross_port_follows_fringe() {
        for v in [1.0, 0.95, 0.6] {
            for phase in [0.0, 0.7, FRAC_PI_2, 2.5] {
                let s = mzi(&FockState::basis(1, &[1, 0]).unwrap(), phase, v).unwrap();
                let cross = s.probability(&[0, 1]).unwrap();
                assert!((cross - (1.0 + v * f64::cos(phase)) / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn outcome_sums_to_one() {
        let o = two_photon_outcome(1.1, 0.9, 0.3).unwrap();
        assert!((o.both_b + o.split + o.both_c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_coherence_time() {
        let c = HomScanConfig {
            delays: vec![0.0],
            mzi_phase: 0.0,
            coherence_time: 0.0,
            peak_indistinguishability: 1.0,
            routing_visibility: 1.0,
            pulses_per_point: 10,
            seed: 1,
        };
        assert!(matches!(
            hom_scan(&c),
            Err(MonteCarloError::InvalidCoherenceTime(_))
        ));
    }

    #[test]
    fn dip_fit_recovers_exact_curve() {
        let sigma = 2.0;
        let points: Vec<HomScanPoint> = (-6..=6)
            .map(|k| {
                let tau = k as f64;
                let c = 1000.0 - 800.0 * (-tau * tau / (sigma * sigma)).exp();
                HomScanPoint {
                    delay: tau,
                    mzi_phase: FRAC_PI_2,
                    pulses: 0,
                    coincidences: c.round() as u64,
                    singles_b: 0,
                    singles_c: 0,
                    coincidence_probability: 0.0,
                }
            })
            .collect();
        let fit = fit_dip(&points, sigma).unwrap();
        assert!((fit.visibility - 0.8).abs() < 2e-3);
        let slope = fit_slope(&points).unwrap();
        assert!(slope.slope.abs() < 1e-9);
    }

    #[test]
    fn fitted_overlap_for_measured_visibility() {
        let chi = indistinguishability_for_visibility(0.887);
        assert!((chi - 0.942).abs() < 1e-3);
        let o = two_photon_outcome(FRAC_PI_2, 1.0, chi * chi).unwrap();
        assert!(((0.5 - o.split) / 0.5 - 0.887).abs() < 1e-12);
    }
}
