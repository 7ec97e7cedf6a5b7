//! Exact heralding comparison of detector and multiplexing choices.

use std::fmt;

use super::MonteCarloError;
use crate::analytic::RouterScheme;
use crate::fock::{
    apply_loss, apply_spdc, g2_zero, herald, max_valid_epsilon, mean_pairs_from_epsilon,
    DetectorModel, FockState, HeraldCondition, QuantumState,
};

/// Coupling from crystal to each detector.
pub const SCHEME_COUPLING: f64 = 0.7;

/// One heralded-source design.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldingScheme {
    pub name: &'static str,
    pub sources: u32,
    pub detector: DetectorModel,
    pub condition: HeraldCondition,
    /// Transmission of the trigger and signal arms.
    pub coupling: f64,
    pub scheme: RouterScheme,
    pub path_router_transmission: f64,
    pub polarization_router_transmission: f64,
}

impl HeraldingScheme {
    /// One source, 60 % bucket trigger.
    pub fn bucket60_single() -> Self {
        HeraldingScheme {
            name: "bucket60_1spdc",
            sources: 1,
            detector: DetectorModel::bucket(0.6).expect("valid efficiency"),
            condition: HeraldCondition::ClickedAtLeastOnce,
            coupling: SCHEME_COUPLING,
            scheme: RouterScheme::Hybrid,
            path_router_transmission: 1.0,
            polarization_router_transmission: 1.0,
        }
    }

    /// One source, 95 % number-resolving trigger heralding on one count.
    pub fn pnrd95_single() -> Self {
        HeraldingScheme {
            name: "pnrd95_1spdc",
            detector: DetectorModel::number_resolving(0.95).expect("valid efficiency"),
            condition: HeraldCondition::ExactlyOne,
            ..Self::bucket60_single()
        }
    }

    /// Four sources with 60 % bucket triggers in the hybrid layout: one
    /// 95 % path router and a lossless polarization router.
    pub fn bucket60_four_sources() -> Self {
        HeraldingScheme {
            name: "bucket60_4spdc_t95",
            sources: 4,
            path_router_transmission: 0.95,
            ..Self::bucket60_single()
        }
    }

    pub fn presets() -> Vec<Self> {
        vec![
            Self::bucket60_single(),
            Self::pnrd95_single(),
            Self::bucket60_four_sources(),
        ]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::presets().into_iter().find(|s| s.name == name)
    }

    fn router_transmission(&self) -> Result<f64, MonteCarloError> {
        if self.sources == 1 {
            return Ok(1.0);
        }
        Ok(self.scheme.transmission(
            self.sources,
            self.path_router_transmission,
            self.polarization_router_transmission,
        )?)
    }
}

impl fmt::Display for HeraldingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemePoint {
    pub scheme: &'static str,
    pub epsilon: f64,
    pub mean_pairs: f64,
    /// Trigger probability of one source.
    pub herald_probability: f64,
    /// Some trigger fired and at least one photon left the array.
    pub output_probability: f64,
    pub g2: f64,
}

/// Heralds one two-mode squeezed source and routes the signal.
///
/// `P_output = [1 - (1 - p_h)^m] (1 - p_vac)`, where `p_h` is the trigger
/// probability of one source and `p_vac` the vacuum weight of the routed
/// conditional signal. `g²` is that of the routed signal; loss leaves it
/// unchanged, and every source of the array delivers the same conditional
/// state.
pub fn evaluate_scheme(
    scheme: &HeraldingScheme,
    epsilon: f64,
    cutoff: usize,
) -> Result<SchemePoint, MonteCarloError> {
    if !(epsilon > 0.0 && epsilon <= max_valid_epsilon(cutoff)) {
        return Err(MonteCarloError::EpsilonOutOfRange {
            epsilon,
            max: max_valid_epsilon(cutoff),
        });
    }
    let source = apply_spdc(&FockState::vacuum(2, cutoff)?, 0, 1, epsilon)?;
    let lossy = apply_loss(
        &apply_loss(&source, 0, scheme.coupling)?,
        1,
        scheme.coupling,
    )?;
    let heralded = herald(&lossy, 0, &scheme.detector, scheme.condition)?;
    let routed = apply_loss(&heralded.conditional, 0, scheme.router_transmission()?)?;
    let p_vac = routed.photon_number_distribution(0)?[0];
    let p_h = heralded.probability;
    let any_trigger = -(scheme.sources as f64 * (-p_h).ln_1p()).exp_m1();
    Ok(SchemePoint {
        scheme: scheme.name,
        epsilon,
        mean_pairs: mean_pairs_from_epsilon(epsilon),
        herald_probability: p_h,
        output_probability: any_trigger * (1.0 - p_vac),
        g2: g2_zero(&routed, 0)?,
    })
}

/// Every scheme at every `ε`, scheme-major.
pub fn compare_heralding_schemes(
    epsilon_grid: &[f64],
    schemes: &[HeraldingScheme],
    cutoff: usize,
) -> Result<Vec<SchemePoint>, MonteCarloError> {
    if epsilon_grid.is_empty() {
        return Err(MonteCarloError::EmptyGrid("epsilon"));
    }
    if schemes.is_empty() {
        return Err(MonteCarloError::EmptyGrid("schemes"));
    }
    schemes
        .iter()
        .flat_map(|s| {
            epsilon_grid
                .iter()
                .map(move |&e| evaluate_scheme(s, e, cutoff))
        })
        .collect()
}

/// `g²` of two schemes at the same output probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPoint {
    pub output_probability: f64,
    pub g2_candidate: f64,
    pub g2_reference: f64,
}

/// For every candidate point inside the reference's output-probability
/// range, interpolates the reference `g²` linearly in `P_output`. Both
/// curves must be ordered by increasing `P_output`.
pub fn match_output_probability(
    candidate: &[SchemePoint],
    reference: &[SchemePoint],
) -> Vec<MatchedPoint> {
    let mut out = Vec::new();
    for c in candidate {
        let p = c.output_probability;
        let hit = reference
            .windows(2)
            .find(|w| w[0].output_probability <= p && p <= w[1].output_probability);
        if let Some(w) = hit {
            let span = w[1].output_probability - w[0].output_probability;
            let f = if span > 0.0 {
                (p - w[0].output_probability) / span
            } else {
                0.0
            };
            out.push(MatchedPoint {
                output_probability: p,
                g2_candidate: c.g2,
                g2_reference: w[0].g2 + f * (w[1].g2 - w[0].g2),
            });
        }
    }
    out
}

/// The `ε` grid used for the comparison: `0.02, 0.04, …, 0.5`.
pub fn default_epsilon_grid() -> Vec<f64> {
    (1..=25).map(|k| 0.02 * k as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::DEFAULT_CUTOFF;

    fn curve(s: &HeraldingScheme) -> Vec<SchemePoint> {
        compare_heralding_schemes(
            &default_epsilon_grid(),
            std::slice::from_ref(s),
            DEFAULT_CUTOFF,
        )
        .unwrap()
    }

    #[test]
    fn weak_pumping_limit() {
        for s in HeraldingScheme::presets() {
            let p = evaluate_scheme(&s, 1e-4, DEFAULT_CUTOFF).unwrap();
            assert!(p.g2 < 1e-6);
            assert!(p.output_probability < 1e-6);
        }
    }

    #[test]
    fn number_resolution_lowers_g2() {
        for &e in &[0.1, 0.3, 0.5] {
            let b =
                evaluate_scheme(&HeraldingScheme::bucket60_single(), e, DEFAULT_CUTOFF).unwrap();
            let p = evaluate_scheme(&HeraldingScheme::pnrd95_single(), e, DEFAULT_CUTOFF).unwrap();
            assert!(p.g2 < b.g2);
        }
    }

    #[test]
    fn curves_are_monotone() {
        for s in HeraldingScheme::presets() {
            let c = curve(&s);
            assert!(c
                .windows(2)
                .all(|w| w[0].output_probability < w[1].output_probability));
            assert!(c.windows(2).all(|w| w[0].g2 < w[1].g2));
        }
    }

    #[test]
    fn multiplexed_bucket_beats_single_pnrd() {
        let four = curve(&HeraldingScheme::bucket60_four_sources());
        let pnrd = curve(&HeraldingScheme::pnrd95_single());
        let matched = match_output_probability(&four, &pnrd);
        assert!(matched.len() >= 5);
        for m in matched {
            assert!(m.g2_candidate < m.g2_reference, "{m:?}");
        }
    }

    #[test]
    fn two_lossy_routers_lose_at_low_output() {
        // a pure path tree with two 95 % routers on the signal path
        let two = HeraldingScheme {
            scheme: RouterScheme::PurePath,
            ..HeraldingScheme::bucket60_four_sources()
        };
        let four = curve(&two);
        let pnrd = curve(&HeraldingScheme::pnrd95_single());
        let matched = match_output_probability(&four, &pnrd);
        let low = matched.first().unwrap();
        assert!(low.g2_candidate > low.g2_reference);
        let high = matched.last().unwrap();
        assert!(high.g2_candidate < high.g2_reference);
    }

    #[test]
    fn heralded_probability_against_enumeration() {
        // p_h = Σ_n P_n (1 - (1 - η c)^n), thermal P_n truncated at the cutoff
        let e: f64 = 0.3;
        let s = HeraldingScheme::bucket60_single();
        let t2 = e.tanh().powi(2);
        let probs: Vec<f64> = (0..=DEFAULT_CUTOFF).map(|n| t2.powi(n as i32)).collect();
        let z: f64 = probs.iter().sum();
        let eta: f64 = 0.6 * 0.7;
        let p_h: f64 = probs
            .iter()
            .enumerate()
            .map(|(n, p)| p / z * (1.0 - (1.0 - eta).powi(n as i32)))
            .sum();
        let got = evaluate_scheme(&s, e, DEFAULT_CUTOFF).unwrap();
        assert!((got.herald_probability - p_h).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_epsilon() {
        let s = HeraldingScheme::bucket60_single();
        assert!(evaluate_scheme(&s, 0.0, DEFAULT_CUTOFF).is_err());
        assert!(evaluate_scheme(&s, 0.6, DEFAULT_CUTOFF).is_err());
        assert!(compare_heralding_schemes(&[], &[s], DEFAULT_CUTOFF).is_err());
    }
}
