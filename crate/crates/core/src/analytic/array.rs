//! Output statistics of an array of `m` sequentially prioritized sources.

use std::fmt;
use std::str::FromStr;

use super::{AnalyticError, PairNumberDistribution};
use crate::fock::DetectorModel;

/// How the sources are combined into one output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RouterScheme {
    /// Binary tree of `m - 1` path routers; the photon crosses `log₂ m`.
    PurePath,
    /// Path routers for pairs of polarization-multiplexed sources plus one
    /// polarization router: `log₂(m/2)` path routers and the polarization
    /// router on every output path.
    #[default]
    Hybrid,
}

impl fmt::Display for RouterScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RouterScheme::PurePath => "pure_path",
            RouterScheme::Hybrid => "hybrid",
        })
    }
}

impl FromStr for RouterScheme {
    type Err = AnalyticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pure_path" | "path" => Ok(RouterScheme::PurePath),
            "hybrid" => Ok(RouterScheme::Hybrid),
            other => Err(AnalyticError::UnknownScheme(other.to_string())),
        }
    }
}

/// Routers crossed by the output photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouterPath {
    pub path_routers: u32,
    pub polarization_routers: u32,
}

impl RouterScheme {
    /// Router count for `m` sources. Requires `m` to be a power of two; the
    /// hybrid scheme additionally needs `m ≥ 2`.
    pub fn router_path(&self, m: u32) -> Result<RouterPath, AnalyticError> {
        if m == 0 {
            return Err(AnalyticError::InvalidSourceCount(m));
        }
        if !m.is_power_of_two() {
            return Err(AnalyticError::NotPowerOfTwo(m));
        }
        let levels = m.trailing_zeros();
        match self {
            RouterScheme::PurePath => Ok(RouterPath {
                path_routers: levels,
                polarization_routers: 0,
            }),
            RouterScheme::Hybrid if m < 2 => Err(AnalyticError::HybridNeedsPairs),
            RouterScheme::Hybrid => Ok(RouterPath {
                path_routers: levels - 1,
                polarization_routers: 1,
            }),
        }
    }

    /// `T = T₀^{path routers} · T_pol^{polarization routers}`.
    pub fn transmission(
        &self,
        m: u32,
        path_router_transmission: f64,
        polarization_router_transmission: f64,
    ) -> Result<f64, AnalyticError> {
        check_unit("path router transmission", path_router_transmission)?;
        check_unit(
            "polarization router transmission",
            polarization_router_transmission,
        )?;
        let path = self.router_path(m)?;
        Ok(path_router_transmission.powi(path.path_routers as i32)
            * polarization_router_transmission.powi(path.polarization_routers as i32))
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<(), AnalyticError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(AnalyticError::OutOfUnitInterval { name, value })
    }
}

/// Parameters of an `m`-source multiplexed array.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    pub sources: u32,
    pub distribution: PairNumberDistribution,
    pub scheme: RouterScheme,
    /// `T₀`, per path router.
    pub path_router_transmission: f64,
    /// `T_pol`
    pub polarization_router_transmission: f64,
    /// `V^π` of each path router.
    pub routing_visibility: f64,
    pub trigger_detector: DetectorModel,
    /// Transmission from crystal to trigger detector.
    pub trigger_coupling: f64,
    /// Transmission from the last router to the analysis detectors.
    pub output_coupling: f64,
}

impl ArrayConfig {
    /// Lossless array with ideal bucket triggers and perfect routers.
    pub fn new(sources: u32, distribution: PairNumberDistribution) -> Self {
        ArrayConfig {
            sources,
            distribution,
            scheme: RouterScheme::Hybrid,
            path_router_transmission: 1.0,
            polarization_router_transmission: 1.0,
            routing_visibility: 1.0,
            trigger_detector: DetectorModel::ideal_bucket(),
            trigger_coupling: 1.0,
            output_coupling: 1.0,
        }
    }

    pub fn with_routers(mut self, path: f64, polarization: f64, visibility: f64) -> Self {
        self.path_router_transmission = path;
        self.polarization_router_transmission = polarization;
        self.routing_visibility = visibility;
        self
    }

    pub fn with_scheme(mut self, scheme: RouterScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_trigger(mut self, detector: DetectorModel, coupling: f64) -> Self {
        self.trigger_detector = detector;
        self.trigger_coupling = coupling;
        self
    }

    pub fn with_output_coupling(mut self, coupling: f64) -> Self {
        self.output_coupling = coupling;
        self
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        if self.sources == 0 {
            return Err(AnalyticError::InvalidSourceCount(0));
        }
        check_unit("path router transmission", self.path_router_transmission)?;
        check_unit(
            "polarization router transmission",
            self.polarization_router_transmission,
        )?;
        check_unit("routing visibility", self.routing_visibility)?;
        check_unit("trigger coupling", self.trigger_coupling)?;
        check_unit("output coupling", self.output_coupling)?;
        Ok(())
    }

    /// Routers on the signal path as simulated. A lone source is not routed;
    /// otherwise the scheme's tree applies (power-of-two `m` only).
    pub fn signal_router_path(&self) -> Result<RouterPath, AnalyticError> {
        if self.sources == 1 {
            return Ok(RouterPath {
                path_routers: 0,
                polarization_routers: 0,
            });
        }
        self.scheme.router_path(self.sources)
    }
}

/// `Σ_{k<m} P₀^k = (1 - P₀^m) / (1 - P₀)`, evaluated without cancellation.
fn priority_series(m: u32, dist: &PairNumberDistribution) -> f64 {
    let ln_p0 = dist.ln_prob_zero();
    if ln_p0 == 0.0 {
        return m as f64;
    }
    (m as f64 * ln_p0).exp_m1() / ln_p0.exp_m1()
}

/// Multiplexing gain `G = Q₁ / P₁ = (1 - P₀^m) / (1 - P₀)`.
///
/// Nondecreasing in `m` and bounded by `1 / (1 - P₀)`. Any `m ≥ 1` is
/// accepted.
pub fn gain(m: u32, dist: &PairNumberDistribution) -> Result<f64, AnalyticError> {
    if m == 0 {
        return Err(AnalyticError::InvalidSourceCount(0));
    }
    Ok(priority_series(m, dist))
}

/// `lim_{m→∞} G = 1 / (1 - P₀)`; infinite at zero mean.
pub fn gain_limit(dist: &PairNumberDistribution) -> f64 {
    1.0 / dist.prob_nonzero()
}

/// Probability that a lossless array delivers exactly one photon,
/// `Q₁ = P₁ (1 - P₀^m) / (1 - P₀)`.
pub fn q_one(config: &ArrayConfig) -> Result<f64, AnalyticError> {
    Ok(config.distribution.prob_n(1) * gain(config.sources, &config.distribution)?)
}

/// Probability that a lossless array delivers more than one photon,
/// `Q₍>1₎ = P₍>1₎ (1 - P₀^m) / (1 - P₀)`.
pub fn q_gt_one(config: &ArrayConfig) -> Result<f64, AnalyticError> {
    Ok(config.distribution.prob_gt_one() * gain(config.sources, &config.distribution)?)
}

/// `G_tot = G · T` with the exact gain and the scheme's router transmission.
pub fn total_gain(config: &ArrayConfig, scheme: RouterScheme) -> Result<f64, AnalyticError> {
    let t = scheme.transmission(
        config.sources,
        config.path_router_transmission,
        config.polarization_router_transmission,
    )?;
    Ok(gain(config.sources, &config.distribution)? * t)
}

/// Small-mean approximation `G_tot ≈ m · T`, i.e. `m T₀^{log₂ m}` for the
/// pure path tree and `m T₀^{log₂(m/2)} T_pol` for the hybrid one.
pub fn total_gain_small_mean(
    m: u32,
    path_router_transmission: f64,
    polarization_router_transmission: f64,
    scheme: RouterScheme,
) -> Result<f64, AnalyticError> {
    Ok(m as f64
        * scheme.transmission(
            m,
            path_router_transmission,
            polarization_router_transmission,
        )?)
}

/// Path-router transmission above which the small-mean total gain exceeds 1.
///
/// `1/2` for the pure path tree, `1 / (2 (2 T_pol)^{1/n})` with
/// `n = log₂(m/2)` for the hybrid one. `None` when no path router is
/// crossed (`m = 1`, or hybrid `m = 2`), since `T₀` then has no influence.
pub fn break_even_path_transmission(
    m: u32,
    scheme: RouterScheme,
    polarization_router_transmission: f64,
) -> Result<Option<f64>, AnalyticError> {
    check_unit(
        "polarization router transmission",
        polarization_router_transmission,
    )?;
    let path = scheme.router_path(m)?;
    if path.path_routers == 0 {
        return Ok(None);
    }
    let n = path.path_routers as f64;
    Ok(Some(match scheme {
        RouterScheme::PurePath => 0.5,
        RouterScheme::Hybrid => 0.5 / (2.0 * polarization_router_transmission).powf(1.0 / n),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_array_output;
    use proptest::prelude::*;

    fn poisson(mean: f64) -> PairNumberDistribution {
        PairNumberDistribution::poisson(mean).unwrap()
    }

    #[test]
    fn single_source_reduces_to_source_probabilities() {
        let d = poisson(0.3);
        let c = ArrayConfig::new(1, d);
        assert!((q_one(&c).unwrap() - d.prob_n(1)).abs() < 1e-17);
        assert!((q_gt_one(&c).unwrap() - d.prob_gt_one()).abs() < 1e-17);
        assert_eq!(gain(1, &d).unwrap(), 1.0);
    }

    #[test]
    fn two_sources_against_enumeration() {
        let d = poisson(0.1);
        let q1 = q_one(&ArrayConfig::new(2, d)).unwrap();
        assert!((q1 - d.prob_n(1) * (1.0 + d.prob_n(0))).abs() < 1e-16);
        assert!((q1 - 0.17236).abs() < 1e-5);
        let probs: Vec<f64> = (0..=8).map(|n| d.prob_n(n)).collect();
        let (one, _) = enumerate_array_output(2, &probs);
        assert!((q1 - one).abs() < 1e-14);
    }

    #[test]
    fn four_sources_gt_one_against_enumeration() {
        let d = poisson(0.1);
        // 5^4 tuples with at most 4 pairs per source
        let probs: Vec<f64> = (0..=4).map(|n| d.prob_n(n)).collect();
        let (one, many) = enumerate_array_output(4, &probs);
        let c = ArrayConfig::new(4, d);
        // the enumeration omits tuples containing ≥5 pairs (P5 ≈ 7.5e-8 each)
        let tail = 4.0 * (1.0 - probs.iter().sum::<f64>());
        assert!((q_gt_one(&c).unwrap() - many).abs() <= tail);
        assert!((q_one(&c).unwrap() - one).abs() <= tail);
        assert!(tail < 1e-6);
    }

    #[test]
    fn large_array_approaches_geometric_limit() {
        let d = poisson(0.1);
        let p0 = d.prob_n(0);
        let q1 = q_one(&ArrayConfig::new(200, d)).unwrap();
        let closed = d.prob_n(1) * (1.0 - p0.powi(200)) / (1.0 - p0);
        assert!((q1 - closed).abs() < 1e-12);
        let limit = d.prob_n(1) / (1.0 - p0);
        let q1 = q_one(&ArrayConfig::new(400, d)).unwrap();
        assert!((q1 - limit).abs() < 1e-12);
    }

    #[test]
    fn gain_saturation_value() {
        let d = poisson(0.1);
        let limit = gain_limit(&d);
        assert!((limit - 10.5083).abs() < 1e-4);
        assert!((gain(10_000, &d).unwrap() - limit).abs() < 1e-6);
    }

    #[test]
    fn gain_small_mean_is_m() {
        let g = gain(4, &poisson(1e-9)).unwrap();
        assert!((g - 4.0).abs() < 1e-8);
        assert_eq!(gain(4, &poisson(0.0)).unwrap(), 4.0);
        assert!(gain(0, &poisson(0.1)).is_err());
    }

    #[test]
    fn lossy_total_gain_values() {
        let g = total_gain_small_mean(4, 0.95, 1.0, RouterScheme::PurePath).unwrap();
        assert!((g - 3.61).abs() < 1e-12);
        for k in 0..8 {
            let m = 1 << k;
            let g = total_gain_small_mean(m, 0.5, 1.0, RouterScheme::PurePath).unwrap();
            assert!((g - 1.0).abs() < 1e-12);
        }
        let hybrid = total_gain_small_mean(4, 0.25, 1.0, RouterScheme::Hybrid).unwrap();
        assert!((hybrid - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_gain_rejects_non_binary_trees() {
        let c = ArrayConfig::new(3, poisson(0.1));
        assert_eq!(
            total_gain(&c, RouterScheme::PurePath),
            Err(AnalyticError::NotPowerOfTwo(3))
        );
        let c = ArrayConfig::new(1, poisson(0.1));
        assert_eq!(
            total_gain(&c, RouterScheme::Hybrid),
            Err(AnalyticError::HybridNeedsPairs)
        );
        // gain itself accepts any m
        assert!(q_one(&ArrayConfig::new(3, poisson(0.1))).is_ok());
    }

    #[test]
    fn exact_total_gain_uses_exact_gain() {
        let d = poisson(0.1);
        let c = ArrayConfig::new(4, d).with_routers(0.95, 0.97, 1.0);
        let expected = gain(4, &d).unwrap() * 0.95 * 0.97;
        assert!((total_gain(&c, RouterScheme::Hybrid).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn break_even_thresholds() {
        assert_eq!(
            break_even_path_transmission(8, RouterScheme::PurePath, 1.0).unwrap(),
            Some(0.5)
        );
        let t = break_even_path_transmission(4, RouterScheme::Hybrid, 1.0)
            .unwrap()
            .unwrap();
        assert!((t - 0.25).abs() < 1e-15);
        assert_eq!(
            break_even_path_transmission(2, RouterScheme::Hybrid, 1.0).unwrap(),
            None
        );
        for m in [8u32, 16, 64] {
            let t = break_even_path_transmission(m, RouterScheme::Hybrid, 0.9)
                .unwrap()
                .unwrap();
            let g = total_gain_small_mean(m, t, 0.9, RouterScheme::Hybrid).unwrap();
            assert!((g - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!(
            "hybrid".parse::<RouterScheme>().unwrap(),
            RouterScheme::Hybrid
        );
        assert_eq!(
            "pure_path".parse::<RouterScheme>().unwrap(),
            RouterScheme::PurePath
        );
        assert!("ring".parse::<RouterScheme>().is_err());
    }

    proptest! {
        #[test]
        fn signal_to_noise_is_independent_of_m(m in 1u32..=64, mean in 1e-4f64..2.0, thermal in any::<bool>()) {
            let d = if thermal {
                PairNumberDistribution::thermal(mean)
            } else {
                PairNumberDistribution::poisson(mean)
            }.unwrap();
            let c = ArrayConfig::new(m, d);
            let lhs = q_one(&c).unwrap() / q_gt_one(&c).unwrap();
            let rhs = d.prob_n(1) / d.prob_gt_one();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }

        #[test]
        fn gain_monotone_and_bounded(m in 1u32..500, mean in 1e-3f64..3.0) {
            let d = poisson(mean);
            let g = gain(m, &d).unwrap();
            let g_next = gain(m + 1, &d).unwrap();
            prop_assert!(g_next >= g);
            prop_assert!(g <= gain_limit(&d) * (1.0 + 1e-12));
        }

        #[test]
        fn poisson_and_thermal_gain_agree_to_first_order(m in 1u32..=16, mean in 1e-4f64..0.05) {
            let gp = gain(m, &poisson(mean)).unwrap();
            let gt = gain(m, &PairNumberDistribution::thermal(mean).unwrap()).unwrap();
            // both are m - m(m-1)/2 · N̄ + O(N̄²)
            let m = m as f64;
            prop_assert!((gp - gt).abs() <= m * m * m * mean * mean);
        }

        #[test]
        fn half_transmission_balances_gain(k in 0u32..10, mean in 1e-4f64..1.0) {
            let m = 1u32 << k;
            let c = ArrayConfig::new(m, poisson(mean)).with_routers(0.5, 1.0, 1.0);
            let tg = total_gain(&c, RouterScheme::PurePath).unwrap();
            let expected = gain(m, &c.distribution).unwrap() * 2f64.powi(-(k as i32));
            prop_assert!((tg - expected).abs() < 1e-12);
        }
    }
}
