//! Detector response models and heralding by conditioning on a trigger mode.

use std::fmt;

use super::state::{FockState, MixedStateEnsemble, QuantumState};
use super::FockError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    /// Click / no-click avalanche photodiode.
    Bucket,
    /// Reports the number of detected photons.
    NumberResolving,
}

/// A photodetector with quantum efficiency `η`. Each incident photon is
/// detected independently with probability `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    kind: DetectorKind,
    efficiency: f64,
}

impl DetectorModel {
    pub fn new(kind: DetectorKind, efficiency: f64) -> Result<Self, FockError> {
        if !(0.0..=1.0).contains(&efficiency) {
            return Err(FockError::InvalidProbability {
                name: "detector efficiency",
                value: efficiency,
            });
        }
        Ok(DetectorModel { kind, efficiency })
    }

    pub fn bucket(efficiency: f64) -> Result<Self, FockError> {
        Self::new(DetectorKind::Bucket, efficiency)
    }

    pub fn number_resolving(efficiency: f64) -> Result<Self, FockError> {
        Self::new(DetectorKind::NumberResolving, efficiency)
    }

    pub fn ideal_bucket() -> Self {
        DetectorModel {
            kind: DetectorKind::Bucket,
            efficiency: 1.0,
        }
    }

    pub fn kind(&self) -> DetectorKind {
        self.kind
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    /// The same detector behind an extra transmission `t` (coupling loss).
    pub fn behind_transmission(&self, t: f64) -> Result<Self, FockError> {
        Self::new(self.kind, self.efficiency * t)
    }

    /// `1 - (1-η)^n`
    pub fn click_probability(&self, incident: usize) -> f64 {
        1.0 - (1.0 - self.efficiency).powi(incident as i32)
    }

    /// `C(n,k) η^k (1-η)^(n-k)`
    pub fn count_probability(&self, incident: usize, detected: usize) -> f64 {
        if detected > incident {
            return 0.0;
        }
        let c = (0..detected).fold(1.0, |acc, j| acc * (incident - j) as f64 / (j + 1) as f64);
        c * self.efficiency.powi(detected as i32)
            * (1.0 - self.efficiency).powi((incident - detected) as i32)
    }

    /// Probability that `incident` photons produce an outcome satisfying
    /// `condition`.
    pub fn outcome_weight(
        &self,
        condition: HeraldCondition,
        incident: usize,
    ) -> Result<f64, FockError> {
        match (self.kind, condition) {
            (_, HeraldCondition::ClickedAtLeastOnce) => Ok(self.click_probability(incident)),
            (_, HeraldCondition::NoClick) => Ok(1.0 - self.click_probability(incident)),
            (DetectorKind::NumberResolving, HeraldCondition::ExactlyOne) => {
                Ok(self.count_probability(incident, 1))
            }
            (DetectorKind::NumberResolving, HeraldCondition::Exactly(k)) => {
                Ok(self.count_probability(incident, k))
            }
            (DetectorKind::Bucket, c) => Err(FockError::UnsupportedCondition(c)),
        }
    }
}

/// Which trigger outcome announces a photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeraldCondition {
    ClickedAtLeastOnce,
    NoClick,
    /// Number-resolving detectors only.
    ExactlyOne,
    /// Number-resolving detectors only.
    Exactly(usize),
}

impl fmt::Display for HeraldCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeraldCondition::ClickedAtLeastOnce => write!(f, "click"),
            HeraldCondition::NoClick => write!(f, "no click"),
            HeraldCondition::ExactlyOne => write!(f, "exactly one count"),
            HeraldCondition::Exactly(k) => write!(f, "exactly {k} counts"),
        }
    }
}

/// Result of conditioning on a trigger outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub probability: f64,
    /// State of the remaining modes; the trigger mode is traced out and the
    /// mode indices above it shift down by one.
    pub conditional: MixedStateEnsemble,
}

/// Measures `trigger_mode` with `detector` and keeps the runs that satisfy
/// `condition`.
pub fn herald<S: QuantumState + ?Sized>(
    state: &S,
    trigger_mode: usize,
    detector: &DetectorModel,
    condition: HeraldCondition,
) -> Result<HeraldOutcome, FockError> {
    if state.num_modes() < 2 {
        return Err(FockError::NoRemainingModes);
    }
    let base = state.cutoff() + 1;
    let weights = (0..base)
        .map(|n| detector.outcome_weight(condition, n))
        .collect::<Result<Vec<_>, _>>()?;

    let mut components = Vec::new();
    let mut probability = 0.0;
    for (p, pure) in state.weighted_states() {
        pure.check_mode(trigger_mode)?;
        pure.require_normalized()?;
        let stride = pure.stride(trigger_mode);
        for (n, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let mut slice = FockState::vacuum(pure.num_modes() - 1, pure.cutoff())?;
            let amps = slice.amplitudes_mut();
            for (i, amp) in amps.iter_mut().enumerate() {
                let (high, low) = (i / stride, i % stride);
                *amp = pure.amplitudes()[(high * base + n) * stride + low];
            }
            let q = slice.norm_sqr();
            if q <= 0.0 {
                continue;
            }
            slice.renormalize()?;
            probability += p * w * q;
            components.push((p * w * q, slice));
        }
    }
    if probability <= 0.0 {
        return Err(FockError::ZeroProbabilityOutcome);
    }
    Ok(HeraldOutcome {
        probability,
        conditional: MixedStateEnsemble::from_weights(components)?,
    })
}

/// Probabilities of every detector outcome on one mode: `[no click, click]`
/// for a bucket detector, `[P(0 counts), …, P(cutoff counts)]` for a
/// number-resolving one. Sums to one.
pub fn detection_distribution<S: QuantumState + ?Sized>(
    state: &S,
    mode: usize,
    detector: &DetectorModel,
) -> Result<Vec<f64>, FockError> {
    let photons = state.photon_number_distribution(mode)?;
    let out = match detector.kind() {
        DetectorKind::Bucket => {
            let click: f64 = photons
                .iter()
                .enumerate()
                .map(|(n, p)| p * detector.click_probability(n))
                .sum();
            vec![1.0 - click, click]
        }
        DetectorKind::NumberResolving => (0..photons.len())
            .map(|k| {
                photons
                    .iter()
                    .enumerate()
                    .map(|(n, p)| p * detector.count_probability(n, k))
                    .sum()
            })
            .collect(),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_spdc, g2_zero};

    #[test]
    fn ideal_herald_of_pair() {
        let s = FockState::basis(4, &[1, 1]).unwrap();
        let h = herald(
            &s,
            0,
            &DetectorModel::ideal_bucket(),
            HeraldCondition::ClickedAtLeastOnce,
        )
        .unwrap();
        assert!((h.probability - 1.0).abs() < 1e-15);
        assert_eq!(h.conditional.len(), 1);
        assert_eq!(
            h.conditional.components()[0].1,
            FockState::basis(4, &[1]).unwrap()
        );
    }

    #[test]
    fn sixty_percent_bucket_on_pair() {
        let s = FockState::basis(4, &[1, 1]).unwrap();
        let d = DetectorModel::bucket(0.6).unwrap();
        let h = herald(&s, 0, &d, HeraldCondition::ClickedAtLeastOnce).unwrap();
        assert!((h.probability - 0.6).abs() < 1e-15);
    }

    #[test]
    fn bucket_cannot_count() {
        let s = FockState::basis(4, &[1, 1]).unwrap();
        let d = DetectorModel::bucket(0.6).unwrap();
        assert_eq!(
            herald(&s, 0, &d, HeraldCondition::ExactlyOne),
            Err(FockError::UnsupportedCondition(HeraldCondition::ExactlyOne))
        );
    }

    #[test]
    fn herald_on_vacuum_trigger_is_zero_probability() {
        let s = FockState::vacuum(2, 4).unwrap();
        assert_eq!(
            herald(
                &s,
                0,
                &DetectorModel::ideal_bucket(),
                HeraldCondition::ClickedAtLeastOnce
            ),
            Err(FockError::ZeroProbabilityOutcome)
        );
        let one_mode = FockState::basis(4, &[1]).unwrap();
        assert_eq!(
            herald(
                &one_mode,
                0,
                &DetectorModel::ideal_bucket(),
                HeraldCondition::ClickedAtLeastOnce
            ),
            Err(FockError::NoRemainingModes)
        );
    }

    #[test]
    fn detector_model_bounds() {
        assert!(DetectorModel::bucket(1.1).is_err());
        let d = DetectorModel::number_resolving(0.5).unwrap();
        assert!((d.count_probability(2, 1) - 0.5).abs() < 1e-15);
        assert_eq!(d.count_probability(1, 2), 0.0);
        assert!((DetectorModel::bucket(0.6).unwrap().click_probability(2) - 0.84).abs() < 1e-15);
    }

    /// Oracle: enumerate every (pairs n, detected k) outcome of a PNRD on the
    /// trigger arm of the truncated two-mode squeezed vacuum.
    #[test]
    fn pnrd_exactly_one_matches_enumeration() {
        let (eps, eta, cutoff) = (0.3f64, 0.95, 4usize);
        let tmsv = apply_spdc(&FockState::vacuum(2, cutoff).unwrap(), 0, 1, eps).unwrap();
        let d = DetectorModel::number_resolving(eta).unwrap();
        let h = herald(&tmsv, 0, &d, HeraldCondition::ExactlyOne).unwrap();

        let x = eps.tanh().powi(2);
        let z: f64 = (0..=cutoff).map(|n| x.powi(n as i32)).sum();
        let mut p_herald = 0.0;
        let mut partner = vec![0.0; cutoff + 1];
        for (n, slot) in partner.iter_mut().enumerate() {
            let p_n = x.powi(n as i32) / z;
            for k in 0..=n {
                let binom = (0..k).fold(1.0, |a, j| a * (n - j) as f64 / (j + 1) as f64);
                let p_k = binom * eta.powi(k as i32) * (1.0 - eta).powi((n - k) as i32);
                if k == 1 {
                    p_herald += p_n * p_k;
                    *slot += p_n * p_k;
                }
            }
        }
        let m1: f64 = partner
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum::<f64>()
            / p_herald;
        let m2: f64 = partner
            .iter()
            .enumerate()
            .map(|(n, p)| (n * n.saturating_sub(1)) as f64 * p)
            .sum::<f64>()
            / p_herald;
        let g2_oracle = m2 / (m1 * m1);

        assert!((h.probability - p_herald).abs() < 1e-14);
        let g2 = g2_zero(&h.conditional, 0).unwrap();
        assert!((g2 - g2_oracle).abs() < 1e-12, "{g2} vs {g2_oracle}");
    }

    #[test]
    fn outcome_partition_sums_to_one() {
        let tmsv = apply_spdc(&FockState::vacuum(2, 4).unwrap(), 0, 1, 0.4).unwrap();
        let pnrd = DetectorModel::number_resolving(0.7).unwrap();
        let total: f64 = (0..=4)
            .map(|k| {
                herald(&tmsv, 0, &pnrd, HeraldCondition::Exactly(k))
                    .map(|h| h.probability)
                    .unwrap_or(0.0)
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-10);

        let bucket = DetectorModel::bucket(0.6).unwrap();
        let click = herald(&tmsv, 0, &bucket, HeraldCondition::ClickedAtLeastOnce).unwrap();
        let none = herald(&tmsv, 0, &bucket, HeraldCondition::NoClick).unwrap();
        assert!((click.probability + none.probability - 1.0).abs() < 1e-10);

        for d in [pnrd, bucket] {
            let dist = detection_distribution(&tmsv, 0, &d).unwrap();
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
}
