use std::fmt;

use super::AnalyticError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionKind {
    /// `P_n = N̄^n e^{-N̄} / n!`
    Poisson,
    /// Bose-Einstein, `P_n = N̄^n / (1 + N̄)^{n+1}`
    Thermal,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistributionKind::Poisson => "poisson",
            DistributionKind::Thermal => "thermal",
        })
    }
}

/// Pulse-wise number of photon pairs emitted by one source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairNumberDistribution {
    kind: DistributionKind,
    mean: f64,
}

impl PairNumberDistribution {
    pub fn new(kind: DistributionKind, mean: f64) -> Result<Self, AnalyticError> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(AnalyticError::InvalidMean(mean));
        }
        Ok(PairNumberDistribution { kind, mean })
    }

    pub fn poisson(mean: f64) -> Result<Self, AnalyticError> {
        Self::new(DistributionKind::Poisson, mean)
    }

    pub fn thermal(mean: f64) -> Result<Self, AnalyticError> {
        Self::new(DistributionKind::Thermal, mean)
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn prob_n(&self, n: u32) -> f64 {
        let mean = self.mean;
        if mean == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        match self.kind {
            DistributionKind::Poisson => {
                if n <= 100 {
                    (1..=n).fold((-mean).exp(), |p, k| p * mean / k as f64)
                } else {
                    let ln_factorial: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
                    (n as f64 * mean.ln() - mean - ln_factorial).exp()
                }
            }
            DistributionKind::Thermal => {
                let ratio = mean / (1.0 + mean);
                ratio.powi(n as i32) / (1.0 + mean)
            }
        }
    }

    /// `ln P₀`, computed without forming `P₀` so that `1 - P₀^m` keeps full
    /// precision at small means.
    pub(crate) fn ln_prob_zero(&self) -> f64 {
        match self.kind {
            DistributionKind::Poisson => -self.mean,
            DistributionKind::Thermal => -self.mean.ln_1p(),
        }
    }

    /// `1 - P₀`
    pub fn prob_nonzero(&self) -> f64 {
        -self.ln_prob_zero().exp_m1()
    }

    /// `P₍>1₎ = 1 - P₀ - P₁`
    pub fn prob_gt_one(&self) -> f64 {
        let mean = self.mean;
        match self.kind {
            DistributionKind::Thermal => (mean / (1.0 + mean)).powi(2),
            DistributionKind::Poisson if mean < 1.0 => {
                // direct tail sum; 1 - P0 - P1 cancels catastrophically here
                let mut term = self.prob_n(2);
                let mut sum = 0.0;
                let mut n = 2.0;
                while term > sum * 1e-18 && term > 0.0 {
                    sum += term;
                    n += 1.0;
                    term *= mean / n;
                }
                sum
            }
            DistributionKind::Poisson => self.prob_nonzero() - self.prob_n(1),
        }
    }

    /// Cumulative table `[P(n ≤ 0), P(n ≤ 1), …]`, extended until the
    /// remaining tail is below `tail`. The last entry is forced to 1.
    pub fn cumulative_table(&self, tail: f64) -> Vec<f64> {
        let mut table = Vec::new();
        let mut acc = 0.0;
        let mut n = 0;
        loop {
            acc += self.prob_n(n);
            table.push(acc);
            if 1.0 - acc <= tail || n >= 512 {
                break;
            }
            n += 1;
        }
        if let Some(last) = table.last_mut() {
            *last = 1.0;
        }
        table
    }
}
