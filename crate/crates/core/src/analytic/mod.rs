//! Closed-form statistics of single and multiplexed pair sources.

mod array;
mod budget;
mod distribution;

pub(crate) use array::check_unit;
pub use array::{
    break_even_path_transmission, gain, gain_limit, q_gt_one, q_one, total_gain,
    total_gain_small_mean, ArrayConfig, RouterPath, RouterScheme,
};
pub use budget::{
    distance_extension, intended_port_probability, max_repetition_rate, routing_visibility,
    RateBudget, RateLimit, RateLimits,
};
pub use distribution::{DistributionKind, PairNumberDistribution};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("mean pair number must be finite and nonnegative, got {0}")]
    InvalidMean(f64),
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfUnitInterval { name: &'static str, value: f64 },
    #[error("number of sources must be at least 1, got {0}")]
    InvalidSourceCount(u32),
    #[error("router tree needs a power-of-two number of sources, got {0}")]
    NotPowerOfTwo(u32),
    #[error("hybrid scheme needs at least two sources")]
    HybridNeedsPairs,
    #[error("unknown router scheme `{0}`")]
    UnknownScheme(String),
    #[error("{name} must be finite and nonnegative, got {value}")]
    InvalidDuration { name: &'static str, value: f64 },
    #[error("all durations are zero; the repetition rate is unbounded")]
    UnboundedRate,
    #[error("need at least one trigger detector per source")]
    NoDetectors,
    #[error("intensities must be finite and nonnegative, got {0} and {1}")]
    InvalidIntensity(f64, f64),
    #[error("both intensities are zero")]
    ZeroIntensity,
    #[error("decay length must be finite and positive, got {0}")]
    InvalidLength(f64),
}
