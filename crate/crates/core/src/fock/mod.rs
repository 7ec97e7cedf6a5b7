//! Truncated Fock-space engine.
//!
//! Every mode carries `0..=cutoff` excitations (default 4). States are
//! immutable values and every operation returns a new state. Loss and
//! heralding produce [`MixedStateEnsemble`]s, exact unravellings of the
//! corresponding channels into pure components.
//!
//! Truncation biases `g²` once the discarded pair-number tail
//! `tanh²ε^(cutoff+1)` stops being negligible; see [`max_valid_epsilon`].

mod correlation;
mod detector;
mod ops;
mod state;

use thiserror::Error;

pub use correlation::{g2_from_distribution, g2_zero, hbt_click_probabilities, HbtClicks};
pub use detector::{
    detection_distribution, herald, DetectorKind, DetectorModel, HeraldCondition, HeraldOutcome,
};
pub use ops::{
    apply_beamsplitter, apply_loss, apply_phase_shift, apply_spdc, epsilon_from_mean_pairs,
    mean_pairs_from_epsilon,
};
pub use state::{FockState, MixedStateEnsemble, QuantumState, DEFAULT_CUTOFF, NORM_TOLERANCE};

/// Largest pair-number tail `tanh²ε^(cutoff+1)` the truncation is trusted with.
pub const MAX_TRUNCATED_TAIL: f64 = 5e-4;

/// Largest squeezing strength for which the discarded thermal tail stays
/// below [`MAX_TRUNCATED_TAIL`]. About 0.507 at cutoff 4.
pub fn max_valid_epsilon(cutoff: usize) -> f64 {
    MAX_TRUNCATED_TAIL
        .powf(1.0 / (2.0 * (cutoff as f64 + 1.0)))
        .atanh()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("a state needs at least one mode")]
    NoModes,
    #[error("cutoff must be at least 1")]
    InvalidCutoff,
    #[error("{num_modes} modes at cutoff {cutoff} exceed the supported basis size")]
    DimensionTooLarge { num_modes: usize, cutoff: usize },
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("mode {mode} out of range for a {num_modes}-mode state")]
    ModeOutOfRange { mode: usize, num_modes: usize },
    #[error("occupation {occupation} of mode {mode} exceeds cutoff {cutoff}")]
    OccupationAboveCutoff {
        mode: usize,
        occupation: usize,
        cutoff: usize,
    },
    #[error("two distinct modes required, got mode {0} twice")]
    IdenticalModes(usize),
    #[error("state is not normalized (norm² = {0})")]
    Unnormalized(f64),
    #[error("{name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("squeezing strength must be finite and non-negative, got {0}")]
    InvalidSqueezing(f64),
    #[error("beam splitter output leaves the truncated space (lost probability {0:e})")]
    TruncationOverflow(f64),
    #[error("g2 is undefined: mode {0} has zero mean photon number")]
    VacuumMode(usize),
    #[error("a bucket detector cannot resolve the condition '{0}'")]
    UnsupportedCondition(HeraldCondition),
    #[error("the requested outcome has zero probability")]
    ZeroProbabilityOutcome,
    #[error("conditioning a single-mode state leaves no modes")]
    NoRemainingModes,
    #[error("ensemble has no components")]
    EmptyEnsemble,
    #[error("ensemble components differ in mode count or cutoff")]
    EnsembleShapeMismatch,
    #[error("ensemble weights sum to {0}")]
    EnsembleNotNormalized(f64),
}
