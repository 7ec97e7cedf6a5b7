//! Seeded pulse-level Monte Carlo of a multiplexed array, the HOM scan
//! through the router, and the exact heralding-scheme comparison.

mod config;
mod engine;
mod hom;
mod pulse;
mod schemes;
mod tally;

use thiserror::Error;

use crate::analytic::AnalyticError;
use crate::fock::FockError;

pub use config::SimulationConfig;
pub use engine::{simulate_pulses, simulate_pulses_with_threads, CHUNK_PULSES};
pub use hom::{
    fit_dip, fit_slope, hom_scan, indistinguishability_for_visibility, two_photon_outcome, DipFit,
    HomScanConfig, HomScanPoint, SlopeFit, TwoPhotonOutcome,
};
pub use pulse::{PulseOutcome, PulseSimulator};
pub use schemes::{
    compare_heralding_schemes, default_epsilon_grid, evaluate_scheme, match_output_probability,
    HeraldingScheme, MatchedPoint, SchemePoint, SCHEME_COUPLING,
};
pub use tally::{
    estimate_g2, heralding_output_probability, heralding_output_std_error, CoincidenceTally,
    G2Estimate,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonteCarloError {
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("at least one pulse is required")]
    ZeroPulses,
    #[error("pulse simulation supports bucket trigger detectors only")]
    UnsupportedTrigger,
    #[error("expected {expected} signal couplings, got {got}")]
    CouplingCount { expected: usize, got: usize },
    #[error("a coincidence arm recorded no counts")]
    EmptyArm,
    #[error("coherence time must be positive and finite, got {0}")]
    InvalidCoherenceTime(f64),
    #[error("{0} grid is empty")]
    EmptyGrid(&'static str),
    #[error("squeezing {epsilon} outside (0, {max}]")]
    EpsilonOutOfRange { epsilon: f64, max: f64 },
    #[error("fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("fit is degenerate")]
    DegenerateFit,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
