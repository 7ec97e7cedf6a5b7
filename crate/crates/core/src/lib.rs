//! Simulation and analysis of actively multiplexed heralded single-photon
//! sources.
//!
//! * [`fock`]: truncated Fock-space states, squeezing, beam splitters, loss,
//!   heralding and `g²(0)`.
//! * [`analytic`]: closed-form array statistics, router loss algebra, rate
//!   and distance budgets.
//! * [`montecarlo`]: seeded pulse simulation, coincidence tallies, the HOM
//!   scan and the exact heralding-scheme comparison.

pub mod analytic;
pub mod fock;
pub mod montecarlo;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use analytic::{AnalyticError, ArrayConfig, PairNumberDistribution, RouterScheme};
pub use fock::{DetectorModel, FockError, FockState, HeraldCondition, MixedStateEnsemble};
pub use montecarlo::{CoincidenceTally, MonteCarloError, SimulationConfig};
pub use num_complex::Complex64;
