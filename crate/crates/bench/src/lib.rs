//! Shared fixtures for the benchmarks.

use muxsim_core::analytic::{ArrayConfig, PairNumberDistribution};
use muxsim_core::fock::{apply_spdc, FockState, DEFAULT_CUTOFF};
use muxsim_core::{DetectorModel, SimulationConfig};

/// Array with the counting-experiment parameters: bucket triggers at 60%,
/// 10% trigger coupling, 50% output coupling.
pub fn counting_config(sources: u32, mean: f64) -> SimulationConfig {
    let array = ArrayConfig::new(sources, PairNumberDistribution::poisson(mean).unwrap())
        .with_trigger(DetectorModel::bucket(0.6).unwrap(), 0.1)
        .with_output_coupling(0.5);
    SimulationConfig::new(array)
}

/// Two-mode squeezed vacuum at the default cutoff.
pub fn squeezed_vacuum(epsilon: f64) -> FockState {
    apply_spdc(
        &FockState::vacuum(2, DEFAULT_CUTOFF).unwrap(),
        0,
        1,
        epsilon,
    )
    .unwrap()
}
