use super::MonteCarloError;
use crate::analytic::{check_unit, ArrayConfig};
use crate::fock::DetectorKind;

/// Pulse-level simulation parameters. Dark counts and dead time default off.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub array: ArrayConfig,
    /// Per-source transmission of the signal arm up to the first router.
    /// `None` means every source couples with 1.
    pub signal_couplings: Option<Vec<f64>>,
    /// Probability of a spurious click per detector and pulse.
    pub dark_count_probability: f64,
    /// Pulses during which a detector stays blind after a click.
    pub dead_time_pulses: u32,
}

impl SimulationConfig {
    pub fn new(array: ArrayConfig) -> Self {
        SimulationConfig {
            array,
            signal_couplings: None,
            dark_count_probability: 0.0,
            dead_time_pulses: 0,
        }
    }

    pub fn with_signal_couplings(mut self, couplings: Vec<f64>) -> Self {
        self.signal_couplings = Some(couplings);
        self
    }

    pub fn with_dark_counts(mut self, probability: f64) -> Self {
        self.dark_count_probability = probability;
        self
    }

    pub fn with_dead_time(mut self, pulses: u32) -> Self {
        self.dead_time_pulses = pulses;
        self
    }

    pub fn validate(&self) -> Result<(), MonteCarloError> {
        self.array.validate()?;
        self.array.signal_router_path()?;
        if self.array.trigger_detector.kind() != DetectorKind::Bucket {
            return Err(MonteCarloError::UnsupportedTrigger);
        }
        check_unit("dark count probability", self.dark_count_probability)?;
        if let Some(c) = &self.signal_couplings {
            if c.len() != self.array.sources as usize {
                return Err(MonteCarloError::CouplingCount {
                    expected: self.array.sources as usize,
                    got: c.len(),
                });
            }
            for &v in c {
                check_unit("signal coupling", v)?;
            }
        }
        Ok(())
    }

    pub(crate) fn signal_coupling(&self, source: usize) -> f64 {
        self.signal_couplings.as_ref().map_or(1.0, |c| c[source])
    }

    /// Probability that one signal photon of the winning source reaches the
    /// analysis beam splitter: coupling, then per path router `T₀` and the
    /// intended port `(1 + V) / 2`, then `T_pol` and the output coupling.
    pub fn signal_survival(&self, source: usize) -> Result<f64, MonteCarloError> {
        let a = &self.array;
        let path = a.signal_router_path()?;
        let per_router = a.path_router_transmission
            * crate::analytic::intended_port_probability(a.routing_visibility);
        Ok(self.signal_coupling(source)
            * per_router.powi(path.path_routers as i32)
            * a.polarization_router_transmission
                .powi(path.polarization_routers as i32)
            * a.output_coupling)
    }

    /// Probability that one pair's trigger photon is detected.
    pub fn trigger_detection_probability(&self) -> f64 {
        self.array.trigger_coupling * self.array.trigger_detector.efficiency()
    }
}
