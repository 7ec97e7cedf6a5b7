use rand::Rng;

use super::{MonteCarloError, SimulationConfig};

/// What happened in one pump pulse.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PulseOutcome {
    pub pairs_per_source: Vec<u32>,
    /// Lowest-index source whose trigger fired.
    pub winning_source: Option<usize>,
    /// Signal photons that reached the analysis beam splitter.
    pub photons_at_output: u32,
    pub trigger_fired: bool,
    pub click_t: bool,
    pub click_r: bool,
}

/// Inverse-CDF sampler over a cumulative pair-number table.
#[derive(Debug, Clone)]
struct PairSampler {
    cumulative: Vec<f64>,
}

impl PairSampler {
    fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1) as u32
    }
}

fn thin<R: Rng>(n: u32, p: f64, rng: &mut R) -> u32 {
    (0..n).filter(|_| rng.random::<f64>() < p).count() as u32
}

/// Steps an array through pulses. Holds the detector dead-time state, so one
/// simulator must see its pulses in order.
#[derive(Debug, Clone)]
pub struct PulseSimulator {
    sampler: PairSampler,
    trigger_p: f64,
    survival: Vec<f64>,
    dark: f64,
    dead_time: u32,
    // remaining blind pulses: one per trigger, then T and R
    blind: Vec<u32>,
    outcome: PulseOutcome,
}

impl PulseSimulator {
    pub fn new(config: &SimulationConfig) -> Result<Self, MonteCarloError> {
        config.validate()?;
        let m = config.array.sources as usize;
        let survival = (0..m)
            .map(|i| config.signal_survival(i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PulseSimulator {
            sampler: PairSampler {
                cumulative: config.array.distribution.cumulative_table(1e-17),
            },
            trigger_p: config.trigger_detection_probability(),
            survival,
            dark: config.dark_count_probability,
            dead_time: config.dead_time_pulses,
            blind: vec![0; m + 2],
            outcome: PulseOutcome {
                pairs_per_source: vec![0; m],
                ..Default::default()
            },
        })
    }

    fn click<R: Rng>(&mut self, detector: usize, photons: u32, rng: &mut R) -> bool {
        let dark = self.dark > 0.0 && rng.random::<f64>() < self.dark;
        if self.blind[detector] > 0 {
            self.blind[detector] -= 1;
            return false;
        }
        let fired = photons > 0 || dark;
        if fired {
            self.blind[detector] = self.dead_time;
        }
        fired
    }

    pub fn step<R: Rng>(&mut self, rng: &mut R) -> &PulseOutcome {
        let m = self.survival.len();
        let mut winner = None;
        for i in 0..m {
            let n = self.sampler.sample(rng);
            self.outcome.pairs_per_source[i] = n;
            let detected = thin(n, self.trigger_p, rng);
            if self.click(i, detected, rng) && winner.is_none() {
                winner = Some(i);
            }
        }
        let (mut t, mut r) = (0, 0);
        if let Some(w) = winner {
            let p = self.survival[w];
            for _ in 0..self.outcome.pairs_per_source[w] {
                let u: f64 = rng.random();
                if u < 0.5 * p {
                    t += 1;
                } else if u < p {
                    r += 1;
                }
            }
        }
        // the routers block every output while no trigger fired
        let click_t = self.click(m, t, rng);
        let click_r = self.click(m + 1, r, rng);
        let o = &mut self.outcome;
        o.winning_source = winner;
        o.trigger_fired = winner.is_some();
        o.photons_at_output = t + r;
        o.click_t = click_t;
        o.click_r = click_r;
        &self.outcome
    }
}
