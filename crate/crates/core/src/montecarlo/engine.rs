use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CoincidenceTally, MonteCarloError, PulseSimulator, SimulationConfig};

/// Pulses per independent work unit. Each unit draws from its own stream of
/// the seeded generator, so tallies do not depend on how units are scheduled.
/// Detector dead time restarts at every unit boundary.
pub const CHUNK_PULSES: u64 = 1 << 16;

/// Runs `num_pulses` pulses on the global thread pool.
pub fn simulate_pulses(
    config: &SimulationConfig,
    num_pulses: u64,
    seed: u64,
) -> Result<CoincidenceTally, MonteCarloError> {
    simulate_pulses_with_threads(config, num_pulses, seed, None)
}

/// As [`simulate_pulses`], on a dedicated pool of `threads` workers when
/// given. The result is identical for every thread count.
pub fn simulate_pulses_with_threads(
    config: &SimulationConfig,
    num_pulses: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<CoincidenceTally, MonteCarloError> {
    if num_pulses == 0 {
        return Err(MonteCarloError::ZeroPulses);
    }
    let template = PulseSimulator::new(config)?;
    let chunks = num_pulses.div_ceil(CHUNK_PULSES);
    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let len = CHUNK_PULSES.min(num_pulses - chunk * CHUNK_PULSES);
                run_chunk(template.clone(), seed, chunk, len)
            })
            .reduce(CoincidenceTally::default, |a, b| a + b)
    };
    match threads {
        None => Ok(run()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| MonteCarloError::ThreadPool(e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}

fn run_chunk(mut sim: PulseSimulator, seed: u64, chunk: u64, len: u64) -> CoincidenceTally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut tally = CoincidenceTally::default();
    for _ in 0..len {
        tally.record(sim.step(&mut rng));
    }
    tally
}
