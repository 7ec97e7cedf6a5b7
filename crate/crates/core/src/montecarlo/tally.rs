use std::ops::{Add, AddAssign};

use super::{MonteCarloError, PulseOutcome};

/// Trigger and trigger-coincidence counters of the two-detector analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct CoincidenceTally {
    pub pulses: u64,
    /// `N_t`
    pub triggers: u64,
    /// `N_tT`
    pub trigger_t: u64,
    /// `N_tR`
    pub trigger_r: u64,
    /// `N_tTR`
    pub trigger_tr: u64,
}

impl CoincidenceTally {
    pub fn record(&mut self, outcome: &PulseOutcome) {
        self.pulses += 1;
        if outcome.trigger_fired {
            self.triggers += 1;
            self.trigger_t += outcome.click_t as u64;
            self.trigger_r += outcome.click_r as u64;
            self.trigger_tr += (outcome.click_t && outcome.click_r) as u64;
        }
        debug_assert!(self.is_consistent());
    }

    /// `N_tTR ≤ min(N_tT, N_tR)`, `max(N_tT, N_tR) ≤ N_t ≤ pulses`.
    pub fn is_consistent(&self) -> bool {
        self.trigger_tr <= self.trigger_t.min(self.trigger_r)
            && self.trigger_t.max(self.trigger_r) <= self.triggers
            && self.triggers <= self.pulses
    }

    /// Trigger events followed by at least one output click.
    pub fn heralded_outputs(&self) -> u64 {
        self.trigger_t + self.trigger_r - self.trigger_tr
    }
}

impl AddAssign for CoincidenceTally {
    fn add_assign(&mut self, rhs: Self) {
        self.pulses += rhs.pulses;
        self.triggers += rhs.triggers;
        self.trigger_t += rhs.trigger_t;
        self.trigger_r += rhs.trigger_r;
        self.trigger_tr += rhs.trigger_tr;
    }
}

impl Add for CoincidenceTally {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G2Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// `g²(0) = N_tTR N_t / (N_tT N_tR)` with a binomial-propagation error.
///
/// Each of `N_tT`, `N_tR`, `N_tTR` is treated as binomial over the `N_t`
/// trigger events and their covariances are dropped, which overstates the
/// error. With no triple coincidence the third term uses one count so the
/// error stays finite.
pub fn estimate_g2(tally: &CoincidenceTally) -> Result<G2Estimate, MonteCarloError> {
    if tally.trigger_t == 0 || tally.trigger_r == 0 {
        return Err(MonteCarloError::EmptyArm);
    }
    let nt = tally.triggers as f64;
    let (a, b, c) = (
        tally.trigger_t as f64,
        tally.trigger_r as f64,
        tally.trigger_tr as f64,
    );
    let value = c * nt / (a * b);
    let scale = nt / (a * b);
    let var = value * value * ((1.0 - a / nt) / a + (1.0 - b / nt) / b)
        + scale * scale * c.max(1.0) * (1.0 - c / nt);
    Ok(G2Estimate {
        value,
        std_error: var.sqrt(),
    })
}

/// Fraction of pulses with a trigger click and at least one output click.
pub fn heralding_output_probability(tally: &CoincidenceTally) -> f64 {
    if tally.pulses == 0 {
        return 0.0;
    }
    tally.heralded_outputs() as f64 / tally.pulses as f64
}

/// Binomial standard error of [`heralding_output_probability`].
pub fn heralding_output_std_error(tally: &CoincidenceTally) -> f64 {
    if tally.pulses == 0 {
        return 0.0;
    }
    let n = tally.pulses as f64;
    let p = heralding_output_probability(tally);
    (p * (1.0 - p) / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tally(nt: u64, t: u64, r: u64, tr: u64) -> CoincidenceTally {
        CoincidenceTally {
            pulses: 10 * nt,
            triggers: nt,
            trigger_t: t,
            trigger_r: r,
            trigger_tr: tr,
        }
    }

    #[test]
    fn no_coincidences_is_zero() {
        let e = estimate_g2(&tally(1000, 300, 280, 0)).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.std_error > 0.0);
    }

    #[test]
    fn scale_invariance() {
        let a = tally(1000, 300, 280, 40);
        let b = a + a;
        assert_eq!(
            estimate_g2(&a).unwrap().value,
            estimate_g2(&b).unwrap().value
        );
        assert!(estimate_g2(&b).unwrap().std_error < estimate_g2(&a).unwrap().std_error);
    }

    #[test]
    fn empty_arm() {
        assert_eq!(
            estimate_g2(&tally(10, 0, 3, 0)),
            Err(MonteCarloError::EmptyArm)
        );
    }

    #[test]
    fn output_probability() {
        assert_eq!(
            heralding_output_probability(&CoincidenceTally::default()),
            0.0
        );
        let t = tally(100, 30, 20, 5);
        assert_eq!(heralding_output_probability(&t), 45.0 / 1000.0);
        assert!(t.is_consistent());
    }

    #[test]
    fn record_counts_only_triggered_clicks() {
        let mut t = CoincidenceTally::default();
        let mut o = PulseOutcome {
            click_t: true,
            click_r: true,
            ..Default::default()
        };
        t.record(&o);
        o.trigger_fired = true;
        t.record(&o);
        assert_eq!(
            t,
            CoincidenceTally {
                pulses: 2,
                triggers: 1,
                trigger_t: 1,
                trigger_r: 1,
                trigger_tr: 1
            }
        );
    }
}
