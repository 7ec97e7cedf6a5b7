use super::AnalyticError;

/// Timing budget of one router plus trigger electronics, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateBudget {
    pub rise_time: f64,
    pub fall_time: f64,
    pub recharge_time: f64,
    pub cable_delay: f64,
    pub trigger_dead_time: f64,
}

impl RateBudget {
    pub fn validate(&self) -> Result<(), AnalyticError> {
        for (name, value) in [
            ("rise time", self.rise_time),
            ("fall time", self.fall_time),
            ("recharge time", self.recharge_time),
            ("cable delay", self.cable_delay),
            ("trigger dead time", self.trigger_dead_time),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(AnalyticError::InvalidDuration { name, value });
            }
        }
        Ok(())
    }

    fn router_cycle(&self) -> f64 {
        self.rise_time + self.fall_time + self.recharge_time + self.cable_delay
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateLimit {
    Router,
    Detector,
}

/// Rates in Hz. A zero duration on one side yields `f64::INFINITY` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateLimits {
    pub router: f64,
    pub detector: f64,
    pub binding: RateLimit,
}

impl RateLimits {
    pub fn max_rate(&self) -> f64 {
        self.router.min(self.detector)
    }
}

/// Router-limited rate `1 / (rise + fall + recharge + cable)` and the trigger
/// rate `n / dead_time` of `n` interleaved detectors per source.
pub fn max_repetition_rate(
    budget: &RateBudget,
    trigger_detectors_per_source: u32,
) -> Result<RateLimits, AnalyticError> {
    budget.validate()?;
    if trigger_detectors_per_source == 0 {
        return Err(AnalyticError::NoDetectors);
    }
    let cycle = budget.router_cycle();
    if cycle == 0.0 && budget.trigger_dead_time == 0.0 {
        return Err(AnalyticError::UnboundedRate);
    }
    let router = 1.0 / cycle;
    let detector = trigger_detectors_per_source as f64 / budget.trigger_dead_time;
    let binding = if detector < router {
        RateLimit::Detector
    } else {
        RateLimit::Router
    };
    Ok(RateLimits {
        router,
        detector,
        binding,
    })
}

/// Extra fiber length bridged by an `m`-fold rate increase, `ln(m) L₀`, in
/// the unit of `decay_length`.
pub fn distance_extension(m: u32, decay_length: f64) -> Result<f64, AnalyticError> {
    if m == 0 {
        return Err(AnalyticError::InvalidSourceCount(0));
    }
    if !(decay_length > 0.0 && decay_length.is_finite()) {
        return Err(AnalyticError::InvalidLength(decay_length));
    }
    Ok((m as f64).ln() * decay_length)
}

/// `V = (I^π - I⁰) / (I^π + I⁰)`
pub fn routing_visibility(intensity_pi: f64, intensity_zero: f64) -> Result<f64, AnalyticError> {
    let ok = |x: f64| x >= 0.0 && x.is_finite();
    if !ok(intensity_pi) || !ok(intensity_zero) {
        return Err(AnalyticError::InvalidIntensity(
            intensity_pi,
            intensity_zero,
        ));
    }
    let total = intensity_pi + intensity_zero;
    if total == 0.0 {
        return Err(AnalyticError::ZeroIntensity);
    }
    Ok((intensity_pi - intensity_zero) / total)
}

/// Probability that a router with visibility `V` sends light to the
/// intended port, `(1 + V) / 2`.
pub fn intended_port_probability(visibility: f64) -> f64 {
    (1.0 + visibility) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NS: f64 = 1e-9;

    #[test]
    fn router_rate_near_fifteen_megahertz() {
        let b = RateBudget {
            rise_time: 5.6 * NS,
            fall_time: 5.6 * NS,
            recharge_time: 50.0 * NS,
            cable_delay: 5.5 * NS,
            trigger_dead_time: 0.0,
        };
        let r = max_repetition_rate(&b, 1).unwrap();
        assert!((r.router - 1.0 / (66.7 * NS)).abs() < 1.0);
        assert!((r.router / 1e6 - 14.99).abs() < 0.01);
        assert_eq!(r.binding, RateLimit::Router);
    }

    #[test]
    fn detector_limited() {
        let b = RateBudget {
            trigger_dead_time: 150.0 * NS,
            ..Default::default()
        };
        let r = max_repetition_rate(&b, 1).unwrap();
        assert_eq!(r.binding, RateLimit::Detector);
        assert!((r.max_rate() / 1e6 - 6.6667).abs() < 1e-3);
        let two = max_repetition_rate(&b, 2).unwrap();
        assert!((two.detector - 2.0 * r.detector).abs() < 1e-6);
    }

    #[test]
    fn fast_switch_bound() {
        let b = RateBudget {
            rise_time: 50e-12,
            fall_time: 50e-12,
            ..Default::default()
        };
        let r = max_repetition_rate(&b, 1).unwrap();
        assert!((r.router - 1e10).abs() < 1.0);
    }

    #[test]
    fn rate_errors() {
        assert_eq!(
            max_repetition_rate(&RateBudget::default(), 1),
            Err(AnalyticError::UnboundedRate)
        );
        let b = RateBudget {
            rise_time: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            max_repetition_rate(&b, 1),
            Err(AnalyticError::InvalidDuration { .. })
        ));
        let b = RateBudget {
            rise_time: NS,
            ..Default::default()
        };
        assert_eq!(max_repetition_rate(&b, 0), Err(AnalyticError::NoDetectors));
    }

    #[test]
    fn distance_values() {
        assert_eq!(distance_extension(1, 21.7).unwrap(), 0.0);
        assert!((distance_extension(4, 21.7).unwrap() - 30.082588).abs() < 1e-6);
        assert!((distance_extension(8, 10.0).unwrap() - 8f64.ln() * 10.0).abs() < 1e-12);
        assert!(distance_extension(0, 1.0).is_err());
        assert!(distance_extension(2, 0.0).is_err());
    }

    #[test]
    fn visibility_values() {
        assert_eq!(routing_visibility(1.0, 0.0).unwrap(), 1.0);
        assert!((routing_visibility(0.975, 0.025).unwrap() - 0.95).abs() < 1e-12);
        assert_eq!(routing_visibility(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(
            routing_visibility(0.0, 0.0),
            Err(AnalyticError::ZeroIntensity)
        );
        assert!(routing_visibility(-1.0, 1.0).is_err());
        assert_eq!(intended_port_probability(0.95), 0.975);
    }

    proptest! {
        #[test]
        fn distance_is_additive(a in 1u32..1000, b in 1u32..1000, l in 0.1f64..100.0) {
            let lhs = distance_extension(a * b, l).unwrap();
            let rhs = distance_extension(a, l).unwrap() + distance_extension(b, l).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
        }

        #[test]
        fn visibility_bounded(pi in 0.0f64..10.0, zero in 0.0f64..10.0) {
            prop_assume!(pi + zero > 0.0);
            let v = routing_visibility(pi, zero).unwrap();
            prop_assert!((-1.0..=1.0).contains(&v));
            prop_assert!((intended_port_probability(v) - pi / (pi + zero)).abs() < 1e-12);
        }
    }
}
