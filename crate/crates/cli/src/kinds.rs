//! Parameter schemas and per-point computations of every scenario kind.

use muxsim_core::analytic::{
    distance_extension, gain, gain_limit, intended_port_probability, max_repetition_rate,
    routing_visibility, total_gain, total_gain_small_mean, ArrayConfig, DistributionKind,
    PairNumberDistribution, RateBudget, RateLimit, RouterScheme,
};
use muxsim_core::fock::{max_valid_epsilon, DetectorModel};
use muxsim_core::montecarlo::{
    estimate_g2, evaluate_scheme, heralding_output_probability, heralding_output_std_error,
    hom_scan, simulate_pulses_with_threads, HeraldingScheme, HomScanConfig, HomScanPoint,
    SimulationConfig,
};

use crate::format::Cell;
use crate::scenario::Kind;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
    List(Vec<f64>),
}

impl Value {
    pub fn cell(&self) -> Cell {
        match self {
            Value::Int(v) => Cell::Int(*v),
            Value::Real(v) => Cell::Real(*v),
            Value::Text(s) => Cell::Text(s.clone()),
            Value::List(v) => Cell::Text(
                v.iter()
                    .map(|x| crate::format::format_real(*x))
                    .collect::<Vec<_>>()
                    .join(";"),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KeyType {
    Int,
    Real,
    Choice(&'static [&'static str]),
    /// Comma-separated reals; empty means unset. Not sweepable.
    RealList,
}

impl KeyType {
    pub fn describe(&self) -> String {
        match self {
            KeyType::Int => "an integer".into(),
            KeyType::Real => "a finite number".into(),
            KeyType::Choice(opts) => format!("one of {}", opts.join(", ")),
            KeyType::RealList => "a comma-separated list of numbers".into(),
        }
    }

    pub fn parse(&self, raw: &str) -> Option<Value> {
        match self {
            KeyType::Int => raw.parse().ok().map(Value::Int),
            KeyType::Real => raw
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Value::Real),
            KeyType::Choice(opts) => opts.contains(&raw).then(|| Value::Text(raw.to_string())),
            KeyType::RealList => raw
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<Vec<_>>>()
                .map(Value::List),
        }
    }

    /// Typed value of a range point, `None` if the type has no numeric form.
    pub fn from_number(&self, v: f64) -> Option<Value> {
        match self {
            KeyType::Int if v.fract() == 0.0 => Some(Value::Int(v as i64)),
            KeyType::Real => Some(Value::Real(v)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub ty: KeyType,
    pub default: &'static str,
}

const fn key(key: &'static str, ty: KeyType, default: &'static str) -> KeySpec {
    KeySpec { key, ty, default }
}

const DIST_KINDS: &[&str] = &["poisson", "thermal"];
const SCHEMES: &[&str] = &["hybrid", "pure_path"];
const HERALDING: &[&str] = &["bucket60_1spdc", "pnrd95_1spdc", "bucket60_4spdc_t95"];

const GAIN_KEYS: &[KeySpec] = &[
    key("dist.kind", KeyType::Choice(DIST_KINDS), "poisson"),
    key("dist.mean", KeyType::Real, "0.1"),
    key("array.m", KeyType::Int, "1"),
    key("array.scheme", KeyType::Choice(SCHEMES), "hybrid"),
    key("router.path_transmission", KeyType::Real, "1"),
    key("router.polarization_transmission", KeyType::Real, "1"),
    key("qkd.decay_length_km", KeyType::Real, "21.7"),
];

const RATE_KEYS: &[KeySpec] = &[
    key("budget.rise_ns", KeyType::Real, "5.6"),
    key("budget.fall_ns", KeyType::Real, "5.6"),
    key("budget.recharge_ns", KeyType::Real, "50"),
    key("budget.cable_ns", KeyType::Real, "5.5"),
    key("budget.dead_time_ns", KeyType::Real, "150"),
    key("budget.detectors_per_source", KeyType::Int, "1"),
    key("router.intensity_pi", KeyType::Real, "0.975"),
    key("router.intensity_zero", KeyType::Real, "0.025"),
];

const HERALDING_KEYS: &[KeySpec] = &[
    key(
        "heralding.scheme",
        KeyType::Choice(HERALDING),
        "bucket60_1spdc",
    ),
    key("spdc.epsilon", KeyType::Real, "0.1"),
    key("heralding.coupling", KeyType::Real, "0.7"),
    key("heralding.path_transmission", KeyType::Real, "0.95"),
];

const COINCIDENCE_KEYS: &[KeySpec] = &[
    key("dist.kind", KeyType::Choice(DIST_KINDS), "poisson"),
    key("dist.mean", KeyType::Real, "0.062"),
    key("array.m", KeyType::Int, "1"),
    key("array.scheme", KeyType::Choice(SCHEMES), "hybrid"),
    key("router.path_transmission", KeyType::Real, "1"),
    key("router.polarization_transmission", KeyType::Real, "1"),
    key("router.visibility", KeyType::Real, "1"),
    key("trigger.efficiency", KeyType::Real, "0.6"),
    key("trigger.coupling", KeyType::Real, "0.1"),
    key("output.coupling", KeyType::Real, "0.5"),
    key("detector.dark_count", KeyType::Real, "0"),
    key("detector.dead_time_pulses", KeyType::Int, "0"),
    key("source.couplings", KeyType::RealList, ""),
];

const HOM_KEYS: &[KeySpec] = &[
    key("hom.phase", KeyType::Real, "1.5707963267948966"),
    key("hom.delay_um", KeyType::Real, "0"),
    key("hom.coherence_length_um", KeyType::Real, "300"),
    key("hom.chi0", KeyType::Real, "1"),
    key("router.visibility", KeyType::Real, "1"),
];

pub fn schema(kind: Kind) -> &'static [KeySpec] {
    match kind {
        Kind::Gain => GAIN_KEYS,
        Kind::Rates => RATE_KEYS,
        Kind::Heralding => HERALDING_KEYS,
        Kind::Coincidence => COINCIDENCE_KEYS,
        Kind::Hom => HOM_KEYS,
    }
}

pub fn result_columns(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Gain => &[
            "gain",
            "gain_limit",
            "total_gain",
            "total_gain_small_mean",
            "distance_extension_km",
        ],
        Kind::Rates => &[
            "router_rate_mhz",
            "detector_rate_mhz",
            "max_rate_mhz",
            "binding",
            "routing_visibility",
            "intended_port_probability",
        ],
        Kind::Heralding => &["mean_pairs", "herald_probability", "p_output", "g2"],
        Kind::Coincidence => &[
            "seed",
            "pulses",
            "triggers",
            "trigger_t",
            "trigger_r",
            "trigger_tr",
            "output_counts",
            "heralding_output_probability",
            "heralding_output_std_error",
            "g2",
            "g2_std_error",
        ],
        Kind::Hom => &[
            "seed",
            "pulses",
            "coincidences",
            "singles_b",
            "singles_c",
            "coincidence_probability",
        ],
    }
}

/// Pulses per point when neither the file nor the command line sets them.
pub fn default_pulses(kind: Kind) -> Option<u64> {
    match kind {
        Kind::Coincidence => Some(2_000_000),
        Kind::Hom => Some(1_000_000),
        _ => None,
    }
}

/// Fully typed parameters of one grid point, in schema order.
#[derive(Debug, Clone, PartialEq)]
pub struct Params(pub Vec<(&'static str, Value)>);

impl Params {
    fn get(&self, key: &str) -> &Value {
        &self
            .0
            .iter()
            .find(|(k, _)| *k == key)
            .unwrap_or_else(|| panic!("schema lacks `{key}`"))
            .1
    }

    fn real(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Real(v) => *v,
            other => panic!("`{key}` is not real: {other:?}"),
        }
    }

    fn int(&self, key: &str) -> i64 {
        match self.get(key) {
            Value::Int(v) => *v,
            other => panic!("`{key}` is not an integer: {other:?}"),
        }
    }

    fn text(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Text(v) => v,
            other => panic!("`{key}` is not text: {other:?}"),
        }
    }

    fn list(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::List(v) => v,
            other => panic!("`{key}` is not a list: {other:?}"),
        }
    }
}

/// Run-wide settings shared by every point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub pulses: Option<u64>,
    pub cutoff: usize,
}

/// A validated point, ready to compute.
#[derive(Debug, Clone)]
pub enum Plan {
    Gain {
        array: ArrayConfig,
        decay_length_km: f64,
    },
    Rates {
        budget: RateBudget,
        detectors: u32,
        intensity_pi: f64,
        intensity_zero: f64,
    },
    Heralding {
        scheme: HeraldingScheme,
        epsilon: f64,
        cutoff: usize,
    },
    Coincidence {
        config: SimulationConfig,
        pulses: u64,
    },
    Hom {
        config: HomScanConfig,
    },
}

fn distribution(p: &Params) -> Result<PairNumberDistribution, String> {
    let kind = match p.text("dist.kind") {
        "thermal" => DistributionKind::Thermal,
        _ => DistributionKind::Poisson,
    };
    PairNumberDistribution::new(kind, p.real("dist.mean")).map_err(|e| e.to_string())
}

fn source_count(p: &Params) -> Result<u32, String> {
    let m = p.int("array.m");
    u32::try_from(m)
        .ok()
        .filter(|&m| m >= 1)
        .ok_or_else(|| format!("array.m must be at least 1, got {m}"))
}

fn array(p: &Params) -> Result<ArrayConfig, String> {
    let scheme: RouterScheme = p
        .text("array.scheme")
        .parse()
        .map_err(|e: muxsim_core::AnalyticError| e.to_string())?;
    Ok(ArrayConfig::new(source_count(p)?, distribution(p)?)
        .with_scheme(scheme)
        .with_routers(
            p.real("router.path_transmission"),
            p.real("router.polarization_transmission"),
            1.0,
        ))
}

fn nonnegative(p: &Params, key: &str) -> Result<f64, String> {
    let v = p.real(key);
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{key} must be nonnegative, got {v}"))
    }
}

fn unit(p: &Params, key: &str) -> Result<f64, String> {
    let v = p.real(key);
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{key} must lie in [0, 1], got {v}"))
    }
}

fn pulses(settings: &Settings) -> Result<u64, String> {
    match settings.pulses {
        Some(0) => Err("pulses must be at least 1".into()),
        Some(n) => Ok(n),
        None => Err("pulses not set".into()),
    }
}

/// Checks one point and builds the engine input; no computation happens here.
pub fn plan(kind: Kind, p: &Params, settings: &Settings) -> Result<Plan, String> {
    match kind {
        Kind::Gain => {
            let array = array(p)?;
            array.validate().map_err(|e| e.to_string())?;
            let decay_length_km = p.real("qkd.decay_length_km");
            distance_extension(array.sources, decay_length_km).map_err(|e| e.to_string())?;
            Ok(Plan::Gain {
                array,
                decay_length_km,
            })
        }
        Kind::Rates => {
            let ns = |k: &str| nonnegative(p, k).map(|v| v * 1e-9);
            let budget = RateBudget {
                rise_time: ns("budget.rise_ns")?,
                fall_time: ns("budget.fall_ns")?,
                recharge_time: ns("budget.recharge_ns")?,
                cable_delay: ns("budget.cable_ns")?,
                trigger_dead_time: ns("budget.dead_time_ns")?,
            };
            let detectors = u32::try_from(p.int("budget.detectors_per_source"))
                .map_err(|_| "budget.detectors_per_source must be nonnegative".to_string())?;
            max_repetition_rate(&budget, detectors).map_err(|e| e.to_string())?;
            let (intensity_pi, intensity_zero) = (
                p.real("router.intensity_pi"),
                p.real("router.intensity_zero"),
            );
            routing_visibility(intensity_pi, intensity_zero).map_err(|e| e.to_string())?;
            Ok(Plan::Rates {
                budget,
                detectors,
                intensity_pi,
                intensity_zero,
            })
        }
        Kind::Heralding => {
            let mut scheme =
                HeraldingScheme::by_name(p.text("heralding.scheme")).expect("schema choice");
            scheme.coupling = unit(p, "heralding.coupling")?;
            if scheme.sources > 1 {
                scheme.path_router_transmission = unit(p, "heralding.path_transmission")?;
            }
            let cutoff = settings.cutoff;
            if !(1..=32).contains(&cutoff) {
                return Err(format!("cutoff must lie in 1..=32, got {cutoff}"));
            }
            let epsilon = p.real("spdc.epsilon");
            let max = max_valid_epsilon(cutoff);
            if !(epsilon > 0.0 && epsilon <= max) {
                return Err(format!(
                    "spdc.epsilon must lie in (0, {max:.4}] at cutoff {cutoff}, got {epsilon}"
                ));
            }
            Ok(Plan::Heralding {
                scheme,
                epsilon,
                cutoff,
            })
        }
        Kind::Coincidence => {
            let mut a = array(p)?;
            a.routing_visibility = p.real("router.visibility");
            let detector =
                DetectorModel::bucket(p.real("trigger.efficiency")).map_err(|e| e.to_string())?;
            a = a
                .with_trigger(detector, p.real("trigger.coupling"))
                .with_output_coupling(p.real("output.coupling"));
            let mut config =
                SimulationConfig::new(a).with_dark_counts(p.real("detector.dark_count"));
            config.dead_time_pulses =
                u32::try_from(p.int("detector.dead_time_pulses")).map_err(|_| {
                    "detector.dead_time_pulses must be a nonnegative integer".to_string()
                })?;
            let couplings = p.list("source.couplings");
            if !couplings.is_empty() {
                config.signal_couplings = Some(couplings.to_vec());
            }
            config.validate().map_err(|e| e.to_string())?;
            Ok(Plan::Coincidence {
                config,
                pulses: pulses(settings)?,
            })
        }
        Kind::Hom => {
            let config = HomScanConfig {
                delays: vec![p.real("hom.delay_um")],
                mzi_phase: p.real("hom.phase"),
                coherence_time: p.real("hom.coherence_length_um"),
                peak_indistinguishability: p.real("hom.chi0"),
                routing_visibility: p.real("router.visibility"),
                pulses_per_point: pulses(settings)?,
                seed: 0,
            };
            config.validate().map_err(|e| e.to_string())?;
            Ok(Plan::Hom { config })
        }
    }
}

fn routed_transmission(array: &ArrayConfig) -> Option<f64> {
    let t = array
        .scheme
        .transmission(
            array.sources,
            array.path_router_transmission,
            array.polarization_router_transmission,
        )
        .ok()?;
    Some(t)
}

/// Result cells of one point, plus the raw scan point for HOM fits.
#[derive(Debug, Clone, PartialEq)]
pub struct Computed {
    pub cells: Vec<Cell>,
    pub hom: Option<HomScanPoint>,
}

impl From<Vec<Cell>> for Computed {
    fn from(cells: Vec<Cell>) -> Self {
        Computed { cells, hom: None }
    }
}

/// Evaluates a planned point. `seed` is used by the sampling kinds only.
pub fn compute(plan: &Plan, seed: u64, threads: Option<usize>) -> Result<Computed, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match plan {
        Plan::Gain {
            array,
            decay_length_km,
        } => {
            let m = array.sources;
            let g = gain(m, &array.distribution).map_err(|e| err(&e))?;
            let lossy = routed_transmission(array)
                .map(|_| total_gain(array, array.scheme).expect("checked"));
            let small = routed_transmission(array).map(|_| {
                total_gain_small_mean(
                    m,
                    array.path_router_transmission,
                    array.polarization_router_transmission,
                    array.scheme,
                )
                .expect("checked")
            });
            let limit = gain_limit(&array.distribution);
            Ok(Computed::from(vec![
                g.into(),
                limit.is_finite().then_some(limit).into(),
                lossy.into(),
                small.into(),
                distance_extension(m, *decay_length_km)
                    .map_err(|e| err(&e))?
                    .into(),
            ]))
        }
        Plan::Rates {
            budget,
            detectors,
            intensity_pi,
            intensity_zero,
        } => {
            let r = max_repetition_rate(budget, *detectors).map_err(|e| err(&e))?;
            let mhz = |v: f64| v.is_finite().then_some(v / 1e6);
            let v = routing_visibility(*intensity_pi, *intensity_zero).map_err(|e| err(&e))?;
            Ok(Computed::from(vec![
                mhz(r.router).into(),
                mhz(r.detector).into(),
                mhz(r.max_rate()).into(),
                Cell::Text(
                    match r.binding {
                        RateLimit::Router => "router",
                        RateLimit::Detector => "detector",
                    }
                    .into(),
                ),
                v.into(),
                intended_port_probability(v).into(),
            ]))
        }
        Plan::Heralding {
            scheme,
            epsilon,
            cutoff,
        } => {
            let point = evaluate_scheme(scheme, *epsilon, *cutoff).map_err(|e| err(&e))?;
            Ok(Computed::from(vec![
                point.mean_pairs.into(),
                point.herald_probability.into(),
                point.output_probability.into(),
                point.g2.into(),
            ]))
        }
        Plan::Coincidence { config, pulses } => {
            let t = simulate_pulses_with_threads(config, *pulses, seed, threads)
                .map_err(|e| err(&e))?;
            let g2 = estimate_g2(&t).ok();
            Ok(Computed::from(vec![
                seed.into(),
                t.pulses.into(),
                t.triggers.into(),
                t.trigger_t.into(),
                t.trigger_r.into(),
                t.trigger_tr.into(),
                (t.trigger_t + t.trigger_r).into(),
                heralding_output_probability(&t).into(),
                heralding_output_std_error(&t).into(),
                g2.map(|g| g.value).into(),
                g2.map(|g| g.std_error).into(),
            ]))
        }
        Plan::Hom { config } => {
            let config = HomScanConfig {
                seed,
                ..config.clone()
            };
            let point = hom_scan(&config).map_err(|e| err(&e))?[0];
            Ok(Computed {
                hom: Some(point),
                cells: vec![
                    seed.into(),
                    point.pulses.into(),
                    point.coincidences.into(),
                    point.singles_b.into(),
                    point.singles_c.into(),
                    point.coincidence_probability.into(),
                ],
            })
        }
    }
}
