//! Expands a scenario into grid points, validates all of them, then computes.

use std::path::{Path, PathBuf};

use muxsim_core::fock::DEFAULT_CUTOFF;
use muxsim_core::montecarlo::{fit_dip, fit_slope, HomScanPoint};

use crate::format::{format_real, Cell, Table};
use crate::kinds::{self, KeyType, Params, Plan, Settings, Value};
use crate::scenario::{Engine, Grid, Kind, Scenario};
use crate::ScenarioError;

/// Command-line overrides; `None` keeps the scenario's value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub pulses: Option<u64>,
    pub cutoff: Option<usize>,
    pub threads: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 1;

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of grid point `index`, a SplitMix64 hash of the run seed and index.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    splitmix64(splitmix64(seed).wrapping_add(index as u64))
}

/// A scenario whose every point passed validation.
#[derive(Debug, Clone)]
pub struct PreparedRun {
    pub scenario: Scenario,
    pub seed: u64,
    pub settings: Settings,
    pub threads: Option<usize>,
    base: Params,
    swept: Vec<(String, Vec<Value>)>,
    points: Vec<(Vec<Value>, Plan)>,
}

fn type_error(key: &str, value: &str, ty: &KeyType) -> ScenarioError {
    ScenarioError::Type {
        key: key.to_string(),
        value: value.to_string(),
        expected: ty.describe(),
        line: None,
    }
}

fn typed_grid(spec: &kinds::KeySpec, grid: &Grid, text: &str) -> Result<Vec<Value>, ScenarioError> {
    if spec.ty == KeyType::RealList {
        return Err(ScenarioError::NotSweepable(spec.key.to_string()));
    }
    let values = match grid {
        Grid::List(items) => items
            .iter()
            .map(|s| {
                spec.ty
                    .parse(s)
                    .ok_or_else(|| type_error(spec.key, s, &spec.ty))
            })
            .collect::<Result<Vec<_>, _>>()?,
        Grid::Range { lo, step, hi } => Grid::range_points(*lo, *step, *hi)
            .into_iter()
            .map(|v| {
                spec.ty
                    .from_number(v)
                    .ok_or_else(|| type_error(spec.key, text, &spec.ty))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    if values.is_empty() {
        return Err(ScenarioError::EmptyGrid(spec.key.to_string()));
    }
    Ok(values)
}

fn find_spec(kind: Kind, key: &str) -> Result<&'static kinds::KeySpec, ScenarioError> {
    kinds::schema(kind)
        .iter()
        .find(|s| s.key == key)
        .ok_or_else(|| ScenarioError::UnknownKey {
            key: key.to_string(),
            kind: kind.name(),
        })
}

/// Types every parameter and plans every grid point. Nothing is computed.
pub fn prepare(scenario: &Scenario, options: &RunOptions) -> Result<PreparedRun, ScenarioError> {
    let kind = scenario.kind;
    let mut base = Vec::new();
    for spec in kinds::schema(kind) {
        let raw = scenario
            .fixed
            .iter()
            .find(|a| a.key == spec.key)
            .map(|a| (a.value.as_str(), Some(a.line)))
            .unwrap_or((spec.default, None));
        let value = spec.ty.parse(raw.0).ok_or_else(|| ScenarioError::Type {
            key: spec.key.to_string(),
            value: raw.0.to_string(),
            expected: spec.ty.describe(),
            line: raw.1,
        })?;
        base.push((spec.key, value));
    }
    for a in &scenario.fixed {
        find_spec(kind, &a.key)?;
    }
    let mut swept = Vec::new();
    for sweep in &scenario.sweeps {
        let spec = find_spec(kind, &sweep.key)?;
        swept.push((
            spec.key.to_string(),
            typed_grid(spec, &sweep.grid, &sweep.text)?,
        ));
    }

    let settings = Settings {
        pulses: options
            .pulses
            .or(scenario.pulses)
            .or(kinds::default_pulses(kind)),
        cutoff: options.cutoff.or(scenario.cutoff).unwrap_or(DEFAULT_CUTOFF),
    };
    let base = Params(base);
    let mut points = Vec::new();
    for (index, combo) in cartesian(&swept).into_iter().enumerate() {
        let mut params = base.clone();
        for ((key, _), value) in swept.iter().zip(&combo) {
            let slot = params
                .0
                .iter_mut()
                .find(|(k, _)| k == key)
                .expect("schema key");
            slot.1 = value.clone();
        }
        let plan =
            kinds::plan(kind, &params, &settings).map_err(|message| ScenarioError::Invalid {
                point: index,
                message,
            })?;
        points.push((combo, plan));
    }
    Ok(PreparedRun {
        scenario: scenario.clone(),
        seed: options.seed.or(scenario.seed).unwrap_or(DEFAULT_SEED),
        settings,
        threads: options.threads,
        base,
        swept,
        points,
    })
}

fn cartesian(swept: &[(String, Vec<Value>)]) -> Vec<Vec<Value>> {
    let mut combos = vec![Vec::new()];
    for (_, values) in swept {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v.clone());
                    next
                })
            })
            .collect();
    }
    combos
}

impl PreparedRun {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn metadata(&self) -> Vec<String> {
        let s = &self.scenario;
        let mut lines = vec![
            format!("scenario: {}", s.name),
            format!("kind: {}", s.kind.name()),
            format!("engine: {}", s.kind.engine()),
        ];
        if let Some(d) = &s.description {
            lines.push(format!("description: {d}"));
        }
        if s.kind.engine() == Engine::MonteCarlo {
            lines.push(format!("seed: {}", self.seed));
            if let Some(p) = self.settings.pulses {
                lines.push(format!("pulses: {p}"));
            }
        }
        if s.kind.engine() == Engine::Fock {
            lines.push(format!("cutoff: {}", self.settings.cutoff));
        }
        for (key, value) in &self.base.0 {
            if self.swept.iter().any(|(k, _)| k == key) {
                continue;
            }
            lines.push(format!("param {key} = {}", value.cell().render()));
        }
        for (key, values) in &self.swept {
            let text: Vec<String> = values.iter().map(|v| v.cell().render()).collect();
            lines.push(format!("sweep {key} = {}", text.join(", ")));
        }
        lines
    }

    /// Computes every point in grid order.
    pub fn execute(&self) -> Result<Table, ScenarioError> {
        let kind = self.scenario.kind;
        let mut columns: Vec<String> = self.swept.iter().map(|(k, _)| k.clone()).collect();
        columns.extend(kinds::result_columns(kind).iter().map(|c| c.to_string()));
        let mut rows = Vec::with_capacity(self.points.len());
        let mut scan: Vec<(Vec<Value>, HomScanPoint)> = Vec::new();
        for (index, (combo, plan)) in self.points.iter().enumerate() {
            let seed = point_seed(self.seed, index);
            let computed = kinds::compute(plan, seed, self.threads).map_err(|message| {
                ScenarioError::Invalid {
                    point: index,
                    message,
                }
            })?;
            let mut row: Vec<Cell> = combo.iter().map(Value::cell).collect();
            row.extend(computed.cells);
            rows.push(row);
            if let Some(p) = computed.hom {
                scan.push((combo.clone(), p));
            }
        }
        let mut metadata = self.metadata();
        if kind == Kind::Hom {
            metadata.extend(self.hom_fits(&scan));
        }
        Ok(Table {
            columns,
            metadata,
            rows,
        })
    }

    /// Dip and slope fits over the delay axis, one per combination of the
    /// other swept keys.
    fn hom_fits(&self, scan: &[(Vec<Value>, HomScanPoint)]) -> Vec<String> {
        let Some(delay_axis) = self.swept.iter().position(|(k, _)| k == "hom.delay_um") else {
            return Vec::new();
        };
        let coherence = match self.points.first() {
            Some((_, Plan::Hom { config })) => config.coherence_time,
            _ => return Vec::new(),
        };
        let mut groups: Vec<(Vec<Value>, Vec<HomScanPoint>)> = Vec::new();
        for (combo, point) in scan {
            let mut key = combo.clone();
            key.remove(delay_axis);
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, pts)) => pts.push(*point),
                None => groups.push((key, vec![*point])),
            }
        }
        let others: Vec<&String> = self
            .swept
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != delay_axis)
            .map(|(_, (k, _))| k)
            .collect();
        let mut lines = Vec::new();
        for (key, points) in groups {
            let label: Vec<String> = others
                .iter()
                .zip(&key)
                .map(|(k, v)| format!("{k}={}", v.cell().render()))
                .collect();
            let label = if label.is_empty() {
                "all".to_string()
            } else {
                label.join(" ")
            };
            let mut parts = Vec::new();
            if let Ok(d) = fit_dip(&points, coherence) {
                parts.push(format!(
                    "dip visibility {} +- {}",
                    format_real(d.visibility),
                    format_real(d.visibility_std_error)
                ));
            }
            if let Ok(s) = fit_slope(&points) {
                parts.push(format!(
                    "slope {} +- {} per um",
                    format_real(s.slope),
                    format_real(s.slope_std_error)
                ));
            }
            if !parts.is_empty() {
                lines.push(format!("fit {label}: {}", parts.join(", ")));
            }
        }
        lines
    }
}

/// Where the CSV goes: explicit path, then the scenario's `output`, then
/// `<dir>/<name>.csv`.
pub fn output_path(scenario: &Scenario, out: Option<&Path>, out_dir: Option<&Path>) -> PathBuf {
    if let Some(p) = out {
        return p.to_path_buf();
    }
    if let Some(p) = &scenario.output {
        return p.clone();
    }
    out_dir
        .unwrap_or_else(|| Path::new("."))
        .join(format!("{}.csv", scenario.name))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Result<Table, ScenarioError> {
        prepare(&Scenario::parse(text).unwrap(), &RunOptions::default())?.execute()
    }

    #[test]
    fn unknown_key_rejected() {
        let e = run("kind = gain\ndist.colour = red\n").unwrap_err();
        assert!(matches!(e, ScenarioError::UnknownKey { .. }));
        let e = run("kind = gain\nsweep.array.n = 1, 2\n").unwrap_err();
        assert!(matches!(e, ScenarioError::UnknownKey { .. }));
    }

    #[test]
    fn type_mismatch_rejected() {
        assert!(matches!(
            run("kind = gain\nsweep.array.m = 1, two\n"),
            Err(ScenarioError::Type { .. })
        ));
        assert!(matches!(
            run("kind = gain\nsweep.array.m = 1:0.5:3\n"),
            Err(ScenarioError::Type { .. })
        ));
        assert!(matches!(
            run("kind = coincidence\nsweep.source.couplings = 1, 2\n"),
            Err(ScenarioError::NotSweepable(_))
        ));
    }

    #[test]
    fn physics_validated_before_running() {
        for bad in [
            "kind = gain\ndist.mean = -0.1\n",
            "kind = gain\nrouter.path_transmission = 1.2\n",
            "kind = coincidence\narray.m = 3\npulses = 10\n",
            "kind = heralding\nspdc.epsilon = 0.9\n",
            "kind = hom\nhom.coherence_length_um = 0\n",
        ] {
            assert!(
                matches!(run(bad), Err(ScenarioError::Invalid { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn cartesian_order_follows_file() {
        let t =
            run("kind = gain\nsweep.array.m = 1, 2\nsweep.dist.mean = 0.1, 0.2, 0.3\n").unwrap();
        assert_eq!(t.rows.len(), 6);
        assert_eq!(
            t.columns[..2],
            ["array.m".to_string(), "dist.mean".to_string()]
        );
        assert_eq!(t.rows[1][0], Cell::Int(1));
        assert_eq!(t.rows[3][0], Cell::Int(2));
    }

    #[test]
    fn undefined_values_are_blank() {
        let t = run("kind = gain\nsweep.array.m = 1, 3, 4\n").unwrap();
        let total = t.columns.iter().position(|c| c == "total_gain").unwrap();
        assert_eq!(t.rows[0][total], Cell::Empty);
        assert_eq!(t.rows[1][total], Cell::Empty);
        assert!(matches!(t.rows[2][total], Cell::Real(_)));
    }

    #[test]
    fn seeds_differ_per_point() {
        assert_ne!(point_seed(1, 0), point_seed(1, 1));
        assert_ne!(point_seed(1, 1), point_seed(2, 0));
        assert_eq!(point_seed(7, 3), point_seed(7, 3));
    }
}
