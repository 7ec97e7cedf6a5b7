//! Flat `key = value` scenario files.
//!
//! ```text
//! # comment
//! name = fig3
//! kind = coincidence
//! dist.mean = 0.062
//! sweep.array.m = 1, 2, 4
//! sweep.dist.mean = 0.01:0.01:0.05
//! ```
//!
//! `sweep.<key>` takes a comma-separated list or an inclusive `lo:step:hi`
//! range. Several sweeps form a cartesian product, the first one outermost.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Gain,
    Rates,
    Heralding,
    Coincidence,
    Hom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Fock,
    MonteCarlo,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Gain,
        Kind::Rates,
        Kind::Heralding,
        Kind::Coincidence,
        Kind::Hom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Gain => "gain",
            Kind::Rates => "rates",
            Kind::Heralding => "heralding",
            Kind::Coincidence => "coincidence",
            Kind::Hom => "hom",
        }
    }

    pub fn engine(&self) -> Engine {
        match self {
            Kind::Gain | Kind::Rates => Engine::Analytic,
            Kind::Heralding => Engine::Fock,
            Kind::Coincidence | Kind::Hom => Engine::MonteCarlo,
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Kind::ALL.iter().map(Kind::name).collect();
                format!("unknown kind `{s}` (expected one of {})", names.join(", "))
            })
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Analytic => "analytic",
            Engine::Fock => "fock",
            Engine::MonteCarlo => "monte_carlo",
        })
    }
}

/// Grid of a swept key before typing.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<String>),
    Range { lo: f64, step: f64, hi: f64 },
}

impl Grid {
    /// Range points `lo + k·step` up to `hi`, tolerating rounding at the end.
    pub fn range_points(lo: f64, step: f64, hi: f64) -> Vec<f64> {
        let n = ((hi - lo) / step + 1e-9).floor();
        if n.is_nan() || n < 0.0 {
            return Vec::new();
        }
        (0..=n as u64).map(|k| lo + k as f64 * step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub grid: Grid,
    /// Right-hand side as written.
    pub text: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    pub description: Option<String>,
    pub seed: Option<u64>,
    pub pulses: Option<u64>,
    pub cutoff: Option<usize>,
    pub output: Option<PathBuf>,
    pub fixed: Vec<Assignment>,
    pub sweeps: Vec<Sweep>,
}

fn parse_at<T: FromStr>(
    line: usize,
    key: &str,
    value: &str,
    expected: &str,
) -> Result<T, ScenarioError> {
    value.parse().map_err(|_| ScenarioError::Type {
        key: key.to_string(),
        value: value.to_string(),
        expected: expected.to_string(),
        line: Some(line),
    })
}

fn parse_grid(line: usize, key: &str, text: &str) -> Result<Grid, ScenarioError> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(ScenarioError::Syntax {
                line,
                message: format!("range for `{key}` must be lo:step:hi"),
            });
        }
        let lo: f64 = parse_at(line, key, parts[0], "a number")?;
        let step: f64 = parse_at(line, key, parts[1], "a number")?;
        let hi: f64 = parse_at(line, key, parts[2], "a number")?;
        if !(lo.is_finite() && step.is_finite() && hi.is_finite()) || step <= 0.0 || hi < lo {
            return Err(ScenarioError::EmptyGrid(key.to_string()));
        }
        return Ok(Grid::Range { lo, step, hi });
    }
    let items: Vec<String> = text
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(ScenarioError::EmptyGrid(key.to_string()));
    }
    Ok(Grid::List(items))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut name = None;
        let mut kind = None;
        let mut description = None;
        let mut seed = None;
        let mut pulses = None;
        let mut cutoff = None;
        let mut output = None;
        let mut fixed: Vec<Assignment> = Vec::new();
        let mut sweeps: Vec<Sweep> = Vec::new();
        let mut seen: Vec<String> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| ScenarioError::Syntax {
                    line,
                    message: format!("expected `key = value`, got `{trimmed}`"),
                })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ScenarioError::Syntax {
                    line,
                    message: "empty key".into(),
                });
            }
            let target = key.strip_prefix("sweep.").unwrap_or(key);
            if seen.iter().any(|k| k == target) {
                return Err(ScenarioError::Syntax {
                    line,
                    message: format!("`{target}` is set more than once"),
                });
            }
            seen.push(target.to_string());
            match key {
                "name" => name = Some(value.to_string()),
                "kind" => {
                    kind = Some(
                        value
                            .parse::<Kind>()
                            .map_err(|message| ScenarioError::Syntax { line, message })?,
                    )
                }
                "description" => description = Some(value.to_string()),
                "seed" => seed = Some(parse_at(line, key, value, "a nonnegative integer")?),
                "pulses" => pulses = Some(parse_at(line, key, value, "a positive integer")?),
                "cutoff" => cutoff = Some(parse_at(line, key, value, "a positive integer")?),
                "output" => output = Some(PathBuf::from(value)),
                _ => match key.strip_prefix("sweep.") {
                    Some(swept) => sweeps.push(Sweep {
                        key: swept.to_string(),
                        grid: parse_grid(line, swept, value)?,
                        text: value.to_string(),
                        line,
                    }),
                    None => fixed.push(Assignment {
                        key: key.to_string(),
                        value: value.to_string(),
                        line,
                    }),
                },
            }
        }
        let kind = kind.ok_or(ScenarioError::Missing("kind"))?;
        if name
            .as_deref()
            .is_some_and(|n: &str| n.is_empty() || n.contains(['/', '\\']))
        {
            return Err(ScenarioError::Syntax {
                line: 0,
                message: "name must be nonempty and contain no path separators".into(),
            });
        }
        Ok(Scenario {
            name: name.unwrap_or_else(|| kind.name().to_string()),
            kind,
            description,
            seed,
            pulses,
            cutoff,
            output,
            fixed,
            sweeps,
        })
    }
}
