//! Flat key-value configuration with dotted sections.
//!
//! Grammar (one statement per line):
//!   - blank lines and lines starting with `#` are ignored,
//!   - `key = value` with `key` a dotted path of `[A-Za-z0-9_]` segments,
//!   - everything from an unescaped ` #` onward in the value is a comment,
//!   - duplicate keys are an error.
//!
//! The `units` switch (`angular` | `hertz`, default `angular`) applies to
//! every frequency- or rate-valued key: under `hertz` those inputs are
//! multiplied by 2π on ingestion. Times stay in seconds, geometry in SI.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Spectrum,
    CouplingMap,
    Rabi,
    Iswap,
    Stark,
    Meanfield,
}

impl ExperimentKind {
    pub fn parse(name: &str) -> CliResult<Self> {
        match name {
            "spectrum" => Ok(Self::Spectrum),
            "coupling-map" => Ok(Self::CouplingMap),
            "rabi" => Ok(Self::Rabi),
            "iswap" => Ok(Self::Iswap),
            "stark" => Ok(Self::Stark),
            "meanfield" => Ok(Self::Meanfield),
            other => Err(CliError::Config(format!(
                "unknown experiment '{other}' (expected spectrum, coupling-map, rabi, \
                 iswap, stark, or meanfield)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::CouplingMap => "coupling-map",
            Self::Rabi => "rabi",
            Self::Iswap => "iswap",
            Self::Stark => "stark",
            Self::Meanfield => "meanfield",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitMode {
    Angular,
    Hertz,
}

/// How a scalar key is interpreted, which decides whether the `units` switch
/// rescales it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitClass {
    /// Angular frequency or rate [rad/s]; multiplied by 2π under `hertz`.
    Frequency,
    /// Plain number.
    Dimensionless,
    /// Seconds.
    Time,
    /// SI quantity left untouched (meters, henry, kelvin).
    Si,
}

/// A recognized scalar input of an experiment.
#[derive(Debug, Clone, Copy)]
pub struct ScalarKey {
    pub name: &'static str,
    pub class: UnitClass,
    pub default: f64,
}

/// One sweep axis: a named parameter and the ordered grid values it takes.
#[derive(Debug, Clone)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Numerics {
    pub n_max: usize,
    pub n_max_cavity: Option<usize>,
    pub n_max_mech: Option<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub tol: f64,
}

impl Numerics {
    pub fn cavity_truncation(&self) -> usize {
        self.n_max_cavity.unwrap_or(self.n_max)
    }
    pub fn mech_truncation(&self) -> usize {
        self.n_max_mech.unwrap_or(self.n_max)
    }
}

/// Fully parsed configuration: raw pairs plus the common typed fields.
#[derive(Debug, Clone)]
pub struct Config {
    pub experiment: ExperimentKind,
    pub units: UnitMode,
    pub output: String,
    pub numerics: Numerics,
    pub sweep: Vec<(usize, String, SweepSpec)>,
    pairs: BTreeMap<String, String>,
}

/// Sweep axis declaration before expansion.
#[derive(Debug, Clone, Default)]
pub struct SweepSpec {
    pub param: Option<String>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    pub scale: Option<String>,
}

impl Config {
    pub fn parse(experiment_arg: &str, text: &str) -> CliResult<Self> {
        let experiment = ExperimentKind::parse(experiment_arg)?;
        let mut pairs = BTreeMap::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line = match line.find('#') {
                Some(pos) => line[..pos].trim(),
                None => line,
            };
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected 'key = value', got '{raw_line}'",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty()
                || !key
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
            {
                return Err(CliError::Config(format!(
                    "line {}: invalid key '{key}'",
                    lineno + 1
                )));
            }
            if pairs.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }

        if let Some(named) = pairs.get("experiment") {
            let from_file = ExperimentKind::parse(named)?;
            if from_file != experiment {
                return Err(CliError::Config(format!(
                    "experiment '{}' on the command line but '{}' in the config",
                    experiment.name(),
                    from_file.name()
                )));
            }
        }

        let units = match pairs.get("units").map(String::as_str) {
            None | Some("angular") => UnitMode::Angular,
            Some("hertz") => UnitMode::Hertz,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "units must be 'angular' or 'hertz', got '{other}'"
                )))
            }
        };

        let output = pairs
            .get("output")
            .cloned()
            .unwrap_or_else(|| format!("{}.csv", experiment.name()));

        let numerics = Numerics {
            n_max: parse_opt_usize(&pairs, "numerics.n_max")?.unwrap_or(8),
            n_max_cavity: parse_opt_usize(&pairs, "numerics.n_max_cavity")?,
            n_max_mech: parse_opt_usize(&pairs, "numerics.n_max_mech")?,
            dt: parse_opt_f64(&pairs, "numerics.dt")?,
            t_final: parse_opt_f64(&pairs, "numerics.t_final")?,
            tol: parse_opt_f64(&pairs, "numerics.tol")?.unwrap_or(1e-12),
        };
        if numerics.n_max < 2 {
            return Err(CliError::Config(format!(
                "numerics.n_max must be >= 2, got {}",
                numerics.n_max
            )));
        }

        let sweep = parse_sweep_specs(&pairs)?;

        Ok(Self {
            experiment,
            units,
            output,
            numerics,
            sweep,
            pairs,
        })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.pairs.get(key).map(String::as_str)
    }

    /// Resolve one scalar key: config override (unit-scaled) or its default.
    pub fn scalar(&self, spec: &ScalarKey) -> CliResult<f64> {
        match self.pairs.get(spec.name) {
            None => Ok(spec.default),
            Some(text) => {
                let v: f64 = text.parse().map_err(|_| {
                    CliError::Config(format!(
                        "key '{}': expected a number, got '{text}'",
                        spec.name
                    ))
                })?;
                Ok(self.apply_units(spec.class, v))
            }
        }
    }

    pub fn apply_units(&self, class: UnitClass, value: f64) -> f64 {
        match (class, self.units) {
            (UnitClass::Frequency, UnitMode::Hertz) => 2.0 * PI * value,
            _ => value,
        }
    }

    /// Comma-separated list of numbers (unit scaling applied per class).
    pub fn scalar_list(&self, key: &str, class: UnitClass, default: &[f64]) -> CliResult<Vec<f64>> {
        match self.pairs.get(key) {
            None => Ok(default.to_vec()),
            Some(text) => text
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<f64>()
                        .map(|v| self.apply_units(class, v))
                        .map_err(|_| {
                            CliError::Config(format!(
                                "key '{key}': expected comma-separated numbers, got '{text}'"
                            ))
                        })
                })
                .collect(),
        }
    }

    /// Reject any config key that is not in the recognized set.
    pub fn check_known_keys(&self, recognized: &[&str]) -> CliResult<()> {
        const COMMON: &[&str] = &["experiment", "units", "output"];
        for key in self.pairs.keys() {
            let known = COMMON.contains(&key.as_str())
                || key.starts_with("numerics.")
                || key.starts_with("sweep.")
                || recognized.contains(&key.as_str());
            if !known {
                return Err(CliError::Config(format!(
                    "unrecognized key '{key}' for experiment '{}'",
                    self.experiment.name()
                )));
            }
            if key.starts_with("numerics.") {
                const NUMERICS: &[&str] = &[
                    "numerics.n_max",
                    "numerics.n_max_cavity",
                    "numerics.n_max_mech",
                    "numerics.dt",
                    "numerics.t_final",
                    "numerics.tol",
                ];
                if !NUMERICS.contains(&key.as_str()) {
                    return Err(CliError::Config(format!("unrecognized key '{key}'")));
                }
            }
        }
        Ok(())
    }

    /// Expand the sweep declarations into concrete axes, unit-scaling the
    /// endpoints according to the referenced parameter's class.
    pub fn sweep_axes(&self, sweepable: &[ScalarKey]) -> CliResult<Vec<SweepAxis>> {
        let mut axes = Vec::new();
        for (idx, _, spec) in &self.sweep {
            let name = spec
                .param
                .clone()
                .ok_or_else(|| CliError::Config(format!("sweep.{idx} is missing 'param'")))?;
            let key = sweepable
                .iter()
                .find(|k| k.name.split('.').next_back() == Some(name.as_str()))
                .ok_or_else(|| {
                    let options: Vec<&str> = sweepable
                        .iter()
                        .filter_map(|k| k.name.split('.').next_back())
                        .collect();
                    CliError::Config(format!(
                        "sweep.{idx}.param '{name}' is not sweepable here (options: {})",
                        options.join(", ")
                    ))
                })?;
            let start = spec
                .start
                .ok_or_else(|| CliError::Config(format!("sweep.{idx} is missing 'start'")))?;
            let stop = spec
                .stop
                .ok_or_else(|| CliError::Config(format!("sweep.{idx} is missing 'stop'")))?;
            let points = spec
                .points
                .ok_or_else(|| CliError::Config(format!("sweep.{idx} is missing 'points'")))?;
            if points < 2 {
                return Err(CliError::Config(format!(
                    "sweep.{idx}.points must be >= 2, got {points}"
                )));
            }
            let scale = spec.scale.as_deref().unwrap_or("linear");
            let start = self.apply_units(key.class, start);
            let stop = self.apply_units(key.class, stop);
            let values = match scale {
                "linear" => grid_linear(start, stop, points),
                "log" => {
                    if start <= 0.0 || stop <= 0.0 {
                        return Err(CliError::Config(format!(
                            "sweep.{idx}: log scale needs positive endpoints"
                        )));
                    }
                    grid_log(start, stop, points)
                }
                other => {
                    return Err(CliError::Config(format!(
                        "sweep.{idx}.scale must be 'linear' or 'log', got '{other}'"
                    )))
                }
            };
            axes.push(SweepAxis { name, values });
        }
        Ok(axes)
    }

    /// Sorted (key, value) pairs for the CSV comment block.
    pub fn echo_pairs(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

pub fn grid_linear(start: f64, stop: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| start + (stop - start) * k as f64 / (points - 1) as f64)
        .collect()
}

pub fn grid_log(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let (l0, l1) = (start.ln(), stop.ln());
    (0..points)
        .map(|k| (l0 + (l1 - l0) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

fn parse_opt_f64(pairs: &BTreeMap<String, String>, key: &str) -> CliResult<Option<f64>> {
    match pairs.get(key) {
        None => Ok(None),
        Some(text) => text
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("key '{key}': expected a number, got '{text}'"))),
    }
}

fn parse_opt_usize(pairs: &BTreeMap<String, String>, key: &str) -> CliResult<Option<usize>> {
    match pairs.get(key) {
        None => Ok(None),
        Some(text) => text.parse().map(Some).map_err(|_| {
            CliError::Config(format!("key '{key}': expected an integer, got '{text}'"))
        }),
    }
}

fn parse_sweep_specs(
    pairs: &BTreeMap<String, String>,
) -> CliResult<Vec<(usize, String, SweepSpec)>> {
    let mut specs: BTreeMap<usize, SweepSpec> = BTreeMap::new();
    for (key, value) in pairs {
        let Some(rest) = key.strip_prefix("sweep.") else {
            continue;
        };
        let Some((idx_text, field)) = rest.split_once('.') else {
            return Err(CliError::Config(format!(
                "sweep keys look like sweep.<index>.<field>, got '{key}'"
            )));
        };
        let idx: usize = idx_text.parse().map_err(|_| {
            CliError::Config(format!("sweep index must be an integer, got '{idx_text}'"))
        })?;
        let spec = specs.entry(idx).or_default();
        match field {
            "param" => spec.param = Some(value.clone()),
            "start" => {
                spec.start = Some(value.parse().map_err(|_| {
                    CliError::Config(format!("key '{key}': expected a number, got '{value}'"))
                })?)
            }
            "stop" => {
                spec.stop = Some(value.parse().map_err(|_| {
                    CliError::Config(format!("key '{key}': expected a number, got '{value}'"))
                })?)
            }
            "points" => {
                spec.points = Some(value.parse().map_err(|_| {
                    CliError::Config(format!("key '{key}': expected an integer, got '{value}'"))
                })?)
            }
            "scale" => spec.scale = Some(value.clone()),
            other => {
                return Err(CliError::Config(format!(
                    "unknown sweep field '{other}' in '{key}'"
                )))
            }
        }
    }
    Ok(specs
        .into_iter()
        .map(|(idx, spec)| {
            let name = spec.param.clone().unwrap_or_default();
            (idx, name, spec)
        })
        .collect())
}
