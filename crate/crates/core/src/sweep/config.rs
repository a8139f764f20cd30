//! Plain-text `key = value` sweep configuration.
//!
//! ```text
//! # current and magnetization over two flux periods
//! radius_nm      = 400
//! flux_grid      = 0:2:401        # start:stop:count in flux quanta
//! omega_grid     = -1e9:1e9:3     # rad/s
//! temperature_mK = 0,1
//! electrons      = 10
//! outputs        = current,magnetization
//! ```
//!
//! Recognised keys: `radius_nm` (required), `mass_ratio`, `field_T`,
//! `flux_grid`, `omega_rad_s`, `omega_GHz`, `omega_grid`, `temperature_mK`,
//! `electrons` (required), `outputs`, `m_list`. At most one of `field_T` and
//! `flux_grid` may be given, and at most one of the three rotation keys.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{RingParams, CONSTANTS};

pub const KEYS: [&str; 11] = [
    "radius_nm",
    "mass_ratio",
    "field_T",
    "flux_grid",
    "omega_rad_s",
    "omega_GHz",
    "omega_grid",
    "temperature_mK",
    "electrons",
    "outputs",
    "m_list",
];

const FLUX_KEYS: [&str; 2] = ["field_T", "flux_grid"];
const ROTATION_KEYS: [&str; 3] = ["omega_rad_s", "omega_GHz", "omega_grid"];

/// Where a configuration value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Line(usize),
    Flag,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Flag => f.write_str("command-line flag"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{at}: expected `key = value`, got `{text}`")]
    Syntax { at: Location, text: String },
    #[error("{at}: unknown key `{key}`")]
    UnknownKey { at: Location, key: String },
    #[error("{at}: duplicate key `{key}` (first set on {first})")]
    DuplicateKey {
        at: Location,
        key: String,
        first: Location,
    },
    #[error("{at}: malformed value for `{key}`: {reason}")]
    Malformed {
        at: Location,
        key: String,
        reason: String,
    },
    #[error("missing required key `{key}`")]
    Missing { key: &'static str },
    #[error("{at}: `{key}` conflicts with `{other}` on {other_at}")]
    Conflict {
        at: Location,
        key: String,
        other: String,
        other_at: Location,
    },
}

/// Inclusive grid of `count` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Grid, String> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        Ok(Grid { start, stop, count })
    }

    pub fn single(value: f64) -> Grid {
        Grid {
            start: value,
            stop: value,
            count: 1,
        }
    }

    /// Value at index `i`; both endpoints are reproduced exactly.
    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            return self.start;
        }
        let t = i as f64 / (self.count - 1) as f64;
        self.start * (1.0 - t) + self.stop * t
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// What drives the enclosed flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxAxis {
    /// A single field value (T).
    Field(f64),
    /// A grid over the reduced flux l′ (flux quanta).
    Reduced(Grid),
}

impl FluxAxis {
    pub fn count(&self) -> usize {
        match self {
            FluxAxis::Field(_) => 1,
            FluxAxis::Reduced(g) => g.count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Energy,
    Current,
    Magnetization,
    ChemicalPotential,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::Energy => "energy",
            Output::Current => "current",
            Output::Magnetization => "magnetization",
            Output::ChemicalPotential => "chemical_potential",
        }
    }

    fn parse(s: &str) -> Option<Output> {
        match s {
            "energy" => Some(Output::Energy),
            "current" => Some(Output::Current),
            "magnetization" => Some(Output::Magnetization),
            "chemical_potential" => Some(Output::ChemicalPotential),
            _ => None,
        }
    }
}

pub const DEFAULT_OUTPUTS: [Output; 3] = [
    Output::Current,
    Output::Magnetization,
    Output::ChemicalPotential,
];

/// Levels reported by the energy output when `m_list` is absent.
pub const DEFAULT_M_LIST: [i64; 7] = [-3, -2, -1, 0, 1, 2, 3];

/// A validated sweep, kept in the units of the configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub radius_nm: f64,
    pub mass_ratio: f64,
    pub flux: FluxAxis,
    /// Rotation grid (rad/s).
    pub rotation: Grid,
    pub temperatures_mk: Vec<f64>,
    pub electrons: u32,
    /// Sorted, without duplicates.
    pub outputs: Vec<Output>,
    pub m_list: Option<Vec<i64>>,
}

impl SweepSpec {
    /// Ring parameters shared by every grid point (no field, no rotation,
    /// zero temperature).
    pub fn base_params(&self) -> crate::Result<RingParams> {
        RingParams::new(self.radius_nm / 1e9)?
            .with_mass(self.mass_ratio * CONSTANTS.electron_mass)?
            .with_electrons(self.electrons)
    }

    pub fn levels(&self) -> &[i64] {
        self.m_list.as_deref().unwrap_or(&DEFAULT_M_LIST)
    }

    pub fn row_count(&self) -> usize {
        self.temperatures_mk.len() * self.rotation.count * self.flux.count()
    }

    /// Canonical configuration text; `parse_config(&spec.render())` gives
    /// back `spec`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |key: &str, value: String| {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        };
        line("radius_nm", self.radius_nm.to_string());
        line("mass_ratio", self.mass_ratio.to_string());
        match self.flux {
            FluxAxis::Field(b) => line("field_T", b.to_string()),
            FluxAxis::Reduced(g) => line("flux_grid", g.to_string()),
        }
        line("omega_grid", self.rotation.to_string());
        line("temperature_mK", join(&self.temperatures_mk));
        line("electrons", self.electrons.to_string());
        line(
            "outputs",
            self.outputs
                .iter()
                .map(|o| o.name())
                .collect::<Vec<_>>()
                .join(","),
        );
        if let Some(ms) = &self.m_list {
            line("m_list", join(ms));
        }
        out
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Unvalidated key/value pairs with their origin.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Location)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<RawConfig, ConfigError> {
        let mut raw = RawConfig::default();
        for (index, line) in text.lines().enumerate() {
            let at = Location::Line(index + 1);
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    at,
                    text: content.to_string(),
                });
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    at,
                    key: key.to_string(),
                });
            }
            if let Some((_, first)) = raw.entries.get(key) {
                return Err(ConfigError::DuplicateKey {
                    at,
                    key: key.to_string(),
                    first: *first,
                });
            }
            raw.entries
                .insert(key.to_string(), (value.trim().to_string(), at));
        }
        Ok(raw)
    }

    /// Applies a command-line override. A flag replaces the file value of the
    /// same key and drops file values of keys it is mutually exclusive with.
    pub fn set_flag(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                at: Location::Flag,
                key: key.to_string(),
            });
        }
        for group in [&FLUX_KEYS[..], &ROTATION_KEYS[..]] {
            if group.contains(&key) {
                for other in group {
                    if let Some((_, Location::Line(_))) = self.entries.get(*other) {
                        self.entries.remove(*other);
                    }
                }
            }
        }
        self.entries
            .insert(key.to_string(), (value.trim().to_string(), Location::Flag));
        Ok(())
    }

    fn get(&self, key: &str) -> Option<(&str, Location)> {
        self.entries.get(key).map(|(v, at)| (v.as_str(), *at))
    }

    fn exclusive(
        &self,
        group: &[&'static str],
    ) -> Result<Option<(&'static str, &str, Location)>, ConfigError> {
        let mut found: Option<(&'static str, &str, Location)> = None;
        for &key in group {
            if let Some((value, at)) = self.get(key) {
                if let Some((other, _, other_at)) = found {
                    return Err(ConfigError::Conflict {
                        at,
                        key: key.to_string(),
                        other: other.to_string(),
                        other_at,
                    });
                }
                found = Some((key, value, at));
            }
        }
        Ok(found)
    }

    pub fn into_spec(self) -> Result<SweepSpec, ConfigError> {
        let (radius, at) = self
            .get("radius_nm")
            .ok_or(ConfigError::Missing { key: "radius_nm" })?;
        let radius_nm = parse_float("radius_nm", radius, at)?;
        if radius_nm <= 0.0 {
            return Err(malformed("radius_nm", at, "must be positive"));
        }

        let mass_ratio = match self.get("mass_ratio") {
            Some((v, at)) => {
                let r = parse_float("mass_ratio", v, at)?;
                if r <= 0.0 {
                    return Err(malformed("mass_ratio", at, "must be positive"));
                }
                r
            }
            None => 1.0,
        };

        let flux = match self.exclusive(&FLUX_KEYS)? {
            Some(("field_T", v, at)) => FluxAxis::Field(parse_float("field_T", v, at)?),
            Some((key, v, at)) => FluxAxis::Reduced(parse_grid(key, v, at)?),
            None => FluxAxis::Field(0.0),
        };

        let rotation = match self.exclusive(&ROTATION_KEYS)? {
            Some(("omega_rad_s", v, at)) => Grid::single(parse_float("omega_rad_s", v, at)?),
            Some(("omega_GHz", v, at)) => Grid::single(parse_float("omega_GHz", v, at)? * 1e9),
            Some((key, v, at)) => parse_grid(key, v, at)?,
            None => Grid::single(0.0),
        };

        let temperatures_mk = match self.get("temperature_mK") {
            Some((v, at)) => {
                let ts = parse_list(v, |s| parse_float("temperature_mK", s, at))?;
                if ts.is_empty() {
                    return Err(malformed("temperature_mK", at, "empty list"));
                }
                if ts.iter().any(|&t| t < 0.0) {
                    return Err(malformed("temperature_mK", at, "temperatures must be >= 0"));
                }
                ts
            }
            None => vec![0.0],
        };

        let (electrons, at) = self
            .get("electrons")
            .ok_or(ConfigError::Missing { key: "electrons" })?;
        let electrons = match electrons.parse::<u32>() {
            Ok(n) if n >= 1 => n,
            _ => {
                return Err(malformed(
                    "electrons",
                    at,
                    format!("expected a positive integer, got `{electrons}`"),
                ))
            }
        };

        let outputs = match self.get("outputs") {
            Some((v, at)) => {
                let mut outs = parse_list(v, |s| {
                    Output::parse(s)
                        .ok_or_else(|| malformed("outputs", at, format!("unknown output `{s}`")))
                })?;
                if outs.is_empty() {
                    return Err(malformed("outputs", at, "empty list"));
                }
                outs.sort();
                outs.dedup();
                outs
            }
            None => DEFAULT_OUTPUTS.to_vec(),
        };

        let m_list = match self.get("m_list") {
            Some((v, at)) => {
                let mut ms = Vec::new();
                for item in v.split(',').map(str::trim) {
                    ms.extend(parse_levels(item).map_err(|r| malformed("m_list", at, r))?);
                }
                if ms.is_empty() {
                    return Err(malformed("m_list", at, "empty list"));
                }
                Some(ms)
            }
            None => None,
        };

        Ok(SweepSpec {
            radius_nm,
            mass_ratio,
            flux,
            rotation,
            temperatures_mk,
            electrons,
            outputs,
            m_list,
        })
    }
}

fn malformed(key: &str, at: Location, reason: impl Into<String>) -> ConfigError {
    ConfigError::Malformed {
        at,
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_float(key: &str, s: &str, at: Location) -> Result<f64, ConfigError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(malformed(key, at, format!("`{s}` is not a finite number"))),
    }
}

fn parse_grid(key: &str, s: &str, at: Location) -> Result<Grid, ConfigError> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let [start, stop, count] = parts[..] else {
        return Err(malformed(
            key,
            at,
            format!("expected start:stop:count, got `{s}`"),
        ));
    };
    let start = parse_float(key, start, at)?;
    let stop = parse_float(key, stop, at)?;
    let count = count
        .parse::<usize>()
        .map_err(|_| malformed(key, at, format!("`{count}` is not a grid count")))?;
    Grid::new(start, stop, count).map_err(|r| malformed(key, at, r))
}

fn parse_list<T>(
    s: &str,
    item: impl Fn(&str) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(item)
        .collect()
}

/// `m` or an inclusive range `a..b`.
fn parse_levels(item: &str) -> Result<Vec<i64>, String> {
    if item.is_empty() {
        return Ok(Vec::new());
    }
    let int = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| format!("`{s}` is not an integer"))
    };
    match item.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (int(a)?, int(b)?);
            if b < a {
                return Err(format!("empty range `{item}`"));
            }
            if b - a > 100_000 {
                return Err(format!("range `{item}` is too long"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![int(item)?]),
    }
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<SweepSpec, ConfigError> {
    RawConfig::parse(text)?.into_spec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_period_recipe_parses() {
        let spec = parse_config(
            "radius_nm = 400\nflux_grid = 0:2:401\nelectrons = 10\ntemperature_mK = 0,1\n",
        )
        .unwrap();
        assert_eq!(spec.row_count(), 802);
        assert_eq!(spec.electrons, 10);
        assert_eq!(spec.temperatures_mk, vec![0.0, 1.0]);
        assert_eq!(spec.outputs, DEFAULT_OUTPUTS.to_vec());
    }

    #[test]
    fn duplicate_key_names_both_lines() {
        let err =
            parse_config("radius_nm = 400\nelectrons = 1\n# note\nradius_nm = 100\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::DuplicateKey {
                at: Location::Line(4),
                key: "radius_nm".into(),
                first: Location::Line(1),
            }
        );
        assert!(err.to_string().contains("line 4"));
    }

    #[test]
    fn ghz_and_rad_per_second_agree() {
        let a = parse_config("radius_nm = 400\nelectrons = 1\nomega_GHz = 1.0\n").unwrap();
        let b = parse_config("radius_nm = 400\nelectrons = 1\nomega_rad_s = 1.0e9\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_kinds() {
        type Expect = fn(&ConfigError) -> bool;
        let cases: [(&str, Expect); 9] = [
            ("radius_nm = 400\nelectrons = 1\ncolour = red\n", |e| {
                matches!(
                    e,
                    ConfigError::UnknownKey {
                        at: Location::Line(3),
                        ..
                    }
                )
            }),
            ("radius_nm = 4x0\nelectrons = 1\n", |e| {
                matches!(
                    e,
                    ConfigError::Malformed {
                        at: Location::Line(1),
                        ..
                    }
                )
            }),
            ("electrons = 1\n", |e| {
                matches!(e, ConfigError::Missing { key: "radius_nm" })
            }),
            ("radius_nm = 400\n", |e| {
                matches!(e, ConfigError::Missing { key: "electrons" })
            }),
            (
                "radius_nm = 400\nelectrons = 1\nfield_T = 0.1\nflux_grid = 0:1:3\n",
                |e| {
                    matches!(
                        e,
                        ConfigError::Conflict {
                            at: Location::Line(4),
                            other_at: Location::Line(3),
                            ..
                        }
                    )
                },
            ),
            (
                "radius_nm = 400\nelectrons = 1\nomega_GHz = 1\nomega_rad_s = 1\n",
                |e| matches!(e, ConfigError::Conflict { .. }),
            ),
            ("radius_nm = 400\nelectrons = 1\nflux_grid = 1:0:3\n", |e| {
                matches!(e, ConfigError::Malformed { .. })
            }),
            ("radius_nm = 400\nelectrons = 0\n", |e| {
                matches!(e, ConfigError::Malformed { .. })
            }),
            ("radius_nm 400\n", |e| {
                matches!(
                    e,
                    ConfigError::Syntax {
                        at: Location::Line(1),
                        ..
                    }
                )
            }),
        ];
        for (text, check) in cases {
            let err = parse_config(text).unwrap_err();
            assert!(check(&err), "{text:?} -> {err:?}");
        }
    }

    #[test]
    fn comments_and_levels() {
        let spec = parse_config(
            "# header\nradius_nm = 100 # nm\nelectrons = 1\noutputs = energy\nm_list = -3..-1, 0, 2..3\n",
        )
        .unwrap();
        assert_eq!(spec.m_list, Some(vec![-3, -2, -1, 0, 2, 3]));
        assert_eq!(spec.outputs, vec![Output::Energy]);
    }

    #[test]
    fn flags_win_over_file() {
        let mut raw = RawConfig::parse("radius_nm = 400\nelectrons = 1\nfield_T = 0.01\n").unwrap();
        raw.set_flag("radius_nm", "100").unwrap();
        raw.set_flag("flux_grid", "0:1:5").unwrap();
        let spec = raw.into_spec().unwrap();
        assert_eq!(spec.radius_nm, 100.0);
        assert_eq!(
            spec.flux,
            FluxAxis::Reduced(Grid::new(0.0, 1.0, 5).unwrap())
        );
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = Grid::new(-1e9, 1e9, 3).unwrap();
        assert_eq!(g.values(), vec![-1e9, 0.0, 1e9]);
        let g = Grid::new(0.0, 2.0, 401).unwrap();
        let v = g.values();
        assert_eq!(v[0], 0.0);
        assert_eq!(v[400], 2.0);
        assert_eq!(v[200], 1.0);
        assert_eq!(Grid::new(3.0, 5.0, 1).unwrap().values(), vec![3.0]);
    }
}
