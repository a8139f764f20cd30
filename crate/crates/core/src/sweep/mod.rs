//! Parameter sweeps over (temperature, rotation, flux) and their CSV output.

mod config;
mod csv;

pub use config::{
    parse_config, ConfigError, FluxAxis, Grid, Location, Output, RawConfig, SweepSpec,
    DEFAULT_M_LIST, DEFAULT_OUTPUTS, KEYS,
};
pub use csv::{emit_csv, format_number};

use thiserror::Error;

use crate::error::Error;
use crate::model::{derive, RingParams, MICRO_EV};
use crate::observables::{total_current, total_magnetization};
use crate::spectrum::{build_spectrum, energy_level, DEFAULT_OCCUPANCY_FLOOR};
use crate::statistics::equilibrium;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid base parameters: {0}")]
    Params(#[source] Error),
    #[error(
        "grid point T = {temperature_mk} mK, Ω = {rotation} rad/s, flux = {flux} failed: {source}"
    )]
    Point {
        temperature_mk: f64,
        rotation: f64,
        /// l′ for flux grids, B (T) for a fixed field.
        flux: f64,
        #[source]
        source: Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: &'static str,
}

impl Column {
    fn new(name: impl Into<String>, unit: &'static str) -> Column {
        Column {
            name: name.into(),
            unit,
        }
    }

    /// `name_unit`
    pub fn header(&self) -> String {
        format!("{}_{}", self.name, self.unit)
    }
}

/// Rows ordered with temperature outermost, then rotation, then flux.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }
}

/// How grid points are scheduled. Row order never depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    Sequential,
    /// Rayon data-parallel map; identical to `Sequential` when the crate is
    /// built without the `parallel` feature.
    Parallel,
}

impl Default for Schedule {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Schedule::Parallel
        } else {
            Schedule::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    temperature_mk: f64,
    rotation: f64,
    flux: f64,
}

fn columns(spec: &SweepSpec) -> Vec<Column> {
    let mut cols = vec![
        Column::new("temperature", "mK"),
        Column::new("omega", "rad_s"),
        Column::new("flux", "phi0"),
    ];
    for output in &spec.outputs {
        match output {
            Output::Energy => {
                for m in spec.levels() {
                    cols.push(Column::new(format!("energy_m{m}"), "ueV"));
                }
            }
            Output::Current => cols.push(Column::new("current", "A")),
            Output::Magnetization => cols.push(Column::new("magnetization", "JperT")),
            Output::ChemicalPotential => cols.push(Column::new("chemical_potential", "ueV")),
        }
    }
    cols
}

fn grid_points(spec: &SweepSpec) -> Vec<GridPoint> {
    let mut points = Vec::with_capacity(spec.row_count());
    let fluxes = match spec.flux {
        FluxAxis::Field(b) => vec![b],
        FluxAxis::Reduced(g) => g.values(),
    };
    for &temperature_mk in &spec.temperatures_mk {
        for rotation in spec.rotation.values() {
            for &flux in &fluxes {
                points.push(GridPoint {
                    temperature_mk,
                    rotation,
                    flux,
                });
            }
        }
    }
    points
}

fn evaluate(spec: &SweepSpec, base: &RingParams, point: GridPoint) -> Result<Vec<f64>, Error> {
    let with_flux = match spec.flux {
        FluxAxis::Field(_) => base.with_field(point.flux)?,
        FluxAxis::Reduced(_) => base.with_reduced_flux(point.flux)?,
    };
    let params = with_flux
        .with_rotation(point.rotation)?
        .with_temperature(point.temperature_mk / 1e3)?;
    let reduced = match spec.flux {
        FluxAxis::Field(_) => derive(&params).reduced_flux,
        FluxAxis::Reduced(_) => point.flux,
    };

    let mut row = vec![point.temperature_mk, point.rotation, reduced];
    let thermal = spec.outputs.iter().any(|o| *o != Output::Energy);
    let solved = if thermal {
        let spectrum = build_spectrum(&params, DEFAULT_OCCUPANCY_FLOOR)?;
        let state = equilibrium(&spectrum)?;
        Some((spectrum, state))
    } else {
        None
    };
    for output in &spec.outputs {
        match (output, &solved) {
            (Output::Energy, _) => {
                row.extend(
                    spec.levels()
                        .iter()
                        .map(|&m| energy_level(m, &params) / MICRO_EV),
                );
            }
            (Output::Current, Some((s, st))) => row.push(total_current(s, st)?),
            (Output::Magnetization, Some((s, st))) => row.push(total_magnetization(s, st)?),
            (Output::ChemicalPotential, Some((_, st))) => {
                row.push(st.chemical_potential() / MICRO_EV)
            }
            (_, None) => unreachable!("thermal outputs imply a solved state"),
        }
    }
    Ok(row)
}

/// Runs the sweep with the default schedule.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    run_sweep_with(spec, Schedule::default())
}

pub fn run_sweep_with(spec: &SweepSpec, schedule: Schedule) -> Result<SweepTable, SweepError> {
    let base = spec.base_params().map_err(SweepError::Params)?;
    let points = grid_points(spec);
    let eval = |p: &GridPoint| evaluate(spec, &base, *p);

    let results: Vec<Result<Vec<f64>, Error>> = match schedule {
        #[cfg(feature = "parallel")]
        Schedule::Parallel => {
            use rayon::prelude::*;
            points.par_iter().map(eval).collect()
        }
        _ => points.iter().map(eval).collect(),
    };

    // Report the first failure in grid order so errors are schedule-independent.
    let mut rows = Vec::with_capacity(results.len());
    for (point, result) in points.iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(source) => {
                return Err(SweepError::Point {
                    temperature_mk: point.temperature_mk,
                    rotation: point.rotation,
                    flux: point.flux,
                    source,
                })
            }
        }
    }
    Ok(SweepTable {
        columns: columns(spec),
        rows,
    })
}
