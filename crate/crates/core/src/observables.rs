//! Persistent current and magnetization.
//!
//! Every level carries `I_m = eħ/(2π m r²)·j_m` and `M_m = eħ/(2m)·j_m`
//! with `j_m = m − l′ − λΩ`, so `M_m = π r² I_m` holds level by level and,
//! since both totals share the same weighted sum Σ j_m f_m, also in total.
//! The magnetization sign is `M = Σ M_m f_m = −∂U/∂B` at frozen occupations.

use crate::error::{Error, Result};
use crate::model::{derive, flux_quantum, RingParams};
use crate::spectrum::{effective_angular_momentum, energy_at_flux, Spectrum};
use crate::statistics::{internal_energy, ThermalState};

/// Current of level `m` from the Byers-Yang relation (A).
pub fn level_current(m: i64, params: &RingParams) -> f64 {
    params.current_unit() * effective_angular_momentum(m, params)
}

/// Magnetic moment of level `m`, `−∂E_m/∂B` (J/T).
pub fn level_moment(m: i64, params: &RingParams) -> f64 {
    params.moment_unit() * effective_angular_momentum(m, params)
}

/// Σ j_m f_m over the window, accumulated in ascending `m`.
fn weighted_momentum(spectrum: &Spectrum, state: &ThermalState) -> Result<f64> {
    state.check_window(spectrum)?;
    let center = spectrum.derived().parabola_center();
    let (m_lo, _) = spectrum.window();
    Ok(state
        .occupations()
        .iter()
        .zip(m_lo..)
        .map(|(f, m)| (m as f64 - center) * f)
        .sum())
}

/// I = Σ I_m f(E_m) (A).
pub fn total_current(spectrum: &Spectrum, state: &ThermalState) -> Result<f64> {
    Ok(spectrum.params().current_unit() * weighted_momentum(spectrum, state)?)
}

/// M = Σ M_m f(E_m) (J/T).
pub fn total_magnetization(spectrum: &Spectrum, state: &ThermalState) -> Result<f64> {
    Ok(spectrum.params().moment_unit() * weighted_momentum(spectrum, state)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    /// A
    pub total_current: f64,
    /// J/T
    pub total_magnetization: f64,
    /// J
    pub internal_energy: f64,
    /// J
    pub chemical_potential: f64,
}

pub fn observe(spectrum: &Spectrum, state: &ThermalState) -> Result<ObservableRecord> {
    Ok(ObservableRecord {
        total_current: total_current(spectrum, state)?,
        total_magnetization: total_magnetization(spectrum, state)?,
        internal_energy: internal_energy(spectrum, state)?,
        chemical_potential: state.chemical_potential(),
    })
}

/// Deviation of `estimate` from `reference`, relative to `|reference|` but
/// never to less than `unit`. Near-zero references are thereby compared
/// absolutely in multiples of `unit`.
fn scaled_deviation(estimate: f64, reference: f64, unit: f64) -> f64 {
    (estimate - reference).abs() / reference.abs().max(unit)
}

/// Checks the analytic level current against a central difference of the
/// eigenenergy in flux, `−(1/Φ₀)·[E(l′+h) − E(l′−h)]/(2h)`.
///
/// `step` is `h` in flux quanta and must lie in `[1e-9, 1e-3]`. The
/// eigenenergy is exactly quadratic in `l′`, so only rounding remains.
/// The deviation is relative for `|I_m| ≥ eħ/(2π m r²)` and absolute in
/// that unit below it.
pub fn byers_yang_residual(m: i64, params: &RingParams, step: f64) -> Result<f64> {
    if !(1e-9..=1e-3).contains(&step) {
        return Err(Error::invalid(
            "step",
            format!("must lie in [1e-9, 1e-3] flux quanta, got {step}"),
        ));
    }
    let l = derive(params).reduced_flux;
    let upper = energy_at_flux(m, l + step, params);
    let lower = energy_at_flux(m, l - step, params);
    let numeric = -(upper - lower) / (2.0 * step) / flux_quantum();
    Ok(scaled_deviation(
        numeric,
        level_current(m, params),
        params.current_unit(),
    ))
}

/// Checks the total magnetization against `−∂U/∂B` by central difference in
/// the field at frozen occupations.
///
/// `field_step` (T) must lie in `[1e-8, 1e-4]`. The deviation is relative
/// for `|M| ≥ eħ/(2m)` and absolute in that unit below it.
pub fn magnetization_derivative_residual(
    spectrum: &Spectrum,
    state: &ThermalState,
    field_step: f64,
) -> Result<f64> {
    if !(1e-8..=1e-4).contains(&field_step) {
        return Err(Error::invalid(
            "field_step",
            format!("must lie in [1e-8, 1e-4] T, got {field_step}"),
        ));
    }
    state.check_window(spectrum)?;
    let params = spectrum.params();
    let frozen_energy = |field: f64| -> Result<f64> {
        let shifted = params.with_field(field)?;
        let l = derive(&shifted).reduced_flux;
        let (m_lo, _) = spectrum.window();
        Ok(state
            .occupations()
            .iter()
            .zip(m_lo..)
            .map(|(f, m)| energy_at_flux(m, l, &shifted) * f)
            .sum())
    };
    let b = params.field();
    let numeric =
        -(frozen_energy(b + field_step)? - frozen_energy(b - field_step)?) / (2.0 * field_step);
    Ok(scaled_deviation(
        numeric,
        total_magnetization(spectrum, state)?,
        params.moment_unit(),
    ))
}
