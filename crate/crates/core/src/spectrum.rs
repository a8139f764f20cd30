//! Closed-form single-particle spectrum.
//!
//! The eigenenergy of angular quantum number `m` is
//! `E_m = ħ²/(2 m r²)·(m − l′ − λΩ)² − ½ m Ω² r²`: a family of identical
//! parabolas in the reduced flux `l′`, shifted by the rotation `λΩ` and
//! lowered by the centrifugal term.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{cancellation_rotation, derive, DerivedQuantities, RingParams, CONSTANTS};
use crate::statistics;

/// Default edge-occupancy certificate for [`build_spectrum`].
pub const DEFAULT_OCCUPANCY_FLOOR: f64 = 1e-12;

/// Largest window (number of levels) [`build_spectrum`] will try.
pub const MAX_WINDOW_LEVELS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub m: i64,
    /// Eigenenergy (J).
    pub energy: f64,
}

/// Eigenenergy of level `m` at an explicitly given reduced flux; every other
/// input comes from `params`.
pub fn energy_at_flux(m: i64, reduced_flux: f64, params: &RingParams) -> f64 {
    let d = derive(params);
    energy_from(m, reduced_flux, d.rotation_shift, params)
}

fn energy_from(m: i64, reduced_flux: f64, rotation_shift: f64, params: &RingParams) -> f64 {
    let j = m as f64 - reduced_flux - rotation_shift;
    let r = params.radius();
    let omega = params.rotation();
    params.energy_unit() * j * j - 0.5 * params.mass() * omega * omega * r * r
}

/// Eigenenergy of level `m` (J).
pub fn energy_level(m: i64, params: &RingParams) -> f64 {
    let d = derive(params);
    energy_from(m, d.reduced_flux, d.rotation_shift, params)
}

/// The two terms of the regrouped eigenvalue,
/// `ħ²/(2 m r²)·(m − l′)²` and `−ħΩ(m − l′)`, in joules.
pub fn energy_terms(m: i64, params: &RingParams) -> (f64, f64) {
    let k = m as f64 - derive(params).reduced_flux;
    (
        params.energy_unit() * k * k,
        -CONSTANTS.hbar * params.rotation() * k,
    )
}

/// Eigenenergy evaluated through the regrouped form; algebraically equal to
/// [`energy_level`].
pub fn energy_level_regrouped(m: i64, params: &RingParams) -> f64 {
    let (flux_term, rotation_term) = energy_terms(m, params);
    flux_term + rotation_term
}

/// Reduced flux at which the parabola of level `m` has its minimum, `m − λΩ`.
pub fn parabola_minimum(m: i64, params: &RingParams) -> f64 {
    m as f64 - derive(params).rotation_shift
}

/// Lowest energy any level can reach, `−½ m Ω² r²` (J).
pub fn global_energy_minimum(params: &RingParams) -> f64 {
    let r = params.radius();
    let omega = params.rotation();
    -0.5 * params.mass() * omega * omega * r * r
}

/// Eigenenergy at the rotation that cancels the field, `ħ²/(2 m r²)·(m² − l′²)`.
/// `params.rotation()` is ignored.
pub fn energy_at_cancellation(m: i64, params: &RingParams) -> Result<f64> {
    cancellation_rotation(params)?;
    let l = derive(params).reduced_flux;
    let m = m as f64;
    Ok(params.energy_unit() * (m * m - l * l))
}

/// `j_m = m − (l′ + λΩ)`; the sign of `m` covers both branches.
pub fn effective_angular_momentum(m: i64, params: &RingParams) -> f64 {
    m as f64 - derive(params).parabola_center()
}

/// A contiguous window of levels `[m_lo, m_hi]` sorted by energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    params: RingParams,
    derived: DerivedQuantities,
    m_lo: i64,
    m_hi: i64,
    // indexed by m - m_lo
    energies: Vec<f64>,
    levels: Vec<EnergyLevel>,
    boundary_occupancy: f64,
}

impl Spectrum {
    fn raw(params: &RingParams, m_lo: i64, m_hi: i64) -> Spectrum {
        let derived = derive(params);
        let energies: Vec<f64> = (m_lo..=m_hi)
            .map(|m| energy_from(m, derived.reduced_flux, derived.rotation_shift, params))
            .collect();
        let mut levels: Vec<EnergyLevel> = (m_lo..=m_hi)
            .zip(energies.iter())
            .map(|(m, &energy)| EnergyLevel { m, energy })
            .collect();
        levels.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap_or(Ordering::Equal)
                .then(a.m.cmp(&b.m))
        });
        Spectrum {
            params: *params,
            derived,
            m_lo,
            m_hi,
            energies,
            levels,
            boundary_occupancy: f64::NAN,
        }
    }

    /// Spectrum on an explicit window. The edge-occupancy certificate is
    /// computed for `params.electrons()` at `params.temperature()`.
    pub fn with_window(params: &RingParams, m_lo: i64, m_hi: i64) -> Result<Spectrum> {
        if m_lo > m_hi {
            return Err(Error::invalid(
                "window",
                format!("lower edge {m_lo} exceeds upper edge {m_hi}"),
            ));
        }
        let levels = (m_hi - m_lo) as u64 + 1;
        if levels > MAX_WINDOW_LEVELS as u64 {
            return Err(Error::invalid(
                "window",
                format!("{levels} levels exceed the cap of {MAX_WINDOW_LEVELS}"),
            ));
        }
        let mut spectrum = Spectrum::raw(params, m_lo, m_hi);
        spectrum.boundary_occupancy = spectrum.edge_occupancy()?;
        Ok(spectrum)
    }

    fn edge_occupancy(&self) -> Result<f64> {
        let state = statistics::equilibrium(self)?;
        let lo = state.occupation(self.m_lo).unwrap_or(0.0);
        let hi = state.occupation(self.m_hi).unwrap_or(0.0);
        Ok(lo.max(hi))
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedQuantities {
        &self.derived
    }

    /// Levels in ascending energy, ties broken by ascending `m`.
    pub fn levels(&self) -> &[EnergyLevel] {
        &self.levels
    }

    /// Inclusive `(m_lo, m_hi)`.
    pub fn window(&self) -> (i64, i64) {
        (self.m_lo, self.m_hi)
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energy(&self, m: i64) -> Option<f64> {
        if m < self.m_lo || m > self.m_hi {
            return None;
        }
        Some(self.energies[(m - self.m_lo) as usize])
    }

    /// Energies in ascending `m` order.
    pub fn energies_by_m(&self) -> &[f64] {
        &self.energies
    }

    /// Largest Fermi occupation of the two edge levels.
    pub fn boundary_occupancy(&self) -> f64 {
        self.boundary_occupancy
    }
}

/// Builds a window centred on the parabola family and widens it until both
/// edge levels hold less than `occupancy_floor` electrons.
///
/// The initial half-width is `2N + 3`, which leaves at least `N + 2` levels
/// on each side of the zero-temperature Fermi level. The half-width doubles
/// on every failed certificate.
pub fn build_spectrum(params: &RingParams, occupancy_floor: f64) -> Result<Spectrum> {
    if !(occupancy_floor > 0.0 && occupancy_floor <= 1e-6) {
        return Err(Error::invalid(
            "occupancy_floor",
            format!("must lie in (0, 1e-6], got {occupancy_floor}"),
        ));
    }
    let center = derive(params).parabola_center();
    if center.abs() > 1e15 {
        return Err(Error::invalid(
            "parabola_center",
            format!("l' + λΩ = {center} is out of integer range"),
        ));
    }
    let center = (center + 0.5).floor() as i64;
    let mut half = 2 * i64::from(params.electrons()) + 3;
    let mut last_edge = f64::NAN;
    loop {
        let levels = (2 * half + 1) as usize;
        if levels > MAX_WINDOW_LEVELS {
            return Err(Error::Truncation {
                levels,
                edge_occupancy: last_edge,
            });
        }
        let mut spectrum = Spectrum::raw(params, center - half, center + half);
        let edge = spectrum.edge_occupancy()?;
        if edge < occupancy_floor {
            spectrum.boundary_occupancy = edge;
            return Ok(spectrum);
        }
        last_edge = edge;
        half *= 2;
    }
}
