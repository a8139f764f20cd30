//! Spinless electron on a one-dimensional ring that rotates at a constant
//! angular velocity while threaded by a uniform perpendicular magnetic field.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] – pinned physical constants, ring parameters and the derived
//!   dimensionless quantities (reduced flux, rotation shift).
//! * [`spectrum`] – closed-form eigenenergies and an occupancy-certified
//!   truncation window over the angular quantum number.
//! * [`statistics`] – Fermi-Dirac occupation at fixed electron number.
//! * [`observables`] – persistent current, magnetization and the
//!   finite-difference residuals that check them.
//! * [`sweep`] – configuration parsing, grid sweeps and CSV output.
//!
//! All internal quantities are SI. Presentation units (μeV) appear only in
//! the sweep output.

pub mod error;
pub mod model;
pub mod observables;
pub mod spectrum;
pub mod statistics;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    cancellation_rotation, derive, flux_quantum, DerivedQuantities, PhysicalConstants, RingParams,
    CONSTANTS, MICRO_EV,
};
pub use observables::{
    byers_yang_residual, level_current, level_moment, magnetization_derivative_residual, observe,
    total_current, total_magnetization, ObservableRecord,
};
pub use spectrum::{
    build_spectrum, effective_angular_momentum, energy_at_cancellation, energy_at_flux,
    energy_level, energy_level_regrouped, energy_terms, global_energy_minimum, parabola_minimum,
    EnergyLevel, Spectrum, DEFAULT_OCCUPANCY_FLOOR,
};
pub use statistics::{
    equilibrium, fermi_occupation, internal_energy, solve_chemical_potential,
    zero_temperature_occupation, ThermalState,
};
