//! Physical constants, ring configuration and derived quantities.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fundamental constants in SI units (CODATA 2018 exact definitions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Elementary charge (C).
    pub electron_charge: f64,
    /// Bare electron mass (kg).
    pub electron_mass: f64,
    /// Boltzmann constant (J/K).
    pub boltzmann: f64,
    /// Planck constant (J·s).
    pub planck: f64,
}

const PLANCK: f64 = 6.626_070_15e-34;

// h is exact in SI 2018; hbar follows from it so that h = 2π·hbar holds
// to rounding. The printed CODATA value 1.054571817e-34 is this number
// truncated to ten digits.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: PLANCK / (2.0 * PI),
    electron_charge: 1.602_176_634e-19,
    electron_mass: 9.109_383_701_5e-31,
    boltzmann: 1.380_649e-23,
    planck: PLANCK,
};

/// One microelectronvolt in joules.
pub const MICRO_EV: f64 = CONSTANTS.electron_charge * 1e-6;

/// Magnetic flux quantum h/e (Wb).
pub fn flux_quantum() -> f64 {
    CONSTANTS.planck / CONSTANTS.electron_charge
}

/// Physical configuration of the ring.
///
/// Fields are validated on construction, so every operation downstream of a
/// `RingParams` value is infallible with respect to the parameter domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingParams {
    radius: f64,
    mass: f64,
    rotation: f64,
    field: f64,
    temperature: f64,
    electrons: u32,
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}

impl RingParams {
    /// A ring of the given radius (m) with bare electron mass, no field, no
    /// rotation, zero temperature and a single electron.
    pub fn new(radius: f64) -> Result<Self> {
        if finite("radius", radius)? <= 0.0 {
            return Err(Error::invalid(
                "radius",
                format!("must be positive, got {radius}"),
            ));
        }
        Ok(RingParams {
            radius,
            mass: CONSTANTS.electron_mass,
            rotation: 0.0,
            field: 0.0,
            temperature: 0.0,
            electrons: 1,
        })
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        if finite("mass", mass)? <= 0.0 {
            return Err(Error::invalid(
                "mass",
                format!("must be positive, got {mass}"),
            ));
        }
        self.mass = mass;
        Ok(self)
    }

    /// Signed angular velocity of the frame (rad/s).
    pub fn with_rotation(mut self, rotation: f64) -> Result<Self> {
        self.rotation = finite("rotation", rotation)?;
        Ok(self)
    }

    /// Signed magnetic flux density (T).
    pub fn with_field(mut self, field: f64) -> Result<Self> {
        self.field = finite("field", field)?;
        Ok(self)
    }

    /// Sets the field so that the enclosed flux equals `reduced_flux` flux quanta.
    pub fn with_reduced_flux(self, reduced_flux: f64) -> Result<Self> {
        let reduced_flux = finite("reduced_flux", reduced_flux)?;
        self.with_field(reduced_flux * flux_quantum() / (PI * self.radius * self.radius))
    }

    pub fn with_temperature(mut self, temperature: f64) -> Result<Self> {
        if finite("temperature", temperature)? < 0.0 {
            return Err(Error::invalid(
                "temperature",
                format!("must be non-negative, got {temperature}"),
            ));
        }
        self.temperature = temperature;
        Ok(self)
    }

    pub fn with_electrons(mut self, electrons: u32) -> Result<Self> {
        if electrons == 0 {
            return Err(Error::invalid("electrons", "must be at least 1"));
        }
        self.electrons = electrons;
        Ok(self)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn electrons(&self) -> u32 {
        self.electrons
    }

    /// ħ²/(2 m r²): the kinetic energy scale of the ring (J).
    pub fn energy_unit(&self) -> f64 {
        let hbar = CONSTANTS.hbar;
        hbar * hbar / (2.0 * self.mass * self.radius * self.radius)
    }

    /// eħ/(2π m r²): current carried per unit of effective angular momentum (A).
    pub fn current_unit(&self) -> f64 {
        CONSTANTS.electron_charge * CONSTANTS.hbar
            / (2.0 * PI * self.mass * self.radius * self.radius)
    }

    /// eħ/(2m): magnetic moment per unit of effective angular momentum (J/T).
    /// Equals the Bohr magneton for the bare electron mass.
    pub fn moment_unit(&self) -> f64 {
        CONSTANTS.electron_charge * CONSTANTS.hbar / (2.0 * self.mass)
    }

    /// Enclosed area π r² (m²).
    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// Quantities derived from [`RingParams`] that the rest of the crate consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Enclosed magnetic flux π r² B (Wb).
    pub flux: f64,
    /// Enclosed flux in units of h/e.
    pub reduced_flux: f64,
    /// m r²/ħ (s).
    pub lambda: f64,
    /// Dimensionless displacement of the energy parabolas, λΩ.
    pub rotation_shift: f64,
    /// |eB|/m (rad/s).
    pub cyclotron: f64,
}

impl DerivedQuantities {
    /// Centre of the parabola family, l′ + λΩ.
    pub fn parabola_center(&self) -> f64 {
        self.reduced_flux + self.rotation_shift
    }
}

pub fn derive(params: &RingParams) -> DerivedQuantities {
    let r = params.radius;
    let flux = PI * r * r * params.field;
    let lambda = params.mass * r * r / CONSTANTS.hbar;
    DerivedQuantities {
        flux,
        reduced_flux: flux / flux_quantum(),
        lambda,
        rotation_shift: params.mass * r * r * params.rotation / CONSTANTS.hbar,
        cyclotron: (CONSTANTS.electron_charge * params.field).abs() / params.mass,
    }
}

/// Rotation rate −eB/(2m) at which the frame rotation cancels the field in
/// the kinetic term.
pub fn cancellation_rotation(params: &RingParams) -> Result<f64> {
    if params.field == 0.0 {
        return Err(Error::UndefinedCancellation);
    }
    Ok(-(CONSTANTS.electron_charge * params.field / params.mass) / 2.0)
}
