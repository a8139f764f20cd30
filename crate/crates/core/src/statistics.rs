//! Fermi-Dirac statistics at fixed electron number.
//!
//! Spinless: each angular quantum number holds at most one electron.

use crate::error::{Error, Result};
use crate::model::CONSTANTS;
use crate::spectrum::Spectrum;

/// Required accuracy of Σf against the target electron count.
pub const ELECTRON_COUNT_TOLERANCE: f64 = 1e-10;

/// Half-width of the initial bisection bracket beyond the extreme levels,
/// in units of k_B T.
const BRACKET_MARGIN_KT: f64 = 50.0;

/// Bisection stops once the bracket is narrower than this fraction of k_B T.
const BRACKET_RESOLUTION_KT: f64 = 1e-14;

const MAX_BISECTIONS: usize = 4096;

/// Exponent beyond which the occupation saturates to 0 or 1.
const EXP_CUTOFF: f64 = 700.0;

/// Relative tolerance for treating two energies as degenerate at T = 0.
const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Fermi-Dirac occupation of a level at `energy` for chemical potential `mu`.
///
/// At `temperature == 0` this is the step function, with value ½ exactly at
/// `energy == mu`.
pub fn fermi_occupation(energy: f64, mu: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return if energy < mu {
            1.0
        } else if energy > mu {
            0.0
        } else {
            0.5
        };
    }
    let x = (energy - mu) / (CONSTANTS.boltzmann * temperature);
    if x > EXP_CUTOFF {
        0.0
    } else if x < -EXP_CUTOFF {
        1.0
    } else {
        1.0 / (x.exp() + 1.0)
    }
}

/// Occupations of a spectrum window together with the chemical potential
/// that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    chemical_potential: f64,
    temperature: f64,
    electron_count: f64,
    m_lo: i64,
    m_hi: i64,
    // indexed by m - m_lo
    occupations: Vec<f64>,
}

impl ThermalState {
    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn electron_count(&self) -> f64 {
        self.electron_count
    }

    pub fn window(&self) -> (i64, i64) {
        (self.m_lo, self.m_hi)
    }

    pub fn occupation(&self, m: i64) -> Option<f64> {
        if m < self.m_lo || m > self.m_hi {
            return None;
        }
        Some(self.occupations[(m - self.m_lo) as usize])
    }

    /// Occupations in ascending `m` order.
    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    /// Σf over the window.
    pub fn total_occupation(&self) -> f64 {
        self.occupations.iter().sum()
    }

    pub(crate) fn check_window(&self, spectrum: &Spectrum) -> Result<()> {
        let (spectrum_lo, spectrum_hi) = spectrum.window();
        if (self.m_lo, self.m_hi) != (spectrum_lo, spectrum_hi) {
            return Err(Error::WindowMismatch {
                state_lo: self.m_lo,
                state_hi: self.m_hi,
                spectrum_lo,
                spectrum_hi,
            });
        }
        Ok(())
    }
}

/// Σf − N, evaluated as (electrons above μ) − (holes below μ) + (levels below
/// μ − N). Near-unity occupations never enter, so the sign stays exact even
/// where Σf rounds to N.
fn excess_electrons(energies: &[f64], mu: f64, temperature: f64, electrons: f64) -> f64 {
    let mut below = 0usize;
    let mut particles = 0.0;
    let mut holes = 0.0;
    for &e in energies {
        if e < mu {
            below += 1;
            holes += fermi_occupation(mu, e, temperature);
        } else {
            particles += fermi_occupation(e, mu, temperature);
        }
    }
    (below as f64 - electrons) + (particles - holes)
}

fn check_electrons(electrons: f64, capacity: usize) -> Result<()> {
    if !(electrons.is_finite() && electrons > 0.0) {
        return Err(Error::invalid(
            "electrons",
            format!("must be positive, got {electrons}"),
        ));
    }
    if electrons > capacity as f64 {
        return Err(Error::Capacity {
            electrons,
            capacity,
            deficit: electrons - capacity as f64,
        });
    }
    Ok(())
}

/// Chemical potential that places `electrons` electrons on the given levels
/// at `temperature > 0`, found by bisection on the monotone map μ ↦ Σf − N.
pub fn chemical_potential(energies: &[f64], electrons: f64, temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::invalid(
            "temperature",
            format!("bisection needs a positive temperature, got {temperature}"),
        ));
    }
    check_electrons(electrons, energies.len())?;

    let kt = CONSTANTS.boltzmann * temperature;
    let (e_min, e_max) = energies
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    let mut lo = e_min - BRACKET_MARGIN_KT * kt;
    let mut hi = e_max + BRACKET_MARGIN_KT * kt;

    // Run the bracket down to a width far below k_B T instead of stopping at
    // the first midpoint inside tolerance, so that equivalent inputs land on
    // the same μ.
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= BRACKET_RESOLUTION_KT * kt {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess_electrons(energies, mid, temperature, electrons) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = lo + 0.5 * (hi - lo);
    let residual = excess_electrons(energies, mu, temperature, electrons).abs();
    if residual >= ELECTRON_COUNT_TOLERANCE {
        return Err(Error::NoConvergence { residual });
    }
    Ok(mu)
}

/// Solves the chemical potential on a spectrum window at `temperature > 0`
/// and populates the occupations.
pub fn solve_chemical_potential(
    spectrum: &Spectrum,
    electrons: f64,
    temperature: f64,
) -> Result<ThermalState> {
    // Sum in level order so that relabelled spectra (l' -> l' + 1) accumulate
    // identically.
    let sorted: Vec<f64> = spectrum.levels().iter().map(|l| l.energy).collect();
    let mu = chemical_potential(&sorted, electrons, temperature)?;
    let (m_lo, m_hi) = spectrum.window();
    let occupations = spectrum
        .energies_by_m()
        .iter()
        .map(|&e| fermi_occupation(e, mu, temperature))
        .collect();
    Ok(ThermalState {
        chemical_potential: mu,
        temperature,
        electron_count: electrons,
        m_lo,
        m_hi,
        occupations,
    })
}

/// Ground-state filling: levels are filled in ascending energy. A partially
/// filled degenerate group shares its electrons equally.
pub fn zero_temperature_occupation(spectrum: &Spectrum, electrons: f64) -> Result<ThermalState> {
    let levels = spectrum.levels();
    check_electrons(electrons, levels.len())?;
    let scale = spectrum.params().energy_unit();
    let degenerate =
        |a: f64, b: f64| (a - b).abs() <= DEGENERACY_TOLERANCE * a.abs().max(b.abs()).max(scale);

    let (m_lo, m_hi) = spectrum.window();
    let mut occupations = vec![0.0; levels.len()];
    let mut remaining = electrons;
    let mut mu = levels[0].energy;
    let mut start = 0;
    while remaining > 0.0 && start < levels.len() {
        let mut end = start + 1;
        while end < levels.len() && degenerate(levels[end].energy, levels[start].energy) {
            end += 1;
        }
        let group = (end - start) as f64;
        let share = if remaining >= group {
            1.0
        } else {
            remaining / group
        };
        for level in &levels[start..end] {
            occupations[(level.m - m_lo) as usize] = share;
        }
        mu = levels[end - 1].energy;
        remaining = if share == 1.0 { remaining - group } else { 0.0 };
        start = end;
    }
    Ok(ThermalState {
        chemical_potential: mu,
        temperature: 0.0,
        electron_count: electrons,
        m_lo,
        m_hi,
        occupations,
    })
}

/// Thermal state for the spectrum's own electron count and temperature.
pub fn equilibrium(spectrum: &Spectrum) -> Result<ThermalState> {
    let params = spectrum.params();
    let electrons = f64::from(params.electrons());
    if params.temperature() == 0.0 {
        zero_temperature_occupation(spectrum, electrons)
    } else {
        solve_chemical_potential(spectrum, electrons, params.temperature())
    }
}

/// U = Σ E_m f_m (J).
pub fn internal_energy(spectrum: &Spectrum, state: &ThermalState) -> Result<f64> {
    state.check_window(spectrum)?;
    Ok(spectrum
        .energies_by_m()
        .iter()
        .zip(state.occupations())
        .map(|(e, f)| e * f)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RingParams, MICRO_EV};
    use crate::spectrum::{build_spectrum, DEFAULT_OCCUPANCY_FLOOR};

    fn ring(r: f64, electrons: u32, temperature: f64) -> RingParams {
        RingParams::new(r)
            .unwrap()
            .with_electrons(electrons)
            .unwrap()
            .with_temperature(temperature)
            .unwrap()
    }

    #[test]
    fn fermi_function_points() {
        assert_eq!(fermi_occupation(1e-24, 1e-24, 1e-3), 0.5);
        let t = 2e-3;
        let kt = CONSTANTS.boltzmann * t;
        let f = fermi_occupation(3e-25 + kt, 3e-25, t);
        assert!((f - 0.268_941_421_369_995).abs() < 1e-12);
        assert_eq!(fermi_occupation(-1.0, 0.0, 0.0), 1.0);
        assert_eq!(fermi_occupation(1.0, 0.0, 0.0), 0.0);
        assert_eq!(fermi_occupation(0.0, 0.0, 0.0), 0.5);
    }

    #[test]
    fn fermi_function_saturates_without_overflow() {
        let t = 1e-6;
        let kt = CONSTANTS.boltzmann * t;
        assert_eq!(fermi_occupation(1000.0 * kt, 0.0, t), 0.0);
        assert_eq!(fermi_occupation(-1000.0 * kt, 0.0, t), 1.0);
        assert!(fermi_occupation(699.0 * kt, 0.0, t) > 0.0);
    }

    #[test]
    fn half_filled_single_level_pins_mu() {
        let t = 1e-3;
        let e0 = 2.5e-25;
        let mu = chemical_potential(&[e0], 0.5, t).unwrap();
        assert!((mu - e0).abs() <= 1e-9 * CONSTANTS.boltzmann * t);
    }

    #[test]
    fn particle_hole_symmetric_pair() {
        let delta = 4e-25;
        for t in [1e-4, 1e-3, 1e-2] {
            let mu = chemical_potential(&[-delta, delta], 1.0, t).unwrap();
            assert!(mu.abs() <= 1e-10 * delta, "T={t}: mu={mu}");
        }
    }

    #[test]
    fn ten_electrons_half_fill_fifth_shell() {
        let p = ring(400e-9, 10, 1e-3);
        let s = build_spectrum(&p, DEFAULT_OCCUPANCY_FLOOR).unwrap();
        let state = solve_chemical_potential(&s, 10.0, 1e-3).unwrap();
        let mu = state.chemical_potential() / MICRO_EV;
        assert!((mu - 5.953_097_056_492).abs() < 1e-6, "{mu}");
        assert!(mu > s.energy(4).unwrap() / MICRO_EV);
        assert!((state.total_occupation() - 10.0).abs() < 1e-10);
    }

    #[test]
    fn capacity_and_domain_errors() {
        match chemical_potential(&[0.0, 1e-25], 3.0, 1e-3) {
            Err(Error::Capacity {
                deficit, capacity, ..
            }) => {
                assert_eq!(capacity, 2);
                assert_eq!(deficit, 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(chemical_potential(&[0.0], 0.5, 0.0).is_err());
        assert!(chemical_potential(&[0.0], 0.0, 1e-3).is_err());
    }

    #[test]
    fn zero_temperature_single_electron() {
        let s = build_spectrum(&ring(400e-9, 1, 0.0), DEFAULT_OCCUPANCY_FLOOR).unwrap();
        let state = zero_temperature_occupation(&s, 1.0).unwrap();
        let (lo, hi) = s.window();
        for m in lo..=hi {
            let expected = if m == 0 { 1.0 } else { 0.0 };
            assert_eq!(state.occupation(m), Some(expected));
        }
        assert_eq!(state.chemical_potential(), 0.0);
    }

    #[test]
    fn zero_temperature_open_and_closed_shells() {
        let s = build_spectrum(&ring(400e-9, 10, 0.0), DEFAULT_OCCUPANCY_FLOOR).unwrap();
        let state = zero_temperature_occupation(&s, 10.0).unwrap();
        for m in -4..=4 {
            assert_eq!(state.occupation(m), Some(1.0));
        }
        assert_eq!(state.occupation(5), Some(0.5));
        assert_eq!(state.occupation(-5), Some(0.5));
        assert_eq!(state.occupation(6), Some(0.0));
        assert_eq!(state.chemical_potential(), s.energy(5).unwrap());

        let closed = zero_temperature_occupation(&s, 9.0).unwrap();
        assert!(closed.occupations().iter().all(|&f| f == 0.0 || f == 1.0));
        assert_eq!(closed.total_occupation(), 9.0);
    }

    #[test]
    fn internal_energy_examples() {
        let s1 = build_spectrum(&ring(400e-9, 1, 0.0), DEFAULT_OCCUPANCY_FLOOR).unwrap();
        let st1 = equilibrium(&s1).unwrap();
        assert_eq!(internal_energy(&s1, &st1).unwrap(), 0.0);

        let s9 = build_spectrum(&ring(400e-9, 9, 0.0), DEFAULT_OCCUPANCY_FLOOR).unwrap();
        let st9 = equilibrium(&s9).unwrap();
        let u = internal_energy(&s9, &st9).unwrap() / MICRO_EV;
        assert!((u - 14.287_432_935_581).abs() < 1e-9, "{u}");

        assert!(matches!(
            internal_energy(&s1, &st9),
            Err(Error::WindowMismatch { .. })
        ));
    }

    #[test]
    fn internal_energy_even_in_flux() {
        for n in [1, 4, 10] {
            for t in [0.0, 1e-3] {
                let p = ring(400e-9, n, t);
                let u = |l: f64| {
                    let s = build_spectrum(&p.with_reduced_flux(l).unwrap(), 1e-12).unwrap();
                    let st = equilibrium(&s).unwrap();
                    internal_energy(&s, &st).unwrap()
                };
                let (a, b) = (u(0.3), u(-0.3));
                assert!((a - b).abs() <= 1e-10 * a.abs().max(p.energy_unit()));
            }
        }
    }

    #[test]
    fn excess_is_strictly_increasing() {
        let p = ring(400e-9, 6, 1e-3).with_reduced_flux(0.37).unwrap();
        let s = build_spectrum(&p, DEFAULT_OCCUPANCY_FLOOR).unwrap();
        let energies: Vec<f64> = s.levels().iter().map(|l| l.energy).collect();
        let kt = CONSTANTS.boltzmann * 1e-3;
        let mut previous = f64::NEG_INFINITY;
        for i in 0..400 {
            let mu = energies[0] - 5.0 * kt + f64::from(i) * 0.05 * kt;
            let n = excess_electrons(&energies, mu, 1e-3, 6.0);
            assert!(n > previous);
            previous = n;
        }
    }

    #[test]
    fn low_temperature_matches_ground_state() {
        // closed shell at l' = 0 and a non-degenerate filling at l' = 0.2
        for (n, l) in [(9u32, 0.0), (10, 0.2), (4, 0.2)] {
            let p = ring(400e-9, n, 1e-6).with_reduced_flux(l).unwrap();
            let s = build_spectrum(&p, DEFAULT_OCCUPANCY_FLOOR).unwrap();
            let warm = solve_chemical_potential(&s, f64::from(n), 1e-6).unwrap();
            let cold = zero_temperature_occupation(&s, f64::from(n)).unwrap();
            for (a, b) in warm.occupations().iter().zip(cold.occupations()) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }
}
