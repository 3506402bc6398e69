//! Physical inputs and the derived normal-mode spectrum of a two-ion crystal.
//!
//! The relative motion of two identical ions in an anisotropic harmonic trap
//! has a doubly degenerate transverse "rocking" mode at
//! ω_r = √(ω_⊥² − ω_z²) and an axial "stretch" mode at ω_s = √3·ω_z. The
//! anharmonic corrections are controlled by two scales:
//!
//! * ξ = (2ħω_z / α²mc²)^(1/3), a dimensionless number of order 10⁻⁵ for
//!   atomic ions,
//! * ζ = √(ξ ħ² ω_s³ ω_z / 32 ω_r²), the energy scale of the cubic coupling.
//!
//! Everything downstream works in the natural unit system ħ = ω_z = 1, in
//! which a configuration is fully described by r = ω_⊥/ω_z and ξ (see
//! [`DimensionlessParams`]).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative width of the forbidden band around 4ω_r² = ω_s², in units of ω_z².
pub const DEFAULT_RESONANCE_GUARD: f64 = 1e-6;

/// CODATA 2018 values, SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub alpha: f64,
    pub atomic_mass_unit: f64,
    pub elementary_charge: f64,
    pub vacuum_permittivity: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar: 1.054_571_817e-34,
        c: 299_792_458.0,
        alpha: 7.297_352_569_3e-3,
        atomic_mass_unit: 1.660_539_066_60e-27,
        elementary_charge: 1.602_176_634e-19,
        vacuum_permittivity: 8.854_187_812_8e-12,
    };

    /// Coulomb constant for two elementary charges, e²/4πε₀, in J·m.
    pub fn coulomb_energy_length(&self) -> f64 {
        self.elementary_charge.powi(2) / (4.0 * PI * self.vacuum_permittivity)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IonSpecies {
    pub name: String,
    /// Mass of one ion in kg.
    pub mass: f64,
    /// Ion charge in units of e.
    pub charge_multiple: u32,
}

/// Atomic masses (amu) for the species commonly used in ion traps.
const KNOWN_SPECIES: &[(&str, f64)] = &[
    ("Be-9", 9.012_183_1),
    ("Mg-24", 23.985_041_7),
    ("Mg-25", 24.985_836_9),
    ("Ca-40", 39.962_590_9),
    ("Ca-43", 42.958_766_4),
    ("Sr-88", 87.905_612_5),
    ("Ba-138", 137.905_247_2),
    ("Yb-171", 170.936_325_8),
    ("Yb-174", 173.938_866_4),
];

impl IonSpecies {
    pub const CALCIUM_40_AMU: f64 = 39.962_590_9;

    pub fn new(name: impl Into<String>, mass_kg: f64, charge_multiple: u32) -> Result<Self> {
        if !(mass_kg.is_finite() && mass_kg > 0.0) {
            return Err(Error::validation(format!("ion mass must be positive, got {mass_kg}")));
        }
        if charge_multiple == 0 {
            return Err(Error::validation("charge multiple must be at least 1"));
        }
        Ok(Self {
            name: name.into(),
            mass: mass_kg,
            charge_multiple,
        })
    }

    pub fn from_amu(
        name: impl Into<String>,
        mass_amu: f64,
        charge_multiple: u32,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        Self::new(name, mass_amu * consts.atomic_mass_unit, charge_multiple)
    }

    /// Singly charged ion of a tabulated isotope, e.g. `"Ca-40"`.
    pub fn by_name(name: &str, consts: &PhysicalConstants) -> Result<Self> {
        KNOWN_SPECIES
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|&(n, amu)| Self::from_amu(n, amu, 1, consts))
            .unwrap_or_else(|| Err(Error::validation(format!("unknown species {name:?}"))))
    }

    pub fn calcium_40() -> Self {
        Self::by_name("Ca-40", &PhysicalConstants::CODATA_2018).expect("tabulated species")
    }

    pub fn mass_amu(&self, consts: &PhysicalConstants) -> f64 {
        self.mass / consts.atomic_mass_unit
    }

    pub fn known_names() -> impl Iterator<Item = &'static str> {
        KNOWN_SPECIES.iter().map(|(n, _)| *n)
    }
}

/// Angular trap frequencies in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapConfig {
    pub omega_perp: f64,
    pub omega_z: f64,
}

impl TrapConfig {
    pub fn new(omega_perp: f64, omega_z: f64) -> Result<Self> {
        if !(omega_z.is_finite() && omega_z > 0.0) {
            return Err(Error::validation(format!("omega_z must be positive, got {omega_z}")));
        }
        if !omega_perp.is_finite() || omega_perp <= omega_z {
            return Err(Error::DegenerateTrap { omega_perp, omega_z });
        }
        Ok(Self { omega_perp, omega_z })
    }

    /// Builds a trap from linear frequencies ν in Hz.
    pub fn from_hz(nu_perp: f64, nu_z: f64) -> Result<Self> {
        Self::new(2.0 * PI * nu_perp, 2.0 * PI * nu_z)
    }

    pub fn ratio(&self) -> f64 {
        self.omega_perp / self.omega_z
    }
}

/// Derived quantities of a validated (species, trap) pair, SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeSpectrum {
    pub hbar: f64,
    pub omega_z: f64,
    pub omega_perp: f64,
    pub omega_r: f64,
    pub omega_s: f64,
    /// Equilibrium half-separation of the ions.
    pub z0: f64,
    pub xi: f64,
    /// Cubic coupling energy ζ̃·ħω_z.
    pub zeta: f64,
    pub ratio_r: f64,
}

pub fn derive_spectrum(
    species: &IonSpecies,
    trap: &TrapConfig,
    consts: &PhysicalConstants,
) -> Result<ModeSpectrum> {
    let TrapConfig { omega_perp, omega_z } = *trap;
    if omega_perp <= omega_z {
        return Err(Error::DegenerateTrap { omega_perp, omega_z });
    }
    let m = species.mass;
    let hbar = consts.hbar;
    // Z²α replaces α for multiply charged ions; identical to the q = e form otherwise.
    let z_sq = f64::from(species.charge_multiple).powi(2);
    let coupling = z_sq * consts.alpha * hbar * consts.c;

    let z0 = (coupling / (4.0 * m * omega_z * omega_z)).cbrt();
    let omega_r = ((omega_perp - omega_z) * (omega_perp + omega_z)).sqrt();
    let omega_s = 3f64.sqrt() * omega_z;
    let alpha_eff = z_sq * consts.alpha;
    let xi = (2.0 * hbar * omega_z / (alpha_eff * alpha_eff * m * consts.c * consts.c)).cbrt();
    let zeta = zeta_from(xi, hbar, omega_r, omega_s, omega_z);

    Ok(ModeSpectrum {
        hbar,
        omega_z,
        omega_perp,
        omega_r,
        omega_s,
        z0,
        xi,
        zeta,
        ratio_r: omega_perp / omega_z,
    })
}

fn zeta_from(xi: f64, hbar: f64, omega_r: f64, omega_s: f64, omega_z: f64) -> f64 {
    (xi * hbar * hbar * omega_s.powi(3) * omega_z / (32.0 * omega_r * omega_r)).sqrt()
}

impl ModeSpectrum {
    /// The spectrum in natural units ħ = ω_z = 1 with z₀ as the length unit.
    pub fn natural(params: DimensionlessParams) -> Result<Self> {
        let DimensionlessParams { r, xi } = params;
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::DegenerateTrap {
                omega_perp: r,
                omega_z: 1.0,
            });
        }
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(Error::validation(format!("xi must be non-negative, got {xi}")));
        }
        Ok(Self {
            hbar: 1.0,
            omega_z: 1.0,
            omega_perp: r,
            omega_r: params.omega_r(),
            omega_s: params.omega_s(),
            z0: 1.0,
            xi,
            zeta: params.zeta(),
            ratio_r: r,
        })
    }

    /// (4ω_r² − ω_s²)/ω_z², the denominator shared by every closed-form χ.
    pub fn resonance_detuning(&self) -> f64 {
        (4.0 * self.omega_r * self.omega_r - self.omega_s * self.omega_s)
            / (self.omega_z * self.omega_z)
    }

    pub fn check_resonance(&self, guard: f64) -> Result<()> {
        let detuning = self.resonance_detuning();
        if detuning.abs() < guard {
            Err(Error::NearResonance { detuning, guard })
        } else {
            Ok(())
        }
    }

    pub fn dimensionless(&self) -> DimensionlessParams {
        dimensionless_params(self)
    }
}

/// A configuration in units ħ = ω_z = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessParams {
    /// ω_⊥ / ω_z
    pub r: f64,
    pub xi: f64,
}

impl DimensionlessParams {
    pub fn new(r: f64, xi: f64) -> Result<Self> {
        ModeSpectrum::natural(Self { r, xi }).map(|_| Self { r, xi })
    }

    pub fn omega_r(&self) -> f64 {
        ((self.r - 1.0) * (self.r + 1.0)).sqrt()
    }

    pub fn omega_s(&self) -> f64 {
        3f64.sqrt()
    }

    pub fn zeta(&self) -> f64 {
        zeta_from(self.xi, 1.0, self.omega_r(), self.omega_s(), 1.0)
    }
}

pub fn dimensionless_params(spectrum: &ModeSpectrum) -> DimensionlessParams {
    DimensionlessParams {
        r: spectrum.ratio_r,
        xi: spectrum.xi,
    }
}
