//! Closed-form energy shifts and cross-Kerr coefficients.
//!
//! All functions take a [`ModeSpectrum`] and return SI quantities (J, rad/s);
//! passing [`ModeSpectrum::natural`] gives the same results in units of
//! ħ = ω_z = 1.
//!
//! The cubic shift is written with the denominator 8ω_r² − 2ω_s². One printed
//! form of it reads 8ω_r² − 2ω_s, which is dimensionally inconsistent; the
//! squared form is the one that combines with the quartic shift into the
//! total shift and into χ, and it is what the perturbation engine produces.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::trap::{
    derive_spectrum, DimensionlessParams, IonSpecies, ModeSpectrum, PhysicalConstants, TrapConfig,
    DEFAULT_RESONANCE_GUARD,
};

/// Which closed form for χ to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KerrFormula {
    /// Bracket [½ + (ω_s²/2)/(4ω_r² − ω_s²)], from the complete second-order
    /// treatment of the cubic term.
    Paper,
    /// Earlier published bracket [1 + (ω_s²/2)/(4ω_r² − ω_s²)].
    Roos,
}

impl KerrFormula {
    pub const ALL: [KerrFormula; 2] = [KerrFormula::Paper, KerrFormula::Roos];

    fn leading_bracket_term(self) -> f64 {
        match self {
            KerrFormula::Paper => 0.5,
            KerrFormula::Roos => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KerrFormula::Paper => "paper",
            KerrFormula::Roos => "roos",
        }
    }
}

impl fmt::Display for KerrFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KerrFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(KerrFormula::Paper),
            "roos" => Ok(KerrFormula::Roos),
            _ => Err(Error::validation(format!("unknown formula {s:?} (expected paper or roos)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KerrResult {
    /// rad/s
    pub chi: f64,
    /// Hz
    pub chi_over_2pi: f64,
    pub formula: KerrFormula,
    pub spectrum: ModeSpectrum,
}

/// ħω_s ξ (ω_z/ω_r), the energy scale common to all shifts.
fn shift_scale(s: &ModeSpectrum) -> f64 {
    s.hbar * s.omega_s * s.xi * (s.omega_z / s.omega_r)
}

/// ω_s²/(8ω_r² − 2ω_s²)
fn resonant_ratio(s: &ModeSpectrum, guard: f64) -> Result<f64> {
    s.check_resonance(guard)?;
    let (wr2, ws2) = (s.omega_r * s.omega_r, s.omega_s * s.omega_s);
    Ok(ws2 / (8.0 * wr2 - 2.0 * ws2))
}

fn rocking_factor(nx: u32, ny: u32) -> f64 {
    f64::from(nx) + f64::from(ny) + 1.0
}

/// First-order cross shift of the quartic term:
/// −ħω_s ξ (ω_z/ω_r)(n_s + ½)(n_x + n_y + 1).
pub fn epsilon4(nx: u32, ny: u32, ns: u32, spectrum: &ModeSpectrum) -> f64 {
    -shift_scale(spectrum) * (f64::from(ns) + 0.5) * rocking_factor(nx, ny)
}

/// Second-order cross shift of the cubic term.
pub fn epsilon3(nx: u32, ny: u32, ns: u32, spectrum: &ModeSpectrum) -> Result<f64> {
    let k = resonant_ratio(spectrum, DEFAULT_RESONANCE_GUARD)?;
    let ns = f64::from(ns);
    Ok(-shift_scale(spectrum) * (k * ns - 0.5 * (ns + 0.5)) * rocking_factor(nx, ny))
}

/// Combined cross shift, written in its own closed form (not as a sum).
pub fn epsilon_total(nx: u32, ny: u32, ns: u32, spectrum: &ModeSpectrum) -> Result<f64> {
    let k = resonant_ratio(spectrum, DEFAULT_RESONANCE_GUARD)?;
    let ns = f64::from(ns);
    Ok(-shift_scale(spectrum) * (0.5 * (ns + 0.5) + k * ns) * rocking_factor(nx, ny))
}

pub fn chi_with_guard(spectrum: &ModeSpectrum, formula: KerrFormula, guard: f64) -> Result<KerrResult> {
    spectrum.check_resonance(guard)?;
    let s = spectrum;
    let (wr2, ws2) = (s.omega_r * s.omega_r, s.omega_s * s.omega_s);
    let bracket = formula.leading_bracket_term() + 0.5 * ws2 / (4.0 * wr2 - ws2);
    let chi = -s.omega_s * s.xi * (s.omega_z / s.omega_r) * bracket;
    Ok(KerrResult {
        chi,
        chi_over_2pi: chi / (2.0 * PI),
        formula,
        spectrum: *spectrum,
    })
}

pub fn chi(spectrum: &ModeSpectrum, formula: KerrFormula) -> Result<KerrResult> {
    chi_with_guard(spectrum, formula, DEFAULT_RESONANCE_GUARD)
}

/// χ = −ω_s ξ (ω_z/ω_r)[½ + (ω_s²/2)/(4ω_r² − ω_s²)]
pub fn chi_paper(spectrum: &ModeSpectrum) -> Result<KerrResult> {
    chi(spectrum, KerrFormula::Paper)
}

/// Same as [`chi_paper`] with a leading bracket term of 1.
pub fn chi_roos(spectrum: &ModeSpectrum) -> Result<KerrResult> {
    chi(spectrum, KerrFormula::Roos)
}

/// χ/ω_z for a dimensionless configuration.
pub fn chi_dimensionless(r: f64, xi: f64, formula: KerrFormula) -> Result<f64> {
    let s = ModeSpectrum::natural(DimensionlessParams::new(r, xi)?)?;
    Ok(chi(&s, formula)?.chi)
}

/// Stretch-mode frequency shift [ε(n_s + 1) − ε(n_s)]/ħ for the given rocking
/// occupations, in rad/s. Includes the rocking-independent offset from the
/// zero-point term of (n_x + n_y + 1).
pub fn delta_omega_s(nx: u32, ny: u32, spectrum: &ModeSpectrum) -> Result<f64> {
    let upper = epsilon_total(nx, ny, 1, spectrum)?;
    let lower = epsilon_total(nx, ny, 0, spectrum)?;
    Ok((upper - lower) / spectrum.hbar)
}

/// Formulas to evaluate in a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaSelection {
    Paper,
    Roos,
    Both,
}

impl FormulaSelection {
    pub fn includes(self, f: KerrFormula) -> bool {
        matches!(
            (self, f),
            (FormulaSelection::Both, _)
                | (FormulaSelection::Paper, KerrFormula::Paper)
                | (FormulaSelection::Roos, KerrFormula::Roos)
        )
    }

    pub fn formulas(self) -> impl Iterator<Item = KerrFormula> {
        KerrFormula::ALL.into_iter().filter(move |&f| self.includes(f))
    }
}

impl FromStr for FormulaSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(FormulaSelection::Paper),
            "roos" => Ok(FormulaSelection::Roos),
            "both" => Ok(FormulaSelection::Both),
            _ => Err(Error::validation(format!("unknown formula {s:?} (expected paper, roos or both)"))),
        }
    }
}

impl fmt::Display for FormulaSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaSelection::Paper => "paper",
            FormulaSelection::Roos => "roos",
            FormulaSelection::Both => "both",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub nu_z_hz: f64,
    pub chi_paper_hz: Option<f64>,
    pub chi_roos_hz: Option<f64>,
    /// Set when the grid point is outside the model's validity.
    pub error: Option<String>,
}

impl SweepRow {
    pub fn value(&self, f: KerrFormula) -> Option<f64> {
        match f {
            KerrFormula::Paper => self.chi_paper_hz,
            KerrFormula::Roos => self.chi_roos_hz,
        }
    }
}

fn sweep_point(
    species: &IonSpecies,
    nu_perp_hz: f64,
    nu_z_hz: f64,
    selection: FormulaSelection,
    consts: &PhysicalConstants,
    guard: f64,
) -> Result<(Option<f64>, Option<f64>)> {
    let trap = TrapConfig::from_hz(nu_perp_hz, nu_z_hz)?;
    let spectrum = derive_spectrum(species, &trap, consts)?;
    let eval = |f: KerrFormula| -> Result<Option<f64>> {
        if selection.includes(f) {
            Ok(Some(chi_with_guard(&spectrum, f, guard)?.chi_over_2pi))
        } else {
            Ok(None)
        }
    };
    Ok((eval(KerrFormula::Paper)?, eval(KerrFormula::Roos)?))
}

/// χ/2π over a grid of axial frequencies at fixed ν_⊥. Invalid grid points
/// produce a row with `error` set instead of aborting the sweep.
pub fn sweep_chi(
    species: &IonSpecies,
    nu_perp_hz: f64,
    nu_z_grid: &[f64],
    selection: FormulaSelection,
    consts: &PhysicalConstants,
) -> Vec<SweepRow> {
    sweep_chi_with_guard(species, nu_perp_hz, nu_z_grid, selection, consts, DEFAULT_RESONANCE_GUARD)
}

pub fn sweep_chi_with_guard(
    species: &IonSpecies,
    nu_perp_hz: f64,
    nu_z_grid: &[f64],
    selection: FormulaSelection,
    consts: &PhysicalConstants,
    guard: f64,
) -> Vec<SweepRow> {
    nu_z_grid
        .par_iter()
        .map(|&nu_z_hz| match sweep_point(species, nu_perp_hz, nu_z_hz, selection, consts, guard) {
            Ok((chi_paper_hz, chi_roos_hz)) => SweepRow {
                nu_z_hz,
                chi_paper_hz,
                chi_roos_hz,
                error: None,
            },
            Err(e) => SweepRow {
                nu_z_hz,
                chi_paper_hz: None,
                chi_roos_hz: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

/// `steps` evenly spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn natural(r: f64, xi: f64) -> ModeSpectrum {
        ModeSpectrum::natural(DimensionlessParams::new(r, xi).unwrap()).unwrap()
    }

    fn ca40(nu_z: f64, nu_perp: f64) -> ModeSpectrum {
        let trap = TrapConfig::from_hz(nu_perp, nu_z).unwrap();
        derive_spectrum(&IonSpecies::calcium_40(), &trap, &PhysicalConstants::default()).unwrap()
    }

    #[test]
    fn epsilon4_vacuum() {
        let xi = 1e-3;
        let s = natural(5.0, xi);
        let expected = -3f64.sqrt() * xi / 24f64.sqrt() * 0.5;
        assert!(rel(epsilon4(0, 0, 0, &s), expected) < 1e-14);
        assert!(rel(epsilon4(2, 1, 0, &s), 4.0 * expected) < 1e-14);
    }

    #[test]
    fn epsilon3_vacuum_is_quarter() {
        let xi = 1e-3;
        let s = natural(5.0, xi);
        let expected = 3f64.sqrt() * xi / 24f64.sqrt() * 0.25;
        assert!(rel(epsilon3(0, 0, 0, &s).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn bracket_at_r5() {
        let s = natural(5.0, 1.0);
        let chi = chi_paper(&s).unwrap().chi;
        let bracket = -chi / (3f64.sqrt() / 24f64.sqrt());
        assert!(rel(bracket, 0.5 + 1.5 / 93.0) < 1e-14);
        assert!((bracket - 0.516_129).abs() < 1e-6);
    }

    #[test]
    fn ca40_chi_is_minus_2_9_hz() {
        let s = ca40(1.0e6, 5.0e6);
        let paper = chi_paper(&s).unwrap();
        let roos = chi_roos(&s).unwrap();
        assert!((paper.chi_over_2pi - (-2.9)).abs() < 0.1, "{}", paper.chi_over_2pi);
        assert!((roos.chi_over_2pi - (-5.8)).abs() < 0.1, "{}", roos.chi_over_2pi);
        assert!(rel(paper.chi_over_2pi, paper.chi / (2.0 * PI)) < 1e-15);
    }

    #[test]
    fn roos_to_paper_ratio() {
        let s = natural(5.0, 1e-5);
        let ratio = chi_roos(&s).unwrap().chi / chi_paper(&s).unwrap().chi;
        assert!(rel(ratio, (1.0 + 1.5 / 93.0) / (0.5 + 1.5 / 93.0)) < 1e-13);
        assert!((ratio - 1.9688).abs() < 1e-4);
        let far = natural(1e4, 1e-5);
        let ratio = chi_roos(&far).unwrap().chi / chi_paper(&far).unwrap().chi;
        assert!((ratio - 2.0).abs() < 1e-6);
    }

    #[test]
    fn chi_decays_like_inverse_ratio() {
        let a = chi_paper(&natural(1e3, 1e-5)).unwrap().chi;
        let b = chi_paper(&natural(2e3, 1e-5)).unwrap().chi;
        assert!((a / b - 2.0).abs() < 1e-5);
    }

    #[test]
    fn near_resonance_rejected() {
        let s = natural(7f64.sqrt() / 2.0, 1e-5);
        assert!(matches!(chi_paper(&s), Err(Error::NearResonance { .. })));
        assert!(matches!(epsilon3(0, 0, 1, &s), Err(Error::NearResonance { .. })));
    }

    #[test]
    fn stretch_shift_per_rocking_phonon_is_chi() {
        let s = ca40(1.0e6, 5.0e6);
        let chi = chi_paper(&s).unwrap().chi;
        let d0 = delta_omega_s(0, 0, &s).unwrap();
        let d1 = delta_omega_s(1, 0, &s).unwrap();
        assert!(rel(d1 - d0, chi) < 1e-10);
        assert!(rel(delta_omega_s(2, 1, &s).unwrap(), delta_omega_s(0, 3, &s).unwrap()) < 1e-14);
    }

    #[test]
    fn sweep_grid_and_error_rows() {
        let ca = IonSpecies::calcium_40();
        let k = PhysicalConstants::default();
        let rows = sweep_chi(&ca, 5.0e6, &[0.8e6, 1.0e6, 1.2e6], FormulaSelection::Both, &k);
        assert_eq!(rows.len(), 3);
        let paper: Vec<f64> = rows.iter().map(|r| r.chi_paper_hz.unwrap()).collect();
        assert!(paper.iter().all(|&c| c < 0.0));
        assert!(paper[0].abs() < paper[1].abs() && paper[1].abs() < paper[2].abs());
        for r in &rows {
            let q = r.chi_roos_hz.unwrap() / r.chi_paper_hz.unwrap();
            assert!(q > 1.9 && q < 2.0);
        }
        let rows = sweep_chi(&ca, 5.0e6, &[1.0e6, 6.0e6], FormulaSelection::Paper, &k);
        assert!(rows[0].error.is_none() && rows[0].chi_roos_hz.is_none());
        assert!(rows[1].error.is_some() && rows[1].chi_paper_hz.is_none());
        assert!(sweep_chi(&ca, 5.0e6, &[], FormulaSelection::Both, &k).is_empty());
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(linear_grid(1.0, 2.0, 1), vec![1.0]);
        assert_eq!(linear_grid(1.0, 2.0, 3), vec![1.0, 1.5, 2.0]);
        assert!(linear_grid(1.0, 2.0, 0).is_empty());
    }
}
