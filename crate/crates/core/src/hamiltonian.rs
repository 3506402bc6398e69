//! Quantized relative-motion Hamiltonian H = H0 + V3 + V4 in units ħ = ω_z = 1.
//!
//! The anharmonic terms are generated from the classical Taylor expansion of
//! the trap-plus-Coulomb potential about the equilibrium separation,
//!
//! ```text
//! V3 = (m ω_s² / z0)  [ (x² + y²) u − (2/3) u³ ]
//! V4 = (m ω_s² / z0²) [ (x² + y²)²/4 + (2/3) u⁴ − 2 (x² + y²) u² ]
//! ```
//!
//! by substituting x = √(ħ/4mω_r)(a + a†), y = √(ħ/4mω_r)(b + b†),
//! u = √(ħ/4mω_s)(c + c†) and normal-ordering. The quadrature lengths carry
//! the relative-motion effective mass 2m. With z0 as the length unit the
//! ion mass becomes m z0² ω_z / ħ = 1/(2ξ), so a term of degree i in the
//! rocking quadratures and k in the stretch quadrature has the prefactor
//!
//! ```text
//! ω_s²/2 · ξ^(d/2 − 1) · 2^(−d/2) · ω_r^(−i/2) · ω_s^(−k/2),   d = i + k,
//! ```
//!
//! a function of (r, ξ) alone. For the cubic cross term it equals ζ.

use crate::error::Result;
use crate::fock::{Mode, OperatorSum};
use crate::trap::DimensionlessParams;

/// H0, V3 and V4 in canonical (normal-ordered) form.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperOperators {
    pub params: DimensionlessParams,
    pub h0: OperatorSum,
    pub v3: OperatorSum,
    pub v4: OperatorSum,
}

impl PaperOperators {
    /// H0 + V3 + V4.
    pub fn full(&self) -> OperatorSum {
        (&(&self.h0 + &self.v3) + &self.v4).normalize()
    }

    pub fn perturbation(&self) -> OperatorSum {
        (&self.v3 + &self.v4).normalize()
    }
}

fn prefactor(p: &DimensionlessParams, rocking_degree: i32, stretch_degree: i32) -> f64 {
    let (wr, ws) = (p.omega_r(), p.omega_s());
    let d = f64::from(rocking_degree + stretch_degree);
    0.5 * ws * ws
        * p.xi.powf(0.5 * d - 1.0)
        * 2f64.powf(-0.5 * d)
        * wr.powf(-0.5 * f64::from(rocking_degree))
        * ws.powf(-0.5 * f64::from(stretch_degree))
}

/// ω_r(n_x + n_y + 1) + ω_s(n_s + ½)
pub fn harmonic_hamiltonian(p: &DimensionlessParams) -> OperatorSum {
    let (wr, ws) = (p.omega_r(), p.omega_s());
    let rocking = OperatorSum::number(Mode::X) + OperatorSum::number(Mode::Y) + OperatorSum::identity();
    let stretch = OperatorSum::number(Mode::S) + OperatorSum::scalar(0.5);
    (rocking * wr + stretch * ws).normalize()
}

/// (a + a†)² + (b + b†)², the dimensionless x² + y².
fn transverse_square() -> OperatorSum {
    OperatorSum::quadrature(Mode::X).pow(2) + OperatorSum::quadrature(Mode::Y).pow(2)
}

pub fn cubic_potential(p: &DimensionlessParams) -> OperatorSum {
    let u = OperatorSum::quadrature(Mode::S);
    let cross = &transverse_square() * &u;
    let axial = u.pow(3);
    (cross * prefactor(p, 2, 1) + axial * (-2.0 / 3.0 * prefactor(p, 0, 3))).normalize()
}

pub fn quartic_potential(p: &DimensionlessParams) -> OperatorSum {
    let s = transverse_square();
    let u2 = OperatorSum::quadrature(Mode::S).pow(2);
    let transverse = s.pow(2) * (0.25 * prefactor(p, 4, 0));
    let axial = u2.pow(2) * (2.0 / 3.0 * prefactor(p, 0, 4));
    let cross = (&s * &u2) * (-2.0 * prefactor(p, 2, 2));
    (transverse + axial + cross).normalize()
}

/// Builds (H0, V3, V4) for the dimensionless trap ratio `r` = ω_⊥/ω_z and
/// anharmonicity `xi`.
pub fn build_paper_operators(r: f64, xi: f64) -> Result<PaperOperators> {
    let params = DimensionlessParams::new(r, xi)?;
    Ok(PaperOperators {
        params,
        h0: harmonic_hamiltonian(&params),
        v3: cubic_potential(&params),
        v4: quartic_potential(&params),
    })
}
