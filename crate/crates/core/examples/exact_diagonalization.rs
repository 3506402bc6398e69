//! Exact diagonalization of H0 + V3 + V4 in a truncated Fock box, dressed
//! state assignment, and the small-ξ extrapolation of χ.
//!
//! cargo run --release --example exact_diagonalization

use ionkerr::analytics::{chi_dimensionless, KerrFormula};
use ionkerr::oracle::{assign_dressed, diagonalize, extrapolate_chi, DEFAULT_CUTOFFS, DEFAULT_XI_LADDER};
use ionkerr::pt::kerr_stencil;
use ionkerr::Mode;

fn main() -> ionkerr::Result<()> {
    let r = 5.0;
    let cutoffs = DEFAULT_CUTOFFS;
    let spectrum = diagonalize(r, 1e-3, cutoffs)?;
    println!(
        "cutoffs {cutoffs}: {} states in {} parity sectors, orthonormality defect {:.1e}",
        spectrum.basis().dimension(),
        spectrum.sector_count(),
        spectrum.orthonormality_defect()
    );
    let assignment = assign_dressed(&spectrum, &kerr_stencil(Mode::X), 0.5)?;
    for (state, level) in &assignment.0 {
        println!("  {state}: E = {:.12}  overlap^2 = {:.6}", level.energy, level.overlap_sq);
    }

    let fit = extrapolate_chi(r, cutoffs, &DEFAULT_XI_LADDER, 0.5)?;
    println!("\nxi ladder:");
    for (xi, chi) in &fit.points {
        println!("  xi = {xi:.0e}: chi_num/xi = {:.9}", chi / xi);
    }
    let paper = chi_dimensionless(r, 1.0, KerrFormula::Paper)?;
    let roos = chi_dimensionless(r, 1.0, KerrFormula::Roos)?;
    println!("slope {:.9}, curvature {:.4}, residual {:.2e}", fit.slope, fit.curvature, fit.residual);
    println!("closed form {paper:.9} (relative gap {:.2e})", (fit.slope - paper).abs() / paper.abs());
    println!("leading-term-1 form {roos:.9} (ratio to slope {:.4})", roos / fit.slope);
    Ok(())
}
