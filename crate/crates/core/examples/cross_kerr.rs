//! Closed-form cross-Kerr coefficient for Ca-40: both bracket forms, the
//! stretch-frequency shift per rocking phonon, and behaviour around the
//! 2ω_r = ω_s resonance.
//!
//! cargo run --example cross_kerr

use std::f64::consts::PI;

use ionkerr::analytics::{chi, chi_dimensionless, delta_omega_s, KerrFormula};
use ionkerr::{derive_spectrum, IonSpecies, PhysicalConstants, TrapConfig};

fn main() -> ionkerr::Result<()> {
    let consts = PhysicalConstants::CODATA_2018;
    let ca = IonSpecies::calcium_40();
    let spectrum = derive_spectrum(&ca, &TrapConfig::from_hz(5e6, 1e6)?, &consts)?;

    let paper = chi(&spectrum, KerrFormula::Paper)?;
    let roos = chi(&spectrum, KerrFormula::Roos)?;
    println!("Ca-40, nu_z = 1 MHz, nu_perp = 5 MHz");
    println!("  chi/2pi (leading term 1/2): {:+.6} Hz", paper.chi_over_2pi);
    println!("  chi/2pi (leading term 1):   {:+.6} Hz", roos.chi_over_2pi);
    println!("  ratio: {:.6}", roos.chi / paper.chi);

    println!("\nstretch frequency shift vs rocking occupation:");
    let base = delta_omega_s(0, 0, &spectrum)?;
    for n in 0..4 {
        let d = delta_omega_s(n, 0, &spectrum)?;
        println!("  n_x = {n}: (delta_omega_s - offset)/2pi = {:+.6} Hz", (d - base) / (2.0 * PI));
    }

    println!("\nchi/(xi omega_z) across r (resonance at r = sqrt(7)/2 = {:.6}):", 7f64.sqrt() / 2.0);
    for r in [1.1, 1.25, 1.3, 1.35, 1.5, 2.0, 5.0, 10.0] {
        println!(
            "  r = {r:<5} paper {:+.6e}  roos {:+.6e}",
            chi_dimensionless(r, 1.0, KerrFormula::Paper)?,
            chi_dimensionless(r, 1.0, KerrFormula::Roos)?
        );
    }
    Ok(())
}
