//! Mode frequencies, ion separation and the expansion parameter ξ for a few
//! species in the same trap, plus the ξ ∝ ν_z^(1/3) scaling for Ca-40.
//!
//! cargo run --example trap_spectrum

use std::f64::consts::PI;

use ionkerr::{derive_spectrum, IonSpecies, PhysicalConstants, TrapConfig};

fn main() -> ionkerr::Result<()> {
    let consts = PhysicalConstants::CODATA_2018;
    let trap = TrapConfig::from_hz(5e6, 1e6)?;

    println!("{:<8} {:>14} {:>14} {:>12} {:>12}", "species", "omega_r/2pi", "omega_s/2pi", "z0 [um]", "xi");
    for name in ["Be-9", "Mg-24", "Ca-40", "Sr-88", "Yb-171"] {
        let species = IonSpecies::by_name(name, &consts)?;
        let s = derive_spectrum(&species, &trap, &consts)?;
        println!(
            "{name:<8} {:>14.6e} {:>14.6e} {:>12.4} {:>12.4e}",
            s.omega_r / (2.0 * PI),
            s.omega_s / (2.0 * PI),
            s.z0 * 1e6,
            s.xi
        );
    }

    println!("\nCa-40 at nu_perp = 5 MHz:");
    let ca = IonSpecies::calcium_40();
    for nu_z in [0.5e6, 1e6, 2e6, 4e6] {
        let s = derive_spectrum(&ca, &TrapConfig::from_hz(5e6, nu_z)?, &consts)?;
        println!(
            "  nu_z = {nu_z:.1e} Hz  xi = {:.6e}  xi/nu_z^(1/3) = {:.6e}  r = {:.3}",
            s.xi,
            s.xi / nu_z.cbrt(),
            s.ratio_r
        );
    }
    Ok(())
}
