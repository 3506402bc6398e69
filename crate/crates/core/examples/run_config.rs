//! Parse a `key = value` run configuration and evaluate χ at its trap and
//! over its sweep.
//!
//! cargo run --example run_config

use ionkerr::analytics::{linear_grid, sweep_chi, FormulaSelection, KerrFormula};
use ionkerr::io::parse_config;
use ionkerr::io::report::chi_report;
use ionkerr::trap::DEFAULT_RESONANCE_GUARD;
use ionkerr::PhysicalConstants;

const CONFIG: &str = "\
# Sr-88 in a 4.5 MHz radial trap
species.name = Sr-88
trap.nu_z_hz = 0.8e6
trap.nu_perp_hz = 4.5e6
sweep.start_hz = 0.4e6
sweep.stop_hz = 1.6e6
sweep.steps = 4
oracle.cutoffs = 12,8,12
";

fn main() -> ionkerr::Result<()> {
    let consts = PhysicalConstants::CODATA_2018;
    let cfg = parse_config(CONFIG)?;
    println!("canonical form:\n{}", cfg.to_config_string());

    let species = cfg.species.to_species(&consts)?;
    let report = chi_report(&species, &cfg.trap.to_trap()?, FormulaSelection::Both, &consts, DEFAULT_RESONANCE_GUARD)?;
    print!("{}", report.render_text());

    if let Some(sw) = cfg.sweep {
        println!("\nsweep:");
        let grid = linear_grid(sw.start_hz, sw.stop_hz, sw.steps);
        for row in sweep_chi(&species, cfg.trap.nu_perp_hz, &grid, FormulaSelection::Paper, &consts) {
            match row.value(KerrFormula::Paper) {
                Some(v) => println!("  {:.3e} Hz: {v:+.6} Hz", row.nu_z_hz),
                None => println!("  {:.3e} Hz: {}", row.nu_z_hz, row.error.unwrap_or_default()),
            }
        }
    }
    Ok(())
}
