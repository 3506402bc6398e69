//! Plot-ready χ/2π against axial frequency, written as CSV to stdout.
//!
//! cargo run --example frequency_sweep > sweep.csv

use ionkerr::analytics::{linear_grid, FormulaSelection};
use ionkerr::io::report::sweep_csv_string;
use ionkerr::trap::DEFAULT_RESONANCE_GUARD;
use ionkerr::{IonSpecies, PhysicalConstants};

fn main() -> ionkerr::Result<()> {
    let grid = linear_grid(0.5e6, 2.0e6, 16);
    let csv = sweep_csv_string(
        &IonSpecies::calcium_40(),
        5e6,
        &grid,
        FormulaSelection::Both,
        &PhysicalConstants::CODATA_2018,
        DEFAULT_RESONANCE_GUARD,
    )?;
    print!("{csv}");
    Ok(())
}
