//! Residuals, z-scores and χ² of measured χ against both closed forms, using
//! the bundled synthetic data set (generated from the leading-term-½ formula
//! with Gaussian noise of the stated σ).
//!
//! cargo run --example compare_data [path/to/data.csv]

use std::fs::File;
use std::path::PathBuf;

use ionkerr::io::read_experiment_csv;
use ionkerr::io::report::compare_records;
use ionkerr::trap::DEFAULT_RESONANCE_GUARD;
use ionkerr::{IonSpecies, PhysicalConstants};

fn main() -> ionkerr::Result<()> {
    let path = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic_noisy.csv")
    });
    let records = read_experiment_csv(File::open(&path)?, false)?;
    let report = compare_records(
        &records,
        &IonSpecies::calcium_40(),
        5e6,
        &PhysicalConstants::CODATA_2018,
        DEFAULT_RESONANCE_GUARD,
    )?;
    print!("{}", report.render_text());
    Ok(())
}
