use std::fs::File;
use std::path::PathBuf;

use ionkerr::analytics::{linear_grid, FormulaSelection, KerrFormula};
use ionkerr::io::read_experiment_csv;
use ionkerr::io::report::{compare_records, sweep_csv_string, CompareReport};
use ionkerr::trap::DEFAULT_RESONANCE_GUARD;
use ionkerr::{IonSpecies, PhysicalConstants};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn compare(name: &str) -> CompareReport {
    let records = read_experiment_csv(File::open(fixture(name)).unwrap(), false).unwrap();
    compare_records(
        &records,
        &IonSpecies::calcium_40(),
        5e6,
        &PhysicalConstants::CODATA_2018,
        DEFAULT_RESONANCE_GUARD,
    )
    .unwrap()
}

#[test]
fn data_from_half_bracket_formula() {
    let report = compare("synthetic_paper.csv");
    assert_eq!(report.rows.len(), 7);
    // Only the 9-digit rounding of the fixture remains.
    for r in &report.rows {
        assert!(r.residual(KerrFormula::Paper).abs() <= 1e-8 * r.chi_paper_hz.abs());
        assert!(r.residual(KerrFormula::Roos).abs() > 0.4 * r.chi_paper_hz.abs());
    }
    assert!(report.chi_squared(KerrFormula::Paper).unwrap() < 1e-10);
    assert!(report.chi_squared(KerrFormula::Roos).unwrap() > 1e3);
}

#[test]
fn data_from_unit_bracket_formula() {
    let report = compare("synthetic_roos.csv");
    assert!(report.rms_residual(KerrFormula::Roos) < 1e-7);
    assert!(report.rms_residual(KerrFormula::Paper) > 1.0);
    assert!(report.chi_squared(KerrFormula::Roos).unwrap() < report.chi_squared(KerrFormula::Paper).unwrap());
}

#[test]
fn noisy_data_favours_the_generating_formula() {
    let report = compare("synthetic_noisy.csv");
    let n = report.points_with_sigma() as f64;
    let paper = report.chi_squared(KerrFormula::Paper).unwrap();
    assert!(paper < 3.0 * n, "chi^2 {paper} for {n} points");
    assert!(report.chi_squared(KerrFormula::Roos).unwrap() > 10.0 * paper);
}

#[test]
fn sweep_output_reads_back_after_column_rename() {
    let grid = linear_grid(0.6e6, 1.8e6, 5);
    let csv = sweep_csv_string(
        &IonSpecies::calcium_40(),
        5e6,
        &grid,
        FormulaSelection::Paper,
        &PhysicalConstants::CODATA_2018,
        DEFAULT_RESONANCE_GUARD,
    )
    .unwrap();
    let renamed = csv.replacen("chi_paper_hz", "chi_over_2pi_hz", 1);
    let records = read_experiment_csv(renamed.as_bytes(), false).unwrap();
    assert_eq!(records.len(), 5);
    let report = compare_records(
        &records,
        &IonSpecies::calcium_40(),
        5e6,
        &PhysicalConstants::CODATA_2018,
        DEFAULT_RESONANCE_GUARD,
    )
    .unwrap();
    assert!(report.rms_residual(KerrFormula::Paper) < 1e-7);
    assert_eq!(report.chi_squared(KerrFormula::Paper), None);
}
