use ionkerr::analytics::{chi_dimensionless, KerrFormula};
use ionkerr::oracle::{
    chi_from_spectrum, diagonalize, extract_chi_numeric, extrapolate_chi, DEFAULT_CUTOFFS, DEFAULT_XI_LADDER,
    MIN_CUTOFFS,
};
use ionkerr::{Error, Mode};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn direct_ratio_within_one_percent_at_moderate_xi() {
    let xi = 1e-3;
    let (chi, assignment) = extract_chi_numeric(5.0, xi, DEFAULT_CUTOFFS, 0.5).unwrap();
    let closed = chi_dimensionless(5.0, xi, KerrFormula::Paper).unwrap();
    assert!(rel(chi, closed) < 1e-2, "{chi} vs {closed}");
    assert!(assignment.min_overlap_sq() > 0.99);
}

#[test]
fn rocking_polarization_does_not_matter() {
    let spectrum = diagonalize(5.0, 1e-3, DEFAULT_CUTOFFS).unwrap();
    let (x, _) = chi_from_spectrum(&spectrum, Mode::X, 0.5).unwrap();
    let (y, _) = chi_from_spectrum(&spectrum, Mode::Y, 0.5).unwrap();
    assert!(rel(y, x) < 1e-10, "{x} vs {y}");
}

/// Truncation error falls by orders of magnitude on the first widening from
/// the minimal box, then sits at the eigensolver noise floor.
#[test]
fn cutoff_convergence() {
    let chi_at = |k: u32| extract_chi_numeric(5.0, 1e-3, MIN_CUTOFFS.widened(2 * k), 0.5).unwrap().0;
    let chis: Vec<f64> = (0..4).map(chi_at).collect();
    let first = (chis[1] - chis[0]).abs();
    let second = (chis[2] - chis[1]).abs();
    assert!(second * 10.0 <= first, "{first:e} then {second:e}");
    let beyond_default = (chis[3] - chis[2]).abs();
    assert!(beyond_default < 1e-12, "{beyond_default:e}");
    assert!(beyond_default / chis[2].abs() < 1e-8);
}

#[test]
fn extrapolation_is_deterministic() {
    let a = extrapolate_chi(5.0, DEFAULT_CUTOFFS, &DEFAULT_XI_LADDER, 0.5).unwrap();
    let b = extrapolate_chi(5.0, DEFAULT_CUTOFFS, &DEFAULT_XI_LADDER, 0.5).unwrap();
    assert_eq!(a.slope.to_bits(), b.slope.to_bits());
    for (p, q) in a.points.iter().zip(&b.points) {
        assert_eq!(p.1.to_bits(), q.1.to_bits());
    }
}

#[test]
fn slope_follows_the_half_bracket_not_the_unit_bracket() {
    let fit = extrapolate_chi(5.0, DEFAULT_CUTOFFS, &DEFAULT_XI_LADDER, 0.5).unwrap();
    let paper = chi_dimensionless(5.0, 1.0, KerrFormula::Paper).unwrap();
    let roos = chi_dimensionless(5.0, 1.0, KerrFormula::Roos).unwrap();
    assert!(rel(fit.slope, paper) < 1e-3);
    assert!(rel(fit.slope, roos) > 0.4);
    assert!(fit.residual < 1e-3 * fit.slope.abs());
}

#[test]
fn soft_rocking_mode_at_large_xi_is_ambiguous() {
    let err = extract_chi_numeric(1.05, 1e-2, DEFAULT_CUTOFFS.widened(2), 0.5).unwrap_err();
    assert!(matches!(err, Error::AmbiguousAssignment { .. }), "{err}");
}

#[test]
fn harmonic_limit_is_additive() {
    let spectrum = diagonalize(3.0, 0.0, DEFAULT_CUTOFFS).unwrap();
    let (chi, _) = chi_from_spectrum(&spectrum, Mode::X, 0.5).unwrap();
    assert!(chi.abs() < 1e-14);
}
