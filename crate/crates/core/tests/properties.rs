use proptest::prelude::*;

use ionkerr::analytics::{chi, chi_dimensionless, epsilon3, epsilon4, epsilon_total, KerrFormula};
use ionkerr::fock::{lower, raise, Factor, Monomial, OperatorSum, TruncatedBasis};
use ionkerr::hamiltonian::build_paper_operators;
use ionkerr::io::config::{parse_config, RunConfig, SweepSpec, TrapSpec};
use ionkerr::pt::{energy_shift, kerr_coefficient_pt};
use ionkerr::{derive_spectrum, Cutoffs, DimensionlessParams, FockState, IonSpecies, Mode, ModeSpectrum, PhysicalConstants, TrapConfig};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// r in (1.2, 20] at least 0.02 away from the 2ω_r = ω_s resonance.
fn off_resonance_r() -> impl Strategy<Value = f64> {
    (1.2001f64..=20.0).prop_filter("near resonance", |r| (4.0 * r * r - 7.0).abs() > 0.1)
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::X), Just(Mode::Y), Just(Mode::S)]
}

fn factor() -> impl Strategy<Value = Factor> {
    (mode(), any::<bool>()).prop_map(|(m, up)| if up { raise(m) } else { lower(m) })
}

fn state(max: u32) -> impl Strategy<Value = FockState> {
    (0..=max, 0..=max, 0..=max).prop_map(|(x, y, s)| FockState::new(x, y, s))
}

fn operator() -> impl Strategy<Value = OperatorSum> {
    prop::collection::vec((-2.0f64..2.0, prop::collection::vec(factor(), 0..5)), 1..5)
        .prop_map(|terms| terms.into_iter().map(|(c, f)| Monomial::new(c, f)).collect())
}

fn natural(r: f64, xi: f64) -> ModeSpectrum {
    ModeSpectrum::natural(DimensionlessParams::new(r, xi).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn canonical_commutators(s in state(6), i in mode(), j in mode()) {
        let a = OperatorSum::lower(i);
        let b = OperatorSum::raise(j);
        let comm = (&a * &b) - (&b * &a);
        let out = comm.apply(s);
        let expected = if i == j { 1.0 } else { 0.0 };
        prop_assert!((out.amplitude(&s) - expected).abs() < 1e-12);
        prop_assert!(out.iter().all(|(t, amp)| *t == s || amp.abs() < 1e-12));
    }

    #[test]
    fn normal_ordering_preserves_action(op in operator(), s in state(5)) {
        let before = op.apply(s);
        let after = op.normalize().apply(s);
        for (t, amp) in before.iter() {
            prop_assert!((after.amplitude(t) - amp).abs() < 1e-9 * (1.0 + amp.abs()), "{} at {}", op, t);
        }
        for (t, amp) in after.iter() {
            prop_assert!((before.amplitude(t) - amp).abs() < 1e-9 * (1.0 + amp.abs()));
        }
    }

    #[test]
    fn adjoint_is_an_involution(op in operator()) {
        let n = op.normalize();
        prop_assert!((&n.adjoint().adjoint() - &n).normalize().is_zero());
    }

    #[test]
    fn matrix_agrees_with_application(op in operator()) {
        let op = op.normalize();
        let basis = TruncatedBasis::new(Cutoffs::new(3, 2, 3));
        let m = op.to_matrix(&basis);
        for col in 0..basis.dimension() {
            let out = op.apply(basis.state(col));
            for (t, amp) in out.iter() {
                if let Some(row) = basis.index_of(t) {
                    prop_assert!((m.get(row, col) - amp).abs() < 1e-12 * (1.0 + amp.abs()));
                }
            }
        }
    }

    #[test]
    fn full_hamiltonian_matrix_is_symmetric(r in off_resonance_r(), xi in 0.0f64..1e-2) {
        let ops = build_paper_operators(r, xi).unwrap();
        let m = ops.full().to_matrix(&TruncatedBasis::new(Cutoffs::new(6, 4, 6)));
        prop_assert!(m.max_asymmetry() < 1e-12);
    }

    #[test]
    fn pt_chi_matches_closed_form(r in off_resonance_r(), xi in 1e-6f64..=1e-3) {
        let pt = kerr_coefficient_pt(r, xi).unwrap();
        let closed = chi_dimensionless(r, xi, KerrFormula::Paper).unwrap();
        prop_assert!(rel(pt, closed) < 1e-10, "r = {r}: pt {pt} closed {closed}");
    }

    /// The (n_x, n_s) mixed difference of the full second-order energy isolates
    /// the cross term and matches the closed-form shift at every base state.
    #[test]
    fn cross_part_by_finite_differences(r in off_resonance_r(), xi in 1e-6f64..=1e-3, n in state(4)) {
        let ops = build_paper_operators(r, xi).unwrap();
        let e = |dx: u32, ds: u32| energy_shift(&ops, FockState::new(n.nx + dx, n.ny, n.ns + ds)).unwrap();
        let pt = e(1, 1) - e(1, 0) - e(0, 1) + e(0, 0);
        let s = natural(r, xi);
        let eps = |dx: u32, ds: u32| epsilon_total(n.nx + dx, n.ny, n.ns + ds, &s).unwrap();
        let closed = eps(1, 1) - eps(1, 0) - eps(0, 1) + eps(0, 0);
        prop_assert!(rel(pt, closed) < 1e-9, "pt {pt} closed {closed}");
    }

    #[test]
    fn split_shifts_sum_to_total(r in off_resonance_r(), xi in 1e-6f64..=1e-3, n in state(5)) {
        let s = natural(r, xi);
        let sum = epsilon3(n.nx, n.ny, n.ns, &s).unwrap() + epsilon4(n.nx, n.ny, n.ns, &s);
        let total = epsilon_total(n.nx, n.ny, n.ns, &s).unwrap();
        prop_assert!(rel(sum, total) < 1e-12);
    }

    #[test]
    fn chi_depends_only_on_r_and_xi(r in off_resonance_r(), nu_z in 2e5f64..5e6, amu in 5.0f64..200.0) {
        let consts = PhysicalConstants::CODATA_2018;
        let species = IonSpecies::from_amu("test", amu, 1, &consts).unwrap();
        let trap = TrapConfig::from_hz(r * nu_z, nu_z).unwrap();
        let s = derive_spectrum(&species, &trap, &consts).unwrap();
        for f in KerrFormula::ALL {
            let k = chi(&s, f).unwrap();
            let dimensionless = chi_dimensionless(s.ratio_r, s.xi, f).unwrap();
            prop_assert!(rel(k.chi / s.omega_z, dimensionless) < 1e-12);
            prop_assert!(rel(k.chi_over_2pi, k.chi / (2.0 * std::f64::consts::PI)) < 1e-15);
        }
    }

    #[test]
    fn xi_and_z0_scale_with_axial_frequency(nu_z in 2e5f64..2e6, k in 1.1f64..4.0, amu in 5.0f64..200.0) {
        let consts = PhysicalConstants::CODATA_2018;
        let species = IonSpecies::from_amu("test", amu, 1, &consts).unwrap();
        let at = |nu: f64| derive_spectrum(&species, &TrapConfig::from_hz(10.0 * nu_z * k, nu).unwrap(), &consts).unwrap();
        let (a, b) = (at(nu_z), at(k * nu_z));
        prop_assert!(rel(b.xi / a.xi, k.cbrt()) < 1e-12);
        prop_assert!(rel(b.z0 / a.z0, k.powf(-2.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn chi_is_negative_above_resonance(r in 1.33f64..50.0, xi in 1e-7f64..1e-3) {
        prop_assert!(chi_dimensionless(r, xi, KerrFormula::Paper).unwrap() < 0.0);
        prop_assert!(chi_dimensionless(r, xi, KerrFormula::Roos).unwrap() < 0.0);
    }

    #[test]
    fn config_round_trip(nu_z in 1e4f64..1e7, ratio in 1.01f64..30.0, start in 1e4f64..1e6, span in 0.0f64..1e6, steps in 1usize..100) {
        let mut cfg = RunConfig::new(TrapSpec { nu_z_hz: nu_z, nu_perp_hz: nu_z * ratio });
        cfg.sweep = Some(SweepSpec { start_hz: start, stop_hz: start + span, steps });
        let again = parse_config(&cfg.to_config_string()).unwrap();
        prop_assert_eq!(cfg, again);
    }
}
