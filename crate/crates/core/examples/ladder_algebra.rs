//! Normal ordering of three-mode ladder-operator expressions.
//!
//! cargo run --example ladder_algebra

use ionkerr::fock::{lower, raise, Monomial, OperatorSum, TruncatedBasis};
use ionkerr::{Cutoffs, FockState, Mode};

fn main() {
    let a = OperatorSum::lower(Mode::X);
    let a_dag = OperatorSum::raise(Mode::X);
    let commutator = (&a * &a_dag) - (&a_dag * &a);
    println!("[a, a†]            = {}", commutator.normalize());

    let u = OperatorSum::quadrature(Mode::S);
    println!("(c + c†)^3         = {}", u.pow(3).normalize());

    let mixed = OperatorSum::from(Monomial::new(1.0, vec![lower(Mode::X), raise(Mode::Y)]));
    println!("a b†               = {}", mixed.normalize());

    let x2u = (&OperatorSum::quadrature(Mode::X).pow(2) * &u).normalize();
    println!("(a + a†)^2 (c + c†) = {x2u}");
    println!("  number-conserving part: {}", x2u.resonant_part());

    let state = FockState::new(2, 0, 1);
    println!("\n(a + a†)^2 (c + c†) {state}:");
    for (s, amp) in x2u.apply(state).iter() {
        println!("  {amp:+.6} {s}");
    }

    let basis = TruncatedBasis::new(Cutoffs::new(2, 1, 2));
    let m = x2u.to_matrix(&basis);
    println!(
        "\nmatrix on {} states: {} nonzeros, max asymmetry {:.1e}",
        basis.dimension(),
        m.nnz(),
        m.max_asymmetry()
    );
}
