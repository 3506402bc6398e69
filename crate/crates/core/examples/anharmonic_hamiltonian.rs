//! The cubic and quartic Coulomb corrections as ladder-operator polynomials,
//! in units of ħω_z.
//!
//! cargo run --example anharmonic_hamiltonian

use ionkerr::fock::{lower, raise};
use ionkerr::hamiltonian::build_paper_operators;
use ionkerr::Mode::{S, X};

fn main() -> ionkerr::Result<()> {
    let (r, xi) = (5.0, 1e-3);
    let ops = build_paper_operators(r, xi)?;
    let p = ops.params;
    println!("r = {r}, xi = {xi}: omega_r = {:.6}, omega_s = {:.6}, zeta = {:.6e}", p.omega_r(), p.omega_s(), p.zeta());
    println!("\nH0 = {}", ops.h0);
    println!("\nV3 has {} terms:\n{}", ops.v3.terms().len(), ops.v3);
    println!("\nV4 has {} terms; resonant part:\n{}", ops.v4.terms().len(), ops.v4.resonant_part());

    let cross = ops.v4.coefficient_of(&[raise(X), raise(S), lower(X), lower(S)]);
    println!(
        "\ncoefficient of a†c†ac in V4: {cross:.9e} (= -omega_s xi / omega_r = {:.9e})",
        -p.omega_s() * xi / p.omega_r()
    );
    println!("V3 self-adjoint: {}, V4 self-adjoint: {}", ops.v3.is_self_adjoint(1e-15), ops.v4.is_self_adjoint(1e-15));
    Ok(())
}
