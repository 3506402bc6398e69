//! Second-order energy shifts from the operator engine, channel by channel,
//! and χ as the second difference over the four lowest stencil states.
//!
//! cargo run --example perturbation_theory

use ionkerr::hamiltonian::build_paper_operators;
use ionkerr::io::report::table1_report;
use ionkerr::pt::{energy_shift, first_order_shift, kerr_coefficient_pt, kerr_stencil, second_order_shift, UnperturbedEnergy};
use ionkerr::{FockState, Mode};

fn main() -> ionkerr::Result<()> {
    let (r, xi) = (5.0, 1e-3);
    let ops = build_paper_operators(r, xi)?;
    let e0 = UnperturbedEnergy::new(&ops.params);

    let n = FockState::new(1, 0, 1);
    let second = second_order_shift(&ops.v3, n, &e0)?;
    println!("V3 channels out of {n}:");
    for c in &second.contributions {
        println!(
            "  -> {:<10} element {:+.6e}  denominator {:+.6e}  contribution {:+.6e}",
            c.intermediate.to_string(),
            c.element,
            c.denominator,
            c.value()
        );
    }
    println!("second order V3: {:+.9e}", second.second_order);
    println!("first order V4:  {:+.9e}", first_order_shift(&ops.v4, n));

    println!("\nstencil energies:");
    for s in kerr_stencil(Mode::X) {
        println!("  {s}: {:+.9e}", energy_shift(&ops, s)?);
    }
    println!("chi / (xi omega_z) = {:.12}", kerr_coefficient_pt(r, xi)? / xi);

    println!();
    print!("{}", table1_report(FockState::new(2, 1, 3), r)?.render_text());
    Ok(())
}
