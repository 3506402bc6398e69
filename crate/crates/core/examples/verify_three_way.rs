//! Closed form, perturbation engine and exact diagonalization side by side,
//! with the gate schedule adapting the ξ ladder near r → 1 and near the
//! 2ω_r = ω_s resonance.
//!
//! cargo run --release --example verify_three_way

use ionkerr::io::verify::{run_verify, GateSchedule, VerifySettings};

fn main() -> ionkerr::Result<()> {
    for r in [5.0, 2.0, 1.4, 1.05] {
        let schedule = GateSchedule::for_ratio(r)?;
        let report = run_verify(&VerifySettings::new(r))?;
        println!(
            "r = {r:<5} ladder {:?}  paper {:+.9}  pt {:+.9}  oracle {:+.9}  -> {}",
            schedule.xi_ladder,
            report.paper,
            report.pt,
            report.oracle.chi_over_xi(),
            if report.passed() { "PASS" } else { "FAIL" }
        );
    }
    println!("\nfull report at r = 5:\n");
    print!("{}", run_verify(&VerifySettings::new(5.0))?.render_text());
    Ok(())
}
