//! Converts dimensionless interaction times into seconds for a Raman-coupled
//! rubidium cavity.
//!
//! cargo run --example lab_units

use ns_forge::reference::{SINGLE_ATOM, TWO_ATOM};
use ns_forge::units::{interaction_time, kappa, PhysicalParams};

fn main() -> ns_forge::Result<()> {
    let p = PhysicalParams::rubidium_cavity();
    if let Some(w) = p.regime_warning() {
        eprintln!("warning: {w}");
    }
    let k = kappa(&p)?;
    println!("kappa = {k:.6e} rad/s");
    for row in SINGLE_ATOM.iter().chain(&TWO_ATOM) {
        let secs: Vec<String> = row
            .taus
            .iter()
            .map(|&t| interaction_time(t, &p).map(|s| format!("{:.4} us", s * 1e6)))
            .collect::<ns_forge::Result<_>>()?;
        println!("  {:<12} tau = {:?} -> {}", row.table, row.taus, secs.join(", "));
    }

    // a deeper detuning restores the dispersive regime at the cost of longer gates
    let far = PhysicalParams::new(p.g, p.omega, 20.0 * p.omega)?;
    println!("with delta = 20 omega: tau = 6.5064 -> {:.4} us", interaction_time(6.5064, &far)? * 1e6);
    Ok(())
}
