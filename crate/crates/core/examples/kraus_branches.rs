//! Applies the four heralded outcomes of one atom to a field state and
//! prints the conditioned photon-number distributions.
//!
//! cargo run --example kraus_branches -- 6.5064

use ns_forge::fock::FockVector;
use ns_forge::jc::{kraus, AtomPrep};

fn main() -> ns_forge::Result<()> {
    let tau: f64 = std::env::args().nth(1).map_or(6.5064, |s| s.parse().expect("tau must be a number"));
    // |0⟩ + |1⟩ + |2⟩ with an empty top level so no branch is truncated
    let psi = FockVector::from_real(&[1.0, 1.0, 1.0, 0.0])?.normalize()?;

    println!("tau = {tau}, input populations {:?}", psi.populations());
    for prep in [AtomPrep::Ground, AtomPrep::Excited] {
        let mut total = 0.0;
        for detect in [AtomPrep::Ground, AtomPrep::Excited] {
            let k = kraus(prep, detect, tau, psi.n_max())?;
            match psi.apply_diagonal(&k) {
                Ok((out, p)) => {
                    total += p;
                    let pops: Vec<String> = out.normalize()?.populations().iter().map(|x| format!("{x:.5}")).collect();
                    println!("  {prep}->{detect}  p = {p:.6}  shift {:+}  populations [{}]", k.shift(), pops.join(", "));
                }
                Err(e) => println!("  {prep}->{detect}  {e}"),
            }
        }
        println!("  sum over outcomes for {prep}: {total:.15}");
    }
    Ok(())
}
