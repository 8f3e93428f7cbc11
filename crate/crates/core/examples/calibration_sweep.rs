//! Coincidence rate of the two-photon interferometer, first with an ideal
//! phase and then with the heralded gate placed in one arm.
//!
//! cargo run --example calibration_sweep

use std::f64::consts::PI;

use ns_forge::calibration::{ideal_chain, tau_sweep};
use ns_forge::jc::AtomPrep;

fn main() -> ns_forge::Result<()> {
    println!("ideal phase");
    for i in 0..=8 {
        let theta = PI * i as f64 / 4.0;
        println!("  theta = {:>5.3}  P_c = {:.6}", theta, ideal_chain(theta));
    }

    let pts = tau_sweep(6.40, 6.60, 21, AtomPrep::Ground)?;
    println!("gate in arm");
    for p in &pts {
        println!("  tau = {:.3}  P_c = {:.3e}  branch = {:.5}", p.x, p.p_c, p.branch_probability);
    }
    let best = pts.iter().min_by(|a, b| a.p_c.total_cmp(&b.p_c)).expect("non-empty sweep");
    println!("deepest null near tau = {:.3}", best.x);
    Ok(())
}
