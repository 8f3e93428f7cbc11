//! Compares the closed-form evolution against a dense matrix exponential of
//! the truncated Hamiltonian.
//!
//! cargo run --example oracle_check

use ns_forge::jc::oracle_deviation;

fn main() -> ns_forge::Result<()> {
    for n_max in [2, 4, 8, 12] {
        for tau in [0.5, 6.5064, 37.73742, 219.918] {
            println!("n_max = {n_max:>2}  tau = {tau:>9}  max deviation = {:.2e}", oracle_deviation(tau, n_max)?);
        }
    }
    Ok(())
}
