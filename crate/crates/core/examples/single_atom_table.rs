//! Scans one ground-state atom over (0, 250] and lists the best gates,
//! then checks them against the published single-atom rows.
//!
//! cargo run --release --example single_atom_table

use ns_forge::reference::SINGLE_ATOM;
use ns_forge::search::{search_pipeline, SearchConfig};

fn main() -> ns_forge::Result<()> {
    let mut cfg = SearchConfig::for_atoms(1);
    cfg.top_k = 10;
    let ranked = search_pipeline(&cfg)?;
    println!("{} local minima polished, best {}:", ranked.candidates, ranked.solutions.len());
    for (i, s) in ranked.solutions.iter().enumerate() {
        println!(
            "{:>3}  tau = {:>10.5}  A1 = {:+.7}  A2 = {:+.7}  F = {:.8}  E = {:.3e}",
            i + 1,
            s.steps[0].tau,
            s.a[1].re,
            s.a[2].re,
            s.fidelity,
            s.objective
        );
    }
    for row in &SINGLE_ATOM {
        let hit = ranked.solutions.iter().position(|s| (s.steps[0].tau - row.taus[0]).abs() < 5e-4);
        match hit {
            Some(i) => println!("published tau {} found at rank {}", row.taus[0], i + 1),
            None => println!("published tau {} not among the listed solutions", row.taus[0]),
        }
    }
    Ok(())
}
