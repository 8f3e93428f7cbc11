//! Anneals a ground- and an excited-state atom with a reduced ensemble and
//! polishes the end points onto the sign pattern.
//!
//! cargo run --release --example two_atom_search -- [seed]

use ns_forge::search::{search_pipeline, SearchConfig};

fn main() -> ns_forge::Result<()> {
    let mut cfg = SearchConfig::for_atoms(2);
    cfg.seed = std::env::args().nth(1).map_or(1, |s| s.parse().expect("seed must be an integer"));
    cfg.ensemble_size = 1024;
    cfg.sweeps_per_t = 20;
    cfg.top_k = 8;
    let ranked = search_pipeline(&cfg)?;
    println!(
        "seed {}: {} annealing end points, {} distinct solutions in {:.1} s",
        cfg.seed,
        ranked.candidates,
        ranked.solutions.len(),
        ranked.wall_seconds
    );
    for s in &ranked.solutions {
        let t = s.taus();
        println!(
            "  tau = ({:>12.8}, {:>12.8})  A = ({:+.10}, {:+.10}, {:+.10})  E = {:.3e}  residual = {:.1e}",
            t[0], t[1], s.a[0].re, s.a[1].re, s.a[2].re, s.objective, s.pattern_residual
        );
    }
    Ok(())
}
