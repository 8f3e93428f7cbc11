use rayon::prelude::*;

use super::{rank_and_dedup, refine_local, RankedSolutions, SearchConfig, RNG_NAME};
use crate::error::Result;
use crate::metrics::{objective_at, GateSolution};

/// Number of grid points `τ_k = k·step` in `(0, τ_max]`.
fn grid_len(cfg: &SearchConfig) -> usize {
    (cfg.tau_max / cfg.grid_step * (1.0 + 1e-12)).floor() as usize
}

/// Strict interior local minima of the objective on the grid `τ_k = k·step`.
pub fn grid_minima(cfg: &SearchConfig) -> Vec<f64> {
    let n = grid_len(cfg);
    let preps = &cfg.preps[..1];
    let values: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|k| objective_at(&[k as f64 * cfg.grid_step], preps, cfg.weight))
        .collect();
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1])
        .map(|i| (i + 1) as f64 * cfg.grid_step)
        .collect()
}

/// One-atom search: every grid minimum is polished and the distinct
/// results are ranked.
pub fn grid_scan(cfg: &SearchConfig) -> Result<RankedSolutions> {
    let started = std::time::Instant::now();
    let mut one = cfg.clone();
    one.atoms = 1;
    one.preps.truncate(1);
    let minima = grid_minima(&one);
    let polished: Vec<GateSolution> = minima
        .par_iter()
        .filter_map(|&t| refine_local(&[t], &one).ok())
        .collect();
    let solutions = rank_and_dedup(polished, 10.0 * cfg.grid_step, cfg.top_k);
    Ok(RankedSolutions {
        solutions,
        config: cfg.clone(),
        rng: RNG_NAME.to_string(),
        candidates: minima.len(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
