use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SearchConfig;
use crate::error::Result;
use crate::metrics::objective_at;

/// End points closer than this in every coordinate count as the same.
pub(crate) const DISTINCT_RADIUS: f64 = 1e-2;

/// Final position of one annealing walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub taus: Vec<f64>,
    pub objective: f64,
    pub member: usize,
}

/// Metropolis walk of one ensemble member. When `trace` is given, the
/// energy after every step is recorded.
pub(crate) fn walk(cfg: &SearchConfig, member: usize, mut trace: Option<&mut Vec<f64>>) -> Candidate {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(member as u64);
    let dim = cfg.preps.len();
    let energy = |x: &[f64]| {
        let e = objective_at(x, &cfg.preps, cfg.weight);
        if e.is_nan() {
            f64::INFINITY
        } else {
            e
        }
    };

    // uniform in (0, τ_max]
    let mut x: Vec<f64> = (0..dim).map(|_| cfg.tau_max * (1.0 - rng.random::<f64>())).collect();
    let mut e = energy(&x);
    let mut y = x.clone();

    let mut temp = cfg.t0;
    let mut sigma = cfg.sigma0;
    for _ in 0..cfg.levels() {
        for _ in 0..cfg.sweeps_per_t {
            for (yi, xi) in y.iter_mut().zip(&x) {
                let z: f64 = rng.sample(StandardNormal);
                *yi = xi + sigma * z;
            }
            if y.iter().all(|&t| t > 0.0 && t <= cfg.tau_max) {
                let ey = energy(&y);
                let accept = ey <= e || {
                    let u: f64 = rng.random();
                    temp > 0.0 && u < (-(ey - e) / temp).exp()
                };
                if accept {
                    x.copy_from_slice(&y);
                    e = ey;
                }
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(e);
            }
        }
        temp *= cfg.alpha;
        sigma *= cfg.alpha;
    }
    Candidate { taus: x, objective: e, member }
}

/// Anneals the whole ensemble and returns up to `top_k` distinct end points,
/// best first. Members run in parallel; the result does not depend on the
/// number of worker threads.
pub fn anneal(cfg: &SearchConfig) -> Result<Vec<Candidate>> {
    cfg.validate()?;
    let mut ends: Vec<Candidate> = (0..cfg.ensemble_size).into_par_iter().map(|m| walk(cfg, m, None)).collect();
    ends.sort_by(|a, b| a.objective.total_cmp(&b.objective).then(a.member.cmp(&b.member)));
    let mut kept: Vec<Candidate> = Vec::new();
    for c in ends {
        if !c.objective.is_finite() {
            continue;
        }
        let dup = kept
            .iter()
            .any(|k| k.taus.iter().zip(&c.taus).all(|(a, b)| (a - b).abs() <= DISTINCT_RADIUS));
        if !dup {
            kept.push(c);
            if kept.len() == cfg.top_k {
                break;
            }
        }
    }
    Ok(kept)
}
