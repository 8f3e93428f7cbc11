//! Synthesis of interaction times for the nonlinear-sign gate.
//!
//! One atom: a dense scan of the objective followed by local polishing.
//! Two atoms: an ensemble of annealing walks whose best end points are
//! polished with the simplex method. Polishing drives the gate onto the
//! exact sign pattern reachable with the available times (see
//! [`crate::metrics::pattern_residual`]) unless [`RefineTarget::Objective`]
//! is selected.

mod anneal;
mod scan;
pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::jc::AtomPrep;
use crate::metrics::{objective_at, residual_at, GateSolution, Step, DEFAULT_WEIGHT};

pub use anneal::{anneal, Candidate};
pub use scan::{grid_minima, grid_scan};
use simplex::{nelder_mead, SimplexOptions};

/// Generator used for every random draw in the search.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = ensemble member index";

/// Function minimized by the local simplex stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefineTarget {
    /// Drive the sign-pattern residual to zero.
    PatternMatch,
    /// Minimize the weighted objective itself.
    Objective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub atoms: usize,
    pub preps: Vec<AtomPrep>,
    pub tau_max: f64,
    pub grid_step: f64,
    pub ensemble_size: usize,
    pub t0: f64,
    pub alpha: f64,
    pub sweeps_per_t: usize,
    pub sigma0: f64,
    pub t_floor: f64,
    pub top_k: usize,
    pub seed: u64,
    pub weight: f64,
    pub refine: RefineTarget,
}

impl SearchConfig {
    /// Defaults for `atoms` heralded atoms: `[g]` for one, `[g, e]` for two.
    pub fn for_atoms(atoms: usize) -> Self {
        let (preps, tau_max) = match atoms {
            1 => (vec![AtomPrep::Ground], 250.0),
            _ => (vec![AtomPrep::Ground, AtomPrep::Excited], 500.0),
        };
        Self {
            atoms,
            preps,
            tau_max,
            grid_step: 1e-4,
            ensemble_size: 4096,
            t0: 1.0,
            alpha: 0.95,
            sweeps_per_t: 50,
            sigma0: 5.0,
            t_floor: 1e-6,
            top_k: 32,
            seed: 0,
            weight: DEFAULT_WEIGHT,
            refine: RefineTarget::PatternMatch,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.atoms) {
            return Err(invalid(format!("{} atoms are not supported, use 1 or 2", self.atoms)));
        }
        if self.preps.len() != self.atoms {
            return Err(invalid(format!(
                "preparation pattern has {} entries for {} atoms",
                self.preps.len(),
                self.atoms
            )));
        }
        let positive = [
            ("tau_max", self.tau_max),
            ("grid_step", self.grid_step),
            ("sigma0", self.sigma0),
            ("t_floor", self.t_floor),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.t0.is_finite() && self.t0 >= 0.0) {
            return Err(invalid("initial temperature must be non-negative"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid(format!("cooling factor must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.weight.is_finite() && self.weight >= 0.0) {
            return Err(invalid("objective weight must be non-negative"));
        }
        if self.ensemble_size == 0 || self.sweeps_per_t == 0 || self.top_k == 0 {
            return Err(invalid("ensemble size, sweeps per level and top_k must be at least 1"));
        }
        if self.grid_step > self.tau_max {
            return Err(invalid("grid step exceeds the search range"));
        }
        Ok(())
    }

    /// Number of temperature levels, `T_k = T_0 α^k ≥ T_floor`.
    ///
    /// A zero (or sub-floor) starting temperature keeps the schedule length
    /// of `T_0 = 1` so the proposal scale still shrinks.
    pub fn levels(&self) -> usize {
        let t_ref = if self.t0 > self.t_floor { self.t0 } else { 1.0 };
        ((self.t_floor / t_ref).ln() / self.alpha.ln()).floor() as usize + 1
    }

    pub(crate) fn steps(&self, taus: &[f64]) -> Vec<Step> {
        taus.iter().zip(&self.preps).map(|(&t, &p)| Step::heralded(t, p)).collect()
    }
}

/// Solutions sorted by ascending objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSolutions {
    pub solutions: Vec<GateSolution>,
    pub config: SearchConfig,
    pub rng: String,
    /// Local minima (one atom) or annealing end points (two atoms) that were polished.
    pub candidates: usize,
    #[serde(skip)]
    pub wall_seconds: f64,
}

/// Polishes `start` with Nelder–Mead and evaluates the resulting gate.
///
/// Points outside `τ > 0` are walled off. The simplex minimizes either the
/// sign-pattern residual or the objective, per `cfg.refine`.
pub fn refine_local(start: &[f64], cfg: &SearchConfig) -> Result<GateSolution> {
    if start.len() != cfg.preps.len() {
        return Err(invalid("start point dimension does not match the preparation pattern"));
    }
    let target = |x: &[f64]| -> f64 {
        if x.iter().any(|&t| t <= 0.0) {
            return f64::INFINITY;
        }
        match cfg.refine {
            RefineTarget::PatternMatch => residual_at(x, &cfg.preps),
            RefineTarget::Objective => objective_at(x, &cfg.preps, cfg.weight),
        }
    };
    if !target(start).is_finite() {
        return Err(invalid(format!("refinement target is not finite at {start:?}")));
    }
    let r = nelder_mead(target, start, &SimplexOptions::default());
    let mut sol = GateSolution::evaluate(cfg.steps(&r.x), cfg.weight)?;
    sol.converged = r.converged;
    Ok(sol)
}

/// Value minimized by [`refine_local`] for a solution.
pub fn refine_value(sol: &GateSolution, cfg: &SearchConfig) -> f64 {
    match cfg.refine {
        RefineTarget::PatternMatch => sol.pattern_residual,
        RefineTarget::Objective => sol.objective,
    }
}

fn by_objective(a: &GateSolution, b: &GateSolution) -> std::cmp::Ordering {
    a.objective.total_cmp(&b.objective).then_with(|| {
        a.steps
            .iter()
            .zip(&b.steps)
            .map(|(x, y)| x.tau.total_cmp(&y.tau))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// Sorts by objective and drops any solution within `radius` (in every
/// coordinate) of a better one. Keeps at most `top_k`.
pub(crate) fn rank_and_dedup(mut sols: Vec<GateSolution>, radius: f64, top_k: usize) -> Vec<GateSolution> {
    sols.retain(|s| s.objective.is_finite());
    sols.sort_by(by_objective);
    let mut kept: Vec<GateSolution> = Vec::new();
    for s in sols {
        let dup = kept.iter().any(|k| {
            k.steps.iter().zip(&s.steps).all(|(a, b)| (a.tau - b.tau).abs() <= radius)
        });
        if !dup {
            kept.push(s);
            if kept.len() == top_k {
                break;
            }
        }
    }
    kept
}

/// Runs the scan (one atom) or anneal-then-polish (two atoms) search.
pub fn search_pipeline(cfg: &SearchConfig) -> Result<RankedSolutions> {
    cfg.validate()?;
    match cfg.atoms {
        1 => grid_scan(cfg),
        _ => {
            use rayon::prelude::*;
            let started = std::time::Instant::now();
            let candidates = anneal(cfg)?;
            let polished: Vec<GateSolution> = candidates
                .par_iter()
                .filter_map(|c| refine_local(&c.taus, cfg).ok())
                .collect();
            let solutions = rank_and_dedup(polished, anneal::DISTINCT_RADIUS, cfg.top_k);
            Ok(RankedSolutions {
                solutions,
                config: cfg.clone(),
                rng: RNG_NAME.to_string(),
                candidates: candidates.len(),
                wall_seconds: started.elapsed().as_secs_f64(),
            })
        }
    }
}
