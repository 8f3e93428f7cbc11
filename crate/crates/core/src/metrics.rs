//! Gate coefficients for post-selected atom sequences and the figures of
//! merit used to rank them against the nonlinear-sign target `(1, 1, −1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::FockVector;
use crate::jc::AtomPrep;

/// Amplitudes `(A_0, A_1, A_2)` applied to the vacuum, one- and two-photon components.
pub type Triple = [Complex64; 3];

/// Default weight of the `(1 − |A_0|)²` term in [`objective`].
pub const DEFAULT_WEIGHT: f64 = 1.0;

/// One atom passing through the cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub tau: f64,
    pub prep: AtomPrep,
    pub detect: AtomPrep,
}

impl Step {
    /// An atom post-selected on its initial level.
    pub fn heralded(tau: f64, prep: AtomPrep) -> Self {
        Self { tau, prep, detect: prep }
    }
}

/// Real gate amplitudes for atoms that are found in their initial level.
///
/// This is the hot path of the search, so it works on plain slices.
pub(crate) fn real_triple(taus: &[f64], preps: &[AtomPrep]) -> [f64; 3] {
    const ROOTS: [f64; 4] = [0.0, 1.0, std::f64::consts::SQRT_2, 1.732_050_807_568_877_2];
    let mut a = [1.0f64; 3];
    for (&tau, &prep) in taus.iter().zip(preps) {
        let offset = match prep {
            AtomPrep::Ground => 0,
            AtomPrep::Excited => 1,
        };
        for (n, an) in a.iter_mut().enumerate() {
            let root = ROOTS[n + offset];
            if root != 0.0 {
                *an *= (tau * root).cos();
            }
        }
    }
    a
}

/// Gate amplitudes of a sequence of heralded atoms: `A_n = Π A_n^{(step)}`.
pub fn coeffs(steps: &[Step]) -> Result<Triple> {
    for (i, s) in steps.iter().enumerate() {
        if s.prep != s.detect {
            return Err(Error::UnsupportedSequence(format!(
                "step {i} detects {} after preparing {}; the photon number changes",
                s.detect, s.prep
            )));
        }
        if !s.tau.is_finite() {
            return Err(invalid(format!("step {i} has a non-finite interaction time")));
        }
    }
    let taus: Vec<f64> = steps.iter().map(|s| s.tau).collect();
    let preps: Vec<AtomPrep> = steps.iter().map(|s| s.prep).collect();
    Ok(real_triple(&taus, &preps).map(|x| Complex64::new(x, 0.0)))
}

/// Overlap of the normalized gate pattern with `(1, 1, −1)/√3`:
/// `F = |A_0 + A_1 − A_2|² / (3 Σ|A_n|²)`.
pub fn ns_fidelity(a: &Triple) -> Result<f64> {
    let weight: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    if weight == 0.0 {
        return Err(invalid("fidelity is undefined for an all-zero gate"));
    }
    Ok(((a[0] + a[1] - a[2]).norm_sqr() / (3.0 * weight)).min(1.0))
}

/// Born weight of the heralded branch, `Σ |A_n|² |c_n|²`.
pub fn success_probability(a: &Triple, psi: &FockVector) -> Result<f64> {
    if psi.n_max() != 2 {
        return Err(invalid(format!("expected a two-photon input, got n_max = {}", psi.n_max())));
    }
    Ok(a.iter().zip(psi.amps()).map(|(a, c)| a.norm_sqr() * c.norm_sqr()).sum())
}

/// Search penalty `|A_1/A_0 − 1|² + |A_2/A_0 + 1|² + w (1 − |A_0|)²`.
///
/// Zero exactly when the gate is `(1, 1, −1)` up to a global phase.
pub fn objective(a: &Triple, weight: f64) -> Result<f64> {
    let norm0 = a[0].norm();
    if norm0 == 0.0 {
        return Err(invalid("objective is undefined when A_0 = 0"));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok((a[1] / a[0] - one).norm_sqr() + (a[2] / a[0] + one).norm_sqr() + weight * (1.0 - norm0).powi(2))
}

/// Residual of the exact sign-pattern conditions that `free` interaction
/// times can satisfy.
///
/// With one free time only the relative sign flip `A_2 = −A_1` can be met,
/// i.e. the crossing of `A_1` and `−A_2`. With two or more the vacuum
/// match `A_1 = A_0` is added, so zeros are gates exactly proportional to
/// `(1, 1, −1)`.
pub fn pattern_residual(a: &Triple, free: usize) -> Result<f64> {
    if a[1].norm() == 0.0 || (free >= 2 && a[0].norm() == 0.0) {
        return Err(invalid("pattern residual is undefined for vanishing reference amplitude"));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut r = (a[2] / a[1] + one).norm_sqr();
    if free >= 2 {
        r += (a[1] / a[0] - one).norm_sqr();
    }
    Ok(r)
}

fn real_objective(a: &[f64; 3], weight: f64) -> f64 {
    if a[0] == 0.0 {
        return f64::INFINITY;
    }
    (a[1] / a[0] - 1.0).powi(2) + (a[2] / a[0] + 1.0).powi(2) + weight * (1.0 - a[0].abs()).powi(2)
}

fn real_residual(a: &[f64; 3], free: usize) -> f64 {
    if a[1] == 0.0 || (free >= 2 && a[0] == 0.0) {
        return f64::INFINITY;
    }
    let mut r = (a[2] / a[1] + 1.0).powi(2);
    if free >= 2 {
        r += (a[1] / a[0] - 1.0).powi(2);
    }
    r
}

/// Objective of heralded atoms evaluated straight from interaction times.
/// Returns `+∞` where the objective is undefined.
pub(crate) fn objective_at(taus: &[f64], preps: &[AtomPrep], weight: f64) -> f64 {
    real_objective(&real_triple(taus, preps), weight)
}

pub(crate) fn residual_at(taus: &[f64], preps: &[AtomPrep]) -> f64 {
    real_residual(&real_triple(taus, preps), taus.len())
}

/// A candidate gate together with its figures of merit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSolution {
    pub steps: Vec<Step>,
    pub a: Triple,
    pub fidelity: f64,
    pub objective: f64,
    pub success_prob_uniform: f64,
    /// Residual of the sign-pattern conditions, see [`pattern_residual`].
    pub pattern_residual: f64,
    /// Whether the local refinement met its convergence test.
    pub converged: bool,
}

impl GateSolution {
    /// Evaluates every figure of merit for a heralded sequence.
    pub fn evaluate(steps: Vec<Step>, weight: f64) -> Result<Self> {
        let a = coeffs(&steps)?;
        let fidelity = ns_fidelity(&a)?;
        let objective = objective(&a, weight)?;
        let success_prob_uniform = success_probability(&a, &FockVector::uniform(2))?;
        let pattern_residual = pattern_residual(&a, steps.len().max(1)).unwrap_or(f64::INFINITY);
        Ok(Self { steps, a, fidelity, objective, success_prob_uniform, pattern_residual, converged: true })
    }

    pub fn taus(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.tau).collect()
    }

    /// Smallest `|A_n|`.
    pub fn min_magnitude(&self) -> f64 {
        self.a.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min)
    }

    /// `A ∝ (1, 1, −1)` in sign: `A_1/A_0 > 0` and `A_2/A_0 < 0`.
    pub fn has_ns_sign_pattern(&self) -> bool {
        let r1 = self.a[1] / self.a[0];
        let r2 = self.a[2] / self.a[0];
        r1.re > 0.0 && r2.re < 0.0
    }
}
