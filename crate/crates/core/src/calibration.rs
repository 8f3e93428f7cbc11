//! Two-photon interferometer used to calibrate the gate: a Hong–Ou–Mandel
//! pair, the gate in one arm, a second beam splitter, and a coincidence
//! measurement.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::jc::{kraus, AtomPrep, DiagonalKraus};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitudes over `|n_a, n_b⟩` with `n_a, n_b ≤ cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    cutoff: usize,
    amps: Vec<Complex64>,
}

impl TwoModeState {
    pub fn zeros(cutoff: usize) -> Self {
        Self { cutoff, amps: vec![ZERO; (cutoff + 1) * (cutoff + 1)] }
    }

    pub fn fock(na: usize, nb: usize, cutoff: usize) -> Result<Self> {
        if na > cutoff || nb > cutoff {
            return Err(Error::Cutoff { photons: na.max(nb), n_max: cutoff });
        }
        let mut s = Self::zeros(cutoff);
        s.set(na, nb, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn idx(&self, na: usize, nb: usize) -> usize {
        na * (self.cutoff + 1) + nb
    }

    pub fn get(&self, na: usize, nb: usize) -> Complex64 {
        self.amps[self.idx(na, nb)]
    }

    pub fn set(&mut self, na: usize, nb: usize, value: Complex64) {
        let i = self.idx(na, nb);
        self.amps[i] = value;
    }

    /// Nonzero components as `(n_a, n_b, amplitude)`.
    pub fn components(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let width = self.cutoff + 1;
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .map(move |(i, a)| (i / width, i % width, *a))
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 1e-300 {
            return Err(Error::ImpossibleOutcome);
        }
        Ok(Self { cutoff: self.cutoff, amps: self.amps.iter().map(|c| c / n).collect() })
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Lossless two-mode beam splitter acting on creation operators:
/// `a† → m₀₀ a† + m₀₁ b†`, `b† → m₁₀ a† + m₁₁ b†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub matrix: [[Complex64; 2]; 2],
}

impl BeamSplitter {
    /// The real 50/50 convention `a† → (a† + b†)/√2`, `b† → (a† − b†)/√2`.
    pub fn balanced() -> Self {
        let h = Complex64::new(1.0 / SQRT_2, 0.0);
        Self { matrix: [[h, h], [h, -h]] }
    }

    pub fn apply(&self, s: &TwoModeState) -> Result<TwoModeState> {
        let cutoff = s.cutoff;
        let [[p, q], [r, t]] = self.matrix;
        let mut out = TwoModeState::zeros(cutoff);
        for (na, nb, amp) in s.components() {
            if na + nb > cutoff {
                return Err(Error::Cutoff { photons: na + nb, n_max: cutoff });
            }
            let pre = amp / (factorial(na) * factorial(nb)).sqrt();
            for j in 0..=na {
                let from_a = binomial(na, j) * p.powu(j as u32) * q.powu((na - j) as u32);
                for k in 0..=nb {
                    let from_b = binomial(nb, k) * r.powu(k as u32) * t.powu((nb - k) as u32);
                    let (ma, mb) = (j + k, na + nb - j - k);
                    let weight = (factorial(ma) * factorial(mb)).sqrt();
                    let i = out.idx(ma, mb);
                    out.amps[i] += pre * from_a * from_b * weight;
                }
            }
        }
        Ok(out)
    }
}

/// Balanced beam splitter, see [`BeamSplitter::balanced`].
pub fn beam_splitter(s: &TwoModeState) -> Result<TwoModeState> {
    BeamSplitter::balanced().apply(s)
}

/// Ideal conditional phase on arm b: `|n_a, 2⟩ → e^{iθ} |n_a, 2⟩`.
pub fn phase_in_arm(s: &TwoModeState, theta: f64) -> TwoModeState {
    let mut out = s.clone();
    let phase = Complex64::from_polar(1.0, theta);
    if s.cutoff >= 2 {
        for na in 0..=s.cutoff {
            let i = out.idx(na, 2);
            out.amps[i] *= phase;
        }
    }
    out
}

/// Heralded gate on arm b: `|n_a, n_b⟩ → A_{n_b} |n_a, n_b⟩`.
/// Returns the renormalized state and the branch probability.
pub fn ns_in_arm(s: &TwoModeState, k: &DiagonalKraus) -> Result<(TwoModeState, f64)> {
    if k.shift() != 0 {
        return Err(invalid("the arm gate must conserve photon number"));
    }
    if k.n_max() < s.cutoff {
        return Err(invalid(format!(
            "Kraus operator covers n ≤ {} but the arm reaches {}",
            k.n_max(),
            s.cutoff
        )));
    }
    let mut out = s.clone();
    for na in 0..=s.cutoff {
        for nb in 0..=s.cutoff {
            let i = out.idx(na, nb);
            out.amps[i] *= k.coeffs()[nb];
        }
    }
    let p = out.norm().powi(2);
    Ok((out.normalize()?, p))
}

/// Population of `|1,1⟩` after a final balanced beam splitter.
pub fn coincidence_probability(s: &TwoModeState) -> Result<f64> {
    Ok(beam_splitter(s)?.get(1, 1).norm_sqr())
}

/// `(|2,0⟩ − |0,2⟩)/√2`, the output of `|1,1⟩` on the first beam splitter.
pub fn hom_state() -> TwoModeState {
    beam_splitter(&TwoModeState::fock(1, 1, 2).expect("cutoff 2 holds |1,1>"))
        .expect("two photons fit the cutoff")
}

/// Coincidence probability of the full chain with an ideal phase `θ`.
pub fn ideal_chain(theta: f64) -> f64 {
    coincidence_probability(&phase_in_arm(&hom_state(), theta)).expect("cutoff 2 holds the chain")
}

/// Coincidence and branch probabilities with a heralded gate in the arm.
pub fn gate_chain(k: &DiagonalKraus) -> Result<(f64, f64)> {
    let (s, branch) = ns_in_arm(&hom_state(), k)?;
    Ok((coincidence_probability(&s)?, branch))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub p_c: f64,
    pub branch_probability: f64,
}

/// Ideal chain sampled at `θ_i = 2π i / points`, `i = 0..points`.
pub fn theta_sweep(points: usize) -> Vec<CurvePoint> {
    (0..points)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / points as f64;
            CurvePoint { x: theta, p_c: ideal_chain(theta), branch_probability: 1.0 }
        })
        .collect()
}

/// Single heralded atom with interaction time swept over `[lo, hi]`.
/// Points whose heralding probability vanishes are skipped.
pub fn tau_sweep(lo: f64, hi: f64, points: usize, prep: AtomPrep) -> Result<Vec<CurvePoint>> {
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) || points == 0 {
        return Err(invalid("sweep needs a finite range lo ≤ hi and at least one point"));
    }
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        let tau = if points == 1 { lo } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 };
        match gate_chain(&kraus(prep, prep, tau, 2)?) {
            Ok((p_c, branch)) => out.push(CurvePoint { x: tau, p_c, branch_probability: branch }),
            Err(Error::ImpossibleOutcome) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
