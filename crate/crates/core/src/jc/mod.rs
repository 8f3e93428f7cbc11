//! Resonant Jaynes–Cummings evolution and the conditional field maps that
//! follow from measuring the atom afterwards.
//!
//! All times are dimensionless, `τ = κ t`.

mod oracle;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::l2;

pub use oracle::{closed_form_matrix, expm, expm_oracle, hamiltonian, oracle_deviation, MAX_ORACLE_N};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Atomic level used both for preparation and for detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomPrep {
    #[serde(rename = "g")]
    Ground,
    #[serde(rename = "e")]
    Excited,
}

impl AtomPrep {
    fn index(self) -> usize {
        match self {
            AtomPrep::Ground => 0,
            AtomPrep::Excited => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            AtomPrep::Ground => 'g',
            AtomPrep::Excited => 'e',
        }
    }
}

impl fmt::Display for AtomPrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for AtomPrep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "g" | "ground" => Ok(AtomPrep::Ground),
            "e" | "excited" => Ok(AtomPrep::Excited),
            other => Err(invalid(format!("unknown atomic level {other:?}, expected g or e"))),
        }
    }
}

/// Conditional field map `c_n → A_n c_n`, placed at photon number `n + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalKraus {
    coeffs: Vec<Complex64>,
    shift: i8,
}

impl DiagonalKraus {
    pub fn new(coeffs: Vec<Complex64>, shift: i8) -> Result<Self> {
        if !(-1..=1).contains(&shift) {
            return Err(invalid(format!("Kraus shift must be -1, 0 or +1, got {shift}")));
        }
        if coeffs.is_empty() {
            return Err(invalid("Kraus operator needs at least one coefficient"));
        }
        for (n, a) in coeffs.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(invalid(format!("A_{n} is not finite")));
            }
            if a.norm() > 1.0 + 1e-12 {
                return Err(invalid(format!("|A_{n}| = {} exceeds 1", a.norm())));
            }
        }
        Ok(Self { coeffs, shift })
    }

    pub fn from_real(coeffs: &[f64], shift: i8) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(), shift)
    }

    pub fn identity(n_max: usize) -> Self {
        Self { coeffs: vec![Complex64::new(1.0, 0.0); n_max + 1], shift: 0 }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn shift(&self) -> i8 {
        self.shift
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Diagonal of `Υ†Υ`, i.e. `|A_n|²`. Shifted maps are still diagonal here.
    pub fn effect_diagonal(&self) -> Vec<f64> {
        self.coeffs.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Conditional map on the field for an atom prepared in `prep`, left to
/// interact for `tau`, and then found in `detect`.
///
/// | prep → detect | `A_n`               | shift |
/// |---------------|---------------------|-------|
/// | g → g         | `cos(τ√n)`          | 0     |
/// | e → e         | `cos(τ√(n+1))`      | 0     |
/// | g → e         | `−i sin(τ√n)`       | −1    |
/// | e → g         | `−i sin(τ√(n+1))`   | +1    |
pub fn kraus(prep: AtomPrep, detect: AtomPrep, tau: f64, n_max: usize) -> Result<DiagonalKraus> {
    if !tau.is_finite() {
        return Err(invalid("interaction time must be finite"));
    }
    let rabi = |n: usize| match prep {
        AtomPrep::Ground => tau * (n as f64).sqrt(),
        AtomPrep::Excited => tau * ((n + 1) as f64).sqrt(),
    };
    let (coeffs, shift) = if prep == detect {
        ((0..=n_max).map(|n| Complex64::new(rabi(n).cos(), 0.0)).collect(), 0)
    } else {
        let shift = if prep == AtomPrep::Ground { -1 } else { 1 };
        ((0..=n_max).map(|n| Complex64::new(0.0, -rabi(n).sin())).collect(), shift)
    };
    Ok(DiagonalKraus { coeffs, shift })
}

/// Joint atom–field amplitudes over `|n⟩ ⊗ |g/e⟩`, `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    amps: Vec<Complex64>,
}

impl JointState {
    pub fn zeros(n_max: usize) -> Self {
        Self { amps: vec![ZERO; 2 * (n_max + 1)] }
    }

    pub fn basis(n: usize, atom: AtomPrep, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::Cutoff { photons: n, n_max });
        }
        let mut s = Self::zeros(n_max);
        s.amps[index(n, atom)] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Builds a state from a flat amplitude list ordered `|0,g⟩, |0,e⟩, |1,g⟩, …`.
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_multiple_of(2) {
            return Err(invalid("joint amplitudes must come in (g, e) pairs"));
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid("joint amplitudes must be finite"));
        }
        Ok(Self { amps })
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() / 2 - 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn get(&self, n: usize, atom: AtomPrep) -> Complex64 {
        self.amps[index(n, atom)]
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amps)
    }

    /// Keeps only the components with `n + [atom = e] == excitations`.
    pub fn project_excitations(&self, excitations: usize) -> Self {
        let mut out = Self::zeros(self.n_max());
        for n in 0..=self.n_max() {
            for atom in [AtomPrep::Ground, AtomPrep::Excited] {
                if n + atom.index() == excitations {
                    out.amps[index(n, atom)] = self.get(n, atom);
                }
            }
        }
        out
    }
}

pub(crate) fn index(n: usize, atom: AtomPrep) -> usize {
    2 * n + atom.index()
}

/// Exact evolution under `exp[−iτ(a†σ⁻ + aσ⁺)]`, applied blockwise on each
/// excitation manifold `{|N,g⟩, |N−1,e⟩}`.
///
/// The state `|n_max, e⟩` couples to `|n_max+1, g⟩`, which lies outside the
/// cutoff; any amplitude there is rejected.
pub fn jc_evolve(state: &JointState, tau: f64) -> Result<JointState> {
    if !tau.is_finite() {
        return Err(invalid("interaction time must be finite"));
    }
    let n_max = state.n_max();
    if state.get(n_max, AtomPrep::Excited) != ZERO {
        return Err(Error::Cutoff { photons: n_max + 1, n_max });
    }
    let mut out = JointState::zeros(n_max);
    out.amps[index(0, AtomPrep::Ground)] = state.get(0, AtomPrep::Ground);
    for n in 1..=n_max {
        let theta = tau * (n as f64).sqrt();
        let (s, c) = theta.sin_cos();
        let mix = Complex64::new(0.0, -s);
        let g = state.get(n, AtomPrep::Ground);
        let e = state.get(n - 1, AtomPrep::Excited);
        out.amps[index(n, AtomPrep::Ground)] = g * c + e * mix;
        out.amps[index(n - 1, AtomPrep::Excited)] = e * c + g * mix;
    }
    Ok(out)
}
