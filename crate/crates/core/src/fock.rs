//! Truncated Fock-space vectors for a single optical mode.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::jc::DiagonalKraus;

/// Tolerance used when deciding whether a vector counts as normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Below this norm a vector is treated as the zero vector.
const ZERO_NORM: f64 = 1e-300;

/// Amplitudes `c_n` for photon numbers `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
    norm: f64,
}

impl FockVector {
    /// Builds a vector from amplitudes without renormalizing.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(invalid("a Fock vector needs at least one amplitude"));
        }
        if let Some(n) = amps.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid(format!("amplitude c_{n} is not finite")));
        }
        let norm = l2(&amps);
        Ok(Self { amps, norm })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The number state `|n⟩` truncated at `n_max`.
    pub fn number_state(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::Cutoff { photons: n, n_max });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n_max + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// Equal-weight superposition with `|c_n|² = 1/(n_max+1)`.
    pub fn uniform(n_max: usize) -> Self {
        let c = Complex64::new(1.0 / ((n_max + 1) as f64).sqrt(), 0.0);
        Self::new(vec![c; n_max + 1]).expect("uniform amplitudes are finite")
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm - 1.0).abs() <= NORM_TOL
    }

    /// Returns `v / |v|`. The global phase is left untouched.
    pub fn normalize(&self) -> Result<Self> {
        if self.norm <= ZERO_NORM {
            return Err(Error::ImpossibleOutcome);
        }
        let amps: Vec<Complex64> = self.amps.iter().map(|c| c / self.norm).collect();
        Self::new(amps)
    }

    /// Applies a conditional map `c_n → A_n c_n`, landing on `n + shift`.
    ///
    /// Returns the unnormalized conditioned vector together with the outcome
    /// probability `Σ |A_n c_n|²`.
    pub fn apply_diagonal(&self, kraus: &DiagonalKraus) -> Result<(FockVector, f64)> {
        let n_max = self.n_max();
        let coeffs = kraus.coeffs();
        if coeffs.len() < n_max + 1 {
            return Err(invalid(format!(
                "Kraus operator is defined up to n = {} but the state reaches n = {n_max}",
                coeffs.len() as isize - 1
            )));
        }
        let shift = kraus.shift();
        let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
        for (n, (&c, &a)) in self.amps.iter().zip(coeffs).enumerate() {
            let amp = a * c;
            let target = n as i64 + shift as i64;
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            if target < 0 {
                return Err(invalid(format!("outcome maps photon number {n} below the vacuum")));
            }
            let target = target as usize;
            if target > n_max {
                return Err(Error::Cutoff { photons: target, n_max });
            }
            out[target] = amp;
        }
        let v = FockVector::new(out)?;
        let p = v.norm * v.norm;
        Ok((v, p))
    }

    /// Squared modulus of each amplitude.
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }
}

pub(crate) fn l2(amps: &[Complex64]) -> f64 {
    amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
