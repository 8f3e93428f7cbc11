//! Laboratory units: `κ = Ω g / 2Δ` and `t = τ / κ`.
//!
//! Every frequency is an angular frequency in rad/s.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// One-photon Rabi frequency of the signal mode.
    pub g: f64,
    /// Rabi frequency of the classical Raman field.
    pub omega: f64,
    /// Detuning from the intermediate level.
    pub delta: f64,
}

impl PhysicalParams {
    pub fn new(g: f64, omega: f64, delta: f64) -> Result<Self> {
        let p = Self { g, omega, delta };
        p.validate()?;
        Ok(p)
    }

    /// Single falling rubidium atoms in a high-finesse cavity:
    /// `g = 2π·4.5 MHz`, `Ω = 2π·30 MHz`, `Δ = 2π·6 MHz`.
    pub fn rubidium_cavity() -> Self {
        Self { g: 2.0 * PI * 4.5e6, omega: 2.0 * PI * 30e6, delta: 2.0 * PI * 6e6 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta == 0.0 {
            return Err(invalid("detuning must be nonzero"));
        }
        for (name, v) in [("g", self.g), ("omega", self.omega), ("delta", self.delta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Set when `Δ` is less than twice the larger Rabi frequency, where the
    /// effective two-level description becomes questionable.
    pub fn regime_warning(&self) -> Option<String> {
        let rabi = self.g.max(self.omega);
        (self.delta < 2.0 * rabi).then(|| {
            format!(
                "detuning {:.4e} rad/s is not large compared with the Rabi frequency {:.4e} rad/s",
                self.delta, rabi
            )
        })
    }
}

/// Effective coupling `κ = Ω g / (2Δ)` in rad/s.
pub fn kappa(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    Ok(p.omega * p.g / (2.0 * p.delta))
}

/// Laboratory time in seconds for dimensionless time `τ`.
pub fn interaction_time(tau: f64, p: &PhysicalParams) -> Result<f64> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(invalid(format!("interaction time must be non-negative, got {tau}")));
    }
    Ok(tau / kappa(p)?)
}

/// Parses a frequency such as `2pi*4.5e6`, `2*pi*4.5e6` or `2.827e7`.
/// With `hz = true` a bare number is read in Hz and converted to rad/s.
pub fn parse_frequency(text: &str, hz: bool) -> Result<f64> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = compact.to_ascii_lowercase();
    let (factor, rest) = if let Some(r) = lower.strip_prefix("2pi*").or_else(|| lower.strip_prefix("2*pi*")) {
        (2.0 * PI, r)
    } else if hz {
        (2.0 * PI, lower.as_str())
    } else {
        (1.0, lower.as_str())
    };
    let value: f64 = rest.parse().map_err(|_| invalid(format!("cannot parse frequency {text:?}")))?;
    Ok(factor * value)
}
