//! Independent check of the closed-form evolution: build the interaction as
//! an explicit truncated matrix and exponentiate it numerically.

use ndarray::Array2;
use num_complex::Complex64;

use super::{index, jc_evolve, AtomPrep, JointState};
use crate::error::{invalid, Result};

/// Largest photon cutoff the dense oracle accepts.
pub const MAX_ORACLE_N: usize = 64;

/// `a†σ⁻ + aσ⁺` on the joint space with hard truncation at `n_max`.
pub fn hamiltonian(n_max: usize) -> Array2<Complex64> {
    let dim = 2 * (n_max + 1);
    let mut h = Array2::zeros((dim, dim));
    for n in 0..n_max {
        let g = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
        let (up, down) = (index(n + 1, AtomPrep::Ground), index(n, AtomPrep::Excited));
        h[[up, down]] = g;
        h[[down, up]] = g;
    }
    h
}

fn frobenius(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense matrix exponential by Taylor summation with scaling and squaring.
///
/// The matrix is halved until its Frobenius norm (an upper bound on the
/// 2-norm) drops below 0.5, summed to machine precision, then squared back.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let dim = a.nrows();
    assert_eq!(dim, a.ncols(), "expm needs a square matrix");
    let norm = frobenius(a);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale >= 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let scaled = a.mapv(|c| c * scale);

    let mut sum = Array2::<Complex64>::eye(dim);
    let mut term = Array2::<Complex64>::eye(dim);
    for k in 1..=60 {
        term = term.dot(&scaled).mapv(|c| c / k as f64);
        sum += &term;
        if frobenius(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

/// `exp(−iτ H)` for the truncated interaction matrix.
pub fn expm_oracle(tau: f64, n_max: usize) -> Result<Array2<Complex64>> {
    if n_max > MAX_ORACLE_N {
        return Err(invalid(format!("oracle cutoff {n_max} exceeds {MAX_ORACLE_N}")));
    }
    if !tau.is_finite() {
        return Err(invalid("interaction time must be finite"));
    }
    let generator = hamiltonian(n_max).mapv(|h| h * Complex64::new(0.0, -tau));
    Ok(expm(&generator))
}

/// Closed-form propagator assembled column by column from [`jc_evolve`].
/// The column of `|n_max, e⟩` is left zero since its image is outside the cutoff.
pub fn closed_form_matrix(tau: f64, n_max: usize) -> Result<Array2<Complex64>> {
    let dim = 2 * (n_max + 1);
    let mut u = Array2::zeros((dim, dim));
    for n in 0..=n_max {
        for atom in [AtomPrep::Ground, AtomPrep::Excited] {
            if n == n_max && atom == AtomPrep::Excited {
                continue;
            }
            let col = jc_evolve(&JointState::basis(n, atom, n_max)?, tau)?;
            for (row, amp) in col.amps().iter().enumerate() {
                u[[row, index(n, atom)]] = *amp;
            }
        }
    }
    Ok(u)
}

/// Largest elementwise gap between the closed form and the dense oracle,
/// excluding the truncation-corrupted `|n_max, e⟩` column and row.
pub fn oracle_deviation(tau: f64, n_max: usize) -> Result<f64> {
    let exact = closed_form_matrix(tau, n_max)?;
    let dense = expm_oracle(tau, n_max)?;
    let top = index(n_max, AtomPrep::Excited);
    let mut worst = 0.0f64;
    for ((r, c), a) in exact.indexed_iter() {
        if r == top || c == top {
            continue;
        }
        worst = worst.max((a - dense[[r, c]]).norm());
    }
    Ok(worst)
}
