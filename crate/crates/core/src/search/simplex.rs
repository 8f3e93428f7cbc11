//! Nelder–Mead downhill simplex.

use std::cell::Cell;

/// Stopping rules and starting simplex size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Edge length of the axis-aligned starting simplex.
    pub initial_edge: f64,
    /// Stop once the largest vertex-to-vertex distance falls below this.
    pub diameter_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { initial_edge: 1e-3, diameter_tol: 1e-12, max_evals: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let mut d = 0.0f64;
    for (i, a) in simplex.iter().enumerate() {
        for b in &simplex[i + 1..] {
            let dist = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            d = d.max(dist);
        }
    }
    d
}

/// `c + t (c − w)`.
fn along(centroid: &[f64], worst: &[f64], t: f64) -> Vec<f64> {
    centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect()
}

/// Minimizes `f` from `x0`. Non-finite values are treated as `+∞`, which
/// keeps the walk inside whatever region `f` reports as feasible.
///
/// The returned point is never worse than `x0`.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let evals = Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += opts.initial_edge;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut converged = false;
    loop {
        // order vertices best to worst; ties keep insertion order
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if diameter(&simplex) < opts.diameter_tol {
            converged = true;
            break;
        }
        if evals.get() >= opts.max_evals || dim == 0 {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let best = values[0];
        let second_worst = values[dim - 1];
        let worst = values[dim];

        let xr = along(&centroid, &simplex[dim], REFLECT);
        let fr = eval(&xr);
        if fr < best {
            let xe = along(&centroid, &simplex[dim], EXPAND);
            let fe = eval(&xe);
            if fe < fr {
                simplex[dim] = xe;
                values[dim] = fe;
            } else {
                simplex[dim] = xr;
                values[dim] = fr;
            }
            continue;
        }
        if fr < second_worst {
            simplex[dim] = xr;
            values[dim] = fr;
            continue;
        }
        if fr < worst {
            let xc = along(&centroid, &simplex[dim], REFLECT * CONTRACT);
            let fc = eval(&xc);
            if fc <= fr {
                simplex[dim] = xc;
                values[dim] = fc;
                continue;
            }
        } else {
            let xc = along(&centroid, &simplex[dim], -CONTRACT);
            let fc = eval(&xc);
            if fc < worst {
                simplex[dim] = xc;
                values[dim] = fc;
                continue;
            }
        }
        let anchor = simplex[0].clone();
        for i in 1..=dim {
            let v: Vec<f64> = anchor.iter().zip(&simplex[i]).map(|(a, x)| a + SHRINK * (x - a)).collect();
            values[i] = eval(&v);
            simplex[i] = v;
        }
    }

    SimplexResult { x: simplex[0].clone(), fx: values[0], evals: evals.get(), converged }
}
