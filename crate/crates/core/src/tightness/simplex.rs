//! Nelder–Mead downhill simplex.

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Edge length of the initial simplex along each coordinate.
    pub initial_step: f64,
    /// Stop when the simplex diameter (max-norm) and the spread of values
    /// both fall below these.
    pub x_tol: f64,
    pub f_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { max_iterations: 300, initial_step: 0.5, x_tol: 1e-6, f_tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f(x, iteration)`; the iteration index is passed through so
/// callers can log evaluations.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], options: &SimplexOptions) -> Result<SimplexResult>
where
    F: FnMut(&[f64], usize) -> Result<f64>,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0, 0)?));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += options.initial_step;
        let fx = f(&x, 0)?;
        simplex.push((x, fx));
    }

    let point = |c: &[f64], toward: &[f64], s: f64| -> Vec<f64> {
        c.iter().zip(toward).map(|(ci, ti)| ci + s * (ti - ci)).collect()
    };

    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iterations {
        // stable sort keeps the older vertex first on ties
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= options.f_tol && diameter <= options.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let reflected = point(&centroid, &worst, -REFLECT);
        let fr = f(&reflected, iterations)?;

        if fr < simplex[0].1 {
            let expanded = point(&centroid, &worst, -EXPAND);
            let fe = f(&expanded, iterations)?;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < simplex[n].1 {
            let c = point(&centroid, &reflected, CONTRACT);
            let fc = f(&c, iterations)?;
            (c, fc)
        } else {
            let c = point(&centroid, &worst, CONTRACT);
            let fc = f(&c, iterations)?;
            (c, fc)
        };
        if fc < fr.min(simplex[n].1) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = point(&best, &vertex.0, SHRINK);
            let fx = f(&x, iterations)?;
            *vertex = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    Ok(SimplexResult { x, f: fx, iterations, converged })
}
