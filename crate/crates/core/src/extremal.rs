//! The maximum of `f(u) = ‖u‖_1 ‖u‖_∞` on the unit sphere.
//!
//! Up to signs and permutations, `f` agrees with `g(u) = u_1 (u_1 + … + u_n)`
//! on the maximizing region, and `g(u) = uᵀ A u` with `A = (e_1 1ᵀ + 1 e_1ᵀ) / 2`.
//! The top eigenvalue of `A` is `(√n + 1) / 2`, attained at
//! `(a, b, …, b)` with `a² = (1 + 1/√n) / 2` and `b = a / (1 + √n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ShadowError};
use crate::geometry::{criterion_product, UnitVector, CRITERION_BOUND};
use crate::measure::sample_sphere;
use crate::par;

/// Stop once the tangent gradient norm drops below this.
pub const GRADIENT_TOL: f64 = 1e-11;
pub const MAX_ITERS: usize = 100_000;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(ShadowError::InvalidDimension(0))
    } else {
        Ok(())
    }
}

/// `(√n + 1) / 2`.
pub fn closed_form_max(n: usize) -> Result<f64> {
    check_dim(n)?;
    Ok(((n as f64).sqrt() + 1.0) / 2.0)
}

/// `(a, b, …, b)` with `a = √((1 + 1/√n)/2)` and `b = 1 / (2a√n)`.
pub fn maximizer(n: usize) -> Result<UnitVector> {
    let (a, b) = maximizer_entries(n)?;
    let mut coords = vec![b; n];
    coords[0] = a;
    UnitVector::new(&coords)
}

/// The two distinct entries of [`maximizer`] before normalization.
pub fn maximizer_entries(n: usize) -> Result<(f64, f64)> {
    check_dim(n)?;
    let r = (n as f64).sqrt();
    let a = ((1.0 + 1.0 / r) / 2.0).sqrt();
    Ok((a, 1.0 / (2.0 * a * r)))
}

/// Exhaustive summary for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub n: usize,
    pub max_value: f64,
    pub maximizer: UnitVector,
    pub achieved_value: f64,
    pub threshold_ok: bool,
}

pub fn extremal_result(n: usize) -> Result<ExtremalResult> {
    let max_value = closed_form_max(n)?;
    let u = maximizer(n)?;
    Ok(ExtremalResult {
        n,
        max_value,
        achieved_value: criterion_product(&u),
        maximizer: u,
        threshold_ok: max_value <= CRITERION_BOUND,
    })
}

/// Largest `n` whose maximum stays within the criterion bound, by search.
pub fn threshold_dimension() -> usize {
    let mut n = 1;
    while closed_form_max(n + 1).expect("n >= 1") <= CRITERION_BOUND {
        n += 1;
    }
    n
}

/// `g(u) = u_1 Σ u_k`.
pub fn objective(u: &[f64]) -> f64 {
    u[0] * u.iter().sum::<f64>()
}

/// Euclidean gradient of [`objective`]: `(2u_1 + Σ_{k>1} u_k, u_1, …, u_1)`.
pub fn gradient(u: &[f64]) -> Vec<f64> {
    let sum: f64 = u.iter().sum();
    let mut g = vec![u[0]; u.len()];
    g[0] = u[0] + sum;
    g
}

/// Gradient projected onto the tangent space of the sphere at `u`.
pub fn tangent_gradient(u: &[f64]) -> Vec<f64> {
    let g = gradient(u);
    let radial: f64 = g.iter().zip(u).map(|(a, b)| a * b).sum();
    g.iter().zip(u).map(|(a, b)| a - radial * b).collect()
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericalMax {
    /// `f` at the best ascent endpoint.
    pub value: f64,
    pub argmax: UnitVector,
    pub converged_starts: usize,
    pub total_starts: usize,
}

struct Ascent {
    value: f64,
    argmax: Vec<f64>,
    converged: bool,
}

fn ascend(start: Vec<f64>) -> Ascent {
    let n = start.len();
    let step = 0.1 / (n as f64).sqrt();
    let mut u = start;
    let mut converged = false;
    for _ in 0..MAX_ITERS {
        if l2(&tangent_gradient(&u)) < GRADIENT_TOL {
            converged = true;
            break;
        }
        let g = gradient(&u);
        for (x, d) in u.iter_mut().zip(&g) {
            *x += step * d;
        }
        let r = l2(&u);
        u.iter_mut().for_each(|x| *x /= r);
    }
    let value = match UnitVector::new(&u) {
        Ok(v) => criterion_product(&v),
        Err(_) => f64::NEG_INFINITY,
    };
    Ascent {
        value,
        argmax: u,
        converged,
    }
}

/// Multi-start projected gradient ascent of `g` on the sphere.
///
/// Starts are `e_1` plus `restarts` uniform directions folded into the
/// nonnegative orthant. The best endpoint is chosen by value, then by
/// lexicographic order of the argmax, so the result does not depend on
/// scheduling.
pub fn numerical_max(n: usize, restarts: usize, seed: u64) -> Result<NumericalMax> {
    check_dim(n)?;
    let runs = par::map_range(0..restarts as u64 + 1, |i| -> Result<Ascent> {
        let start = if i == 0 {
            UnitVector::basis(n, 0)?.into_coords()
        } else {
            let u = sample_sphere(n, seed, i)?;
            u.coords().iter().map(|x| x.abs()).collect()
        };
        Ok(ascend(start))
    });
    let mut best: Option<Ascent> = None;
    let mut converged_starts = 0;
    for run in runs {
        let run = run?;
        converged_starts += usize::from(run.converged);
        let better = match &best {
            None => true,
            Some(b) => {
                run.value > b.value
                    || (run.value == b.value
                        && run.argmax.iter().map(|x| x.to_bits()).lt(b.argmax.iter().map(|x| x.to_bits())))
            }
        };
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");
    if converged_starts == 0 {
        return Err(ShadowError::NonConvergence {
            best_value: best.value,
            iterations: MAX_ITERS,
        });
    }
    Ok(NumericalMax {
        value: best.value,
        argmax: UnitVector::new(&best.argmax)?,
        converged_starts,
        total_starts: restarts + 1,
    })
}
