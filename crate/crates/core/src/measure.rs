//! Monte Carlo statistics of `f(u) = ‖u‖_1 ‖u‖_∞` under the uniform measure
//! on the sphere.
//!
//! Sample `i` of seed `s` is drawn from ChaCha8 stream `i` keyed by `s`, so
//! every sample can be regenerated on its own and parallel runs reproduce
//! sequential ones exactly.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ShadowError};
use crate::exact::exact_sum;
use crate::geometry::{criterion_product, Tolerances, UnitVector, CRITERION_BOUND};
use crate::par;

const MAX_RETRIES: usize = 100;
const MIN_GAUSSIAN_NORM: f64 = 1e-8;

/// Uniform point on `S^(n-1)`: a normalized standard Gaussian vector.
pub fn sample_sphere(n: usize, seed: u64, index: u64) -> Result<UnitVector> {
    if n == 0 {
        return Err(ShadowError::InvalidDimension(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut g = vec![0.0f64; n];
    for _ in 0..MAX_RETRIES {
        g.iter_mut().for_each(|x| *x = StandardNormal.sample(&mut rng));
        if g.iter().map(|x| x * x).sum::<f64>().sqrt() >= MIN_GAUSSIAN_NORM {
            return UnitVector::new(&g);
        }
    }
    Err(ShadowError::DegenerateSample { n, seed, index })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub frac_satisfying: f64,
    pub mean_product: f64,
    pub median_product: f64,
    pub q05: f64,
    pub q95: f64,
    /// `median / √(ln n)`, only for `n ≥ 3`.
    pub growth_ratio: Option<f64>,
}

/// Nearest-rank quantile of an ascending slice.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// `f(u)` for samples `0..samples`, in index order.
pub fn sample_products(n: usize, samples: u64, seed: u64) -> Result<Vec<f64>> {
    par::map_range(0..samples, |i| sample_sphere(n, seed, i).map(|u| criterion_product(&u)))
        .into_iter()
        .collect()
}

pub fn estimate(n: usize, samples: u64, seed: u64) -> Result<MeasureEstimate> {
    estimate_with(n, samples, seed, &Tolerances::default())
}

/// Statistics of `f` over `samples` uniform directions. A sample satisfies
/// the criterion when `f ≤ 2 + tol.criterion`.
pub fn estimate_with(n: usize, samples: u64, seed: u64, tol: &Tolerances) -> Result<MeasureEstimate> {
    if samples == 0 {
        return Err(ShadowError::InvalidDimension(0));
    }
    let mut f = sample_products(n, samples, seed)?;
    let satisfying = f.iter().filter(|&&x| x <= CRITERION_BOUND + tol.criterion).count();
    let mean_product = exact_sum(&f) / samples as f64;
    f.sort_by(f64::total_cmp);
    let median_product = nearest_rank(&f, 0.5);
    Ok(MeasureEstimate {
        n,
        samples,
        seed,
        frac_satisfying: satisfying as f64 / samples as f64,
        mean_product,
        median_product,
        q05: nearest_rank(&f, 0.05),
        q95: nearest_rank(&f, 0.95),
        growth_ratio: (n >= 3).then(|| median_product / (n as f64).ln().sqrt()),
    })
}

/// One estimate per dimension, all with the same seed.
pub fn growth_scan(dims: &[usize], samples: u64, seed: u64) -> Result<Vec<MeasureEstimate>> {
    growth_scan_with(dims, samples, seed, &Tolerances::default())
}

pub fn growth_scan_with(
    dims: &[usize],
    samples: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<MeasureEstimate>> {
    if dims.is_empty() {
        return Err(ShadowError::InvalidDimension(0));
    }
    dims.iter().map(|&n| estimate_with(n, samples, seed, tol)).collect()
}

/// Least-squares slope of the median against `√(ln n)` over rows with
/// `n ≥ 3`. `None` with fewer than two such rows.
pub fn fit_slope(rows: &[MeasureEstimate]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= 3)
        .map(|r| ((r.n as f64).ln().sqrt(), r.median_product))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_sphere() {
        for i in 0..50 {
            let u = sample_sphere(1, 9, i).unwrap();
            assert_eq!(u.coords()[0].abs(), 1.0);
        }
    }

    #[test]
    fn deterministic_per_index() {
        let a = sample_sphere(6, 5, 17).unwrap();
        let b = sample_sphere(6, 5, 17).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_sphere(6, 5, 18).unwrap());
        assert_ne!(a, sample_sphere(6, 6, 17).unwrap());
    }

    #[test]
    fn nearest_rank_definition() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(nearest_rank(&v, 0.5), 3.0);
        assert_eq!(nearest_rank(&v, 0.05), 1.0);
        assert_eq!(nearest_rank(&v, 0.95), 5.0);
        assert_eq!(nearest_rank(&[7.0], 0.5), 7.0);
        assert_eq!(nearest_rank(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.0);
    }

    #[test]
    fn small_dimensions_always_satisfy() {
        for n in [1usize, 2, 5, 9] {
            let e = estimate(n, 2000, 3).unwrap();
            assert_eq!(e.frac_satisfying, 1.0, "n = {n}");
            assert!(e.q05 <= e.median_product && e.median_product <= e.q95);
        }
        assert_eq!(estimate(2, 10, 0).unwrap().growth_ratio, None);
        assert!(estimate(3, 10, 0).unwrap().growth_ratio.is_some());
    }

    #[test]
    fn rejects_empty_requests() {
        assert!(estimate(3, 0, 0).is_err());
        assert!(growth_scan(&[], 10, 0).is_err());
        assert!(sample_sphere(0, 0, 0).is_err());
    }

    #[test]
    fn slope_of_linear_data() {
        let rows: Vec<MeasureEstimate> = [3usize, 10, 100]
            .iter()
            .map(|&n| MeasureEstimate {
                n,
                samples: 1,
                seed: 0,
                frac_satisfying: 0.0,
                mean_product: 0.0,
                median_product: 0.5 + 1.25 * (n as f64).ln().sqrt(),
                q05: 0.0,
                q95: 0.0,
                growth_ratio: None,
            })
            .collect();
        assert!((fit_slope(&rows).unwrap() - 1.25).abs() < 1e-12);
        assert_eq!(fit_slope(&rows[..1]), None);
    }
}
