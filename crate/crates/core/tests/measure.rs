use rayon::ThreadPoolBuilder;

use cube_shadows::extremal::closed_form_max;
use cube_shadows::measure::{estimate, growth_scan, sample_products, sample_sphere};
use cube_shadows::oracle::{min_abs_inner_product, DEFAULT_LIMIT};

#[test]
fn coordinates_have_sphere_moments() {
    // Uniform on S^2: each coordinate has mean 0 and variance 1/3.
    let samples = 100_000u64;
    let mut sum = [0.0f64; 3];
    let mut sq = [0.0f64; 3];
    for i in 0..samples {
        let u = sample_sphere(3, 4, i).unwrap();
        for k in 0..3 {
            sum[k] += u.coords()[k];
            sq[k] += u.coords()[k] * u.coords()[k];
        }
    }
    let sigma = (1.0f64 / 3.0).sqrt();
    for k in 0..3 {
        let mean = sum[k] / samples as f64;
        assert!(mean.abs() < 4.0 * sigma / (samples as f64).sqrt(), "mean {mean}");
        let sd = (sq[k] / samples as f64 - mean * mean).sqrt();
        assert!((sd - sigma).abs() < 0.01, "sd {sd}");
    }
}

#[test]
fn products_stay_in_range() {
    for n in [1usize, 2, 3, 7, 40, 300] {
        let cap = closed_form_max(n).unwrap() + 1e-9;
        for f in sample_products(n, 5000, 12).unwrap() {
            // ‖u‖_1 ‖u‖_∞ ≥ ‖u‖_2² = 1, up to rounding.
            assert!(f >= 1.0 - 1e-15 && f <= cap, "n = {n}: {f}");
        }
    }
}

#[test]
fn bit_identical_regardless_of_thread_count() {
    let single = ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = single.install(|| growth_scan(&[3, 50, 400], 3000, 21).unwrap());
    let b = many.install(|| growth_scan(&[3, 50, 400], 3000, 21).unwrap());
    assert_eq!(a, b);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.mean_product.to_bits(), y.mean_product.to_bits());
    }
}

#[test]
fn low_dimensions_always_satisfy() {
    for n in 1..=9 {
        assert_eq!(estimate(n, 5000, 2).unwrap().frac_satisfying, 1.0, "n = {n}");
    }
}

#[test]
fn median_tracks_gaussian_heuristic() {
    // For Gaussian g: ‖g‖_1 ≈ n √(2/π), max|g_k| ≈ √(2 ln n), ‖g‖_2 ≈ √n,
    // so f ≈ √(2/π) √(2 ln n) = 2 √(ln n / π). The max of half-normals sits
    // below √(2 ln n) at moderate n, so only a loose band is asserted.
    for n in [100usize, 1000, 10_000] {
        let e = estimate(n, 2000, 5).unwrap();
        let heuristic = 2.0 * ((n as f64).ln() / std::f64::consts::PI).sqrt();
        let rel = e.median_product / heuristic;
        assert!((0.75..1.1).contains(&rel), "n = {n}: ratio {rel}");
    }
}

#[test]
fn degenerate_directions_are_never_sampled() {
    // Orthogonality to a vertex is a finite union of great subspheres.
    let hits = (0..1_000_000u64)
        .filter(|&i| {
            let u = sample_sphere(8, 2718, i).unwrap();
            min_abs_inner_product(&u, DEFAULT_LIMIT).unwrap() < 1e-9
        })
        .count();
    assert_eq!(hits, 0);
}
