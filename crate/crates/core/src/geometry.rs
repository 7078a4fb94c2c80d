//! Projections of cube vertices onto a central hyperplane and the
//! `‖u‖_1 ‖u‖_∞ ≤ 2` criterion.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ShadowError};
use crate::exact::{exact_sum, ExactTerms};

/// Coordinates with `|u_k| ≤ ZERO_TOL` are treated as zero.
pub const ZERO_TOL: f64 = 1e-13;
/// Slack on the section boundary `‖π_u(ε)‖_∞ = 1`.
pub const INSIDE_TOL: f64 = 1e-12;
/// Slack on the criterion bound. The bound is inclusive.
pub const CRITERION_TOL: f64 = 0.0;
/// The criterion threshold.
pub const CRITERION_BOUND: f64 = 2.0;

/// Tolerance for `| ‖u‖_2 - 1 |` after normalization.
pub fn norm_tol(n: usize) -> f64 {
    1e-12 * (n as f64).sqrt()
}

/// Floating-point cutoffs used by the criterion and shadow checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero: f64,
    pub inside: f64,
    pub criterion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: ZERO_TOL,
            inside: INSIDE_TOL,
            criterion: CRITERION_TOL,
        }
    }
}

impl Tolerances {
    /// Shrinks the criterion bound to `2 - margin`.
    pub fn with_margin(margin: f64) -> Self {
        Tolerances {
            criterion: -margin,
            ..Default::default()
        }
    }
}

/// A point of the unit sphere `S^(n-1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Normalizes `raw`. Only empty, non-finite or all-zero input is rejected.
    ///
    /// The Euclidean norm is computed from an exactly rounded sum of squares
    /// after scaling by the largest entry, so permuting or sign-flipping the
    /// input permutes or sign-flips the output bit for bit.
    pub fn new(raw: &[f64]) -> Result<Self> {
        let scaled = scaled_by_max(raw)?;
        let l2 = exact_l2(&scaled);
        Ok(UnitVector {
            coords: scaled.iter().map(|x| x / l2).collect(),
        })
    }

    /// `e_k` in dimension `n` (0-based `k`).
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(ShadowError::InvalidDimension(0));
        }
        if k >= n {
            return Err(ShadowError::DimensionMismatch {
                expected: n,
                found: k + 1,
            });
        }
        let mut coords = vec![0.0; n];
        coords[k] = 1.0;
        Ok(UnitVector { coords })
    }

    /// `(1/√n, …, 1/√n)`.
    pub fn diagonal(n: usize) -> Result<Self> {
        UnitVector::new(&vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = ShadowError;

    fn try_from(raw: Vec<f64>) -> Result<Self> {
        UnitVector::new(&raw)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Self {
        u.coords
    }
}

fn scaled_by_max(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(ShadowError::InvalidDimension(0));
    }
    if let Some(index) = raw.iter().position(|x| !x.is_finite()) {
        return Err(ShadowError::NonFinite { index });
    }
    let max = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return Err(ShadowError::ZeroVector);
    }
    Ok(raw.iter().map(|x| x / max).collect())
}

fn exact_l2(values: &[f64]) -> f64 {
    let squares: Vec<f64> = values.iter().map(|x| x * x).collect();
    exact_sum(&squares).sqrt()
}

/// Euclidean norm of an arbitrary finite nonzero vector, overflow-safe.
pub fn input_norm(raw: &[f64]) -> Result<f64> {
    let max = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(exact_l2(&scaled_by_max(raw)?) * max)
}

/// A cube vertex: a vector of signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Vertex {
    signs: Vec<i8>,
}

impl Vertex {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(ShadowError::InvalidDimension(0));
        }
        if let Some(index) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(ShadowError::InvalidSign { index });
        }
        Ok(Vertex { signs })
    }

    pub fn all_ones(n: usize) -> Self {
        Vertex { signs: vec![1; n] }
    }

    /// Vertex whose coordinate `k` is `-1` iff bit `n - 1 - k` of `mask` is
    /// set. With this layout, numeric order of masks is the lexicographic
    /// order of sign patterns with `+1 < -1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let signs = (0..n)
            .map(|k| if mask >> (n - 1 - k) & 1 == 1 { -1 } else { 1 })
            .collect();
        Vertex { signs }
    }

    pub fn mask(&self) -> u64 {
        let n = self.signs.len();
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0u64, |m, (k, _)| m | 1 << (n - 1 - k))
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn negated(&self) -> Self {
        Vertex {
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.signs.iter().map(|&s| f64::from(s)).collect()
    }
}

impl TryFrom<Vec<i8>> for Vertex {
    type Error = ShadowError;

    fn try_from(signs: Vec<i8>) -> Result<Self> {
        Vertex::new(signs)
    }
}

impl From<Vertex> for Vec<i8> {
    fn from(v: Vertex) -> Self {
        v.signs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// `‖u‖_1`, `‖u‖_2`, `‖u‖_∞`. The sums are exactly rounded, so every norm is
/// invariant under permutations and sign flips of `u`.
pub fn norms(u: &UnitVector) -> Norms {
    let abs: Vec<f64> = u.coords.iter().map(|x| x.abs()).collect();
    Norms {
        l1: exact_sum(&abs),
        l2: exact_l2(&u.coords),
        linf: abs.iter().fold(0.0, |m, &x| m.max(x)),
    }
}

/// `‖u‖_1 ‖u‖_∞`.
pub fn criterion_product(u: &UnitVector) -> f64 {
    let n = norms(u);
    n.l1 * n.linf
}

/// Orthogonal projection `x - <x, u> u` onto `H_u`.
pub fn project(u: &UnitVector, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(u.dim(), x.len())?;
    let dot: f64 = x.iter().zip(&u.coords).map(|(a, b)| a * b).sum();
    Ok(x.iter().zip(&u.coords).map(|(a, b)| a - dot * b).collect())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(ShadowError::DimensionMismatch { expected, found })
    }
}

/// The vertex matching the signs of `u`, with `+1` wherever `|u_k| ≤ zero_tol`.
pub fn canonical_vertex(u: &UnitVector) -> Vertex {
    canonical_vertex_with(u, ZERO_TOL)
}

pub fn canonical_vertex_with(u: &UnitVector, zero_tol: f64) -> Vertex {
    Vertex {
        signs: u
            .coords
            .iter()
            .map(|&x| if x < -zero_tol { -1 } else { 1 })
            .collect(),
    }
}

/// Image of one vertex under `π_u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub vertex: Vertex,
    pub shadow: Vec<f64>,
    pub inf_norm: f64,
    pub inside: bool,
    pub inner_product: f64,
}

/// Exactly rounded `<ε, u>`.
pub fn vertex_inner_product(u: &UnitVector, eps: &Vertex) -> Result<f64> {
    check_dim(u.dim(), eps.dim())?;
    Ok(ExactTerms::new(&u.coords).signed_sum(|k| eps.signs[k] < 0))
}

/// Shadow coordinates `ε_k - <ε, u> u_k` and the inside verdict.
pub fn shadow(u: &UnitVector, eps: &Vertex) -> Result<ShadowReport> {
    shadow_with(u, eps, INSIDE_TOL)
}

pub fn shadow_with(u: &UnitVector, eps: &Vertex, inside_tol: f64) -> Result<ShadowReport> {
    let s = vertex_inner_product(u, eps)?;
    let shadow: Vec<f64> = eps
        .signs
        .iter()
        .zip(&u.coords)
        .map(|(&e, &x)| f64::from(e) - s * x)
        .collect();
    let inf_norm = shadow.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    Ok(ShadowReport {
        vertex: eps.clone(),
        shadow,
        inf_norm,
        inside: inf_norm <= 1.0 + inside_tol,
        inner_product: s,
    })
}

/// `‖π_u(ε)‖_∞` for the canonical vertex, from the norms of `u` alone.
///
/// With a zero coordinate present this is `max{1, |1 - ‖u‖_∞‖u‖_1|}`. With
/// every coordinate nonzero the `±1` entries are absent and the value is
/// `max_k |1 - |u_k| ‖u‖_1|`, attained at the largest or smallest `|u_k|`.
pub fn shadow_norm_closed_form(u: &UnitVector) -> f64 {
    shadow_norm_closed_form_with(u, ZERO_TOL)
}

pub fn shadow_norm_closed_form_with(u: &UnitVector, zero_tol: f64) -> f64 {
    let Norms { l1, linf, .. } = norms(u);
    let at_max = (1.0 - linf * l1).abs();
    let min = u.coords.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if min <= zero_tol {
        at_max.max(1.0)
    } else {
        at_max.max((1.0 - min * l1).abs())
    }
}

/// Outcome of the norm criterion for one direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub product: f64,
    pub satisfied: bool,
    pub witness: Vertex,
    pub degenerate_zero_coords: bool,
    /// Present only when the orthogonality detector was run.
    pub near_vertex_orthogonal: Option<bool>,
}

pub fn criterion(u: &UnitVector) -> CriterionResult {
    criterion_with(u, &Tolerances::default())
}

pub fn criterion_with(u: &UnitVector, tol: &Tolerances) -> CriterionResult {
    let product = criterion_product(u);
    CriterionResult {
        product,
        satisfied: product <= CRITERION_BOUND + tol.criterion,
        witness: canonical_vertex_with(u, tol.zero),
        degenerate_zero_coords: u.coords.iter().any(|x| x.abs() <= tol.zero),
        near_vertex_orthogonal: None,
    }
}
