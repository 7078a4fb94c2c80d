//! Exhaustive search over all `2^n` cube vertices.
//!
//! Vertices are enumerated in Gray-code order so that consecutive vertices
//! differ in a single sign and `<ε, u>` is updated with one exact addition.
//! The shadow norm `max_k |ε_k - s u_k|` is then read off from the extreme
//! values of `u` over the `+1` and `-1` coordinates: for fixed `s` each
//! group's entries are a monotone function of `u_k`, so the maximum absolute
//! entry sits at the smallest or largest `u_k` of the group. This holds for
//! the rounded values too, so the fast path matches a coordinate-by-coordinate
//! evaluation bit for bit.
//!
//! Only vertices with `ε_1 = +1` are visited. `ε` and `-ε` have shadows of
//! equal norm and `|<ε, u>|`, and `ε_1 = +1` picks the lexicographically
//! smaller one of each pair.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ShadowError};
use crate::exact::{ExactTerms, FixedInt, Terms};
use crate::geometry::{criterion, UnitVector, Vertex, INSIDE_TOL};
use crate::measure::sample_sphere;
use crate::par;

/// Largest dimension enumerated unless overridden.
pub const DEFAULT_LIMIT: usize = 28;
/// `|<ε, u>| ≤ ORTHO_TOL` counts as orthogonal in verdicts.
pub const ORTHO_TOL: f64 = 1e-12;
/// Samples closer than this to a degenerate direction are skipped by sweeps.
pub const SKIP_TOL: f64 = 1e-9;
/// Hard cap: vertex masks are `u64` and the pair count must fit.
pub const MAX_LIMIT: usize = 63;

/// Coordinates whose extremes are tabulated per sign pattern.
const LOW_BITS: usize = 8;
/// Gray-code steps per independently seeded block.
const BLOCK_LEN: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub limit: usize,
    pub inside_tol: f64,
    pub ortho_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            limit: DEFAULT_LIMIT,
            inside_tol: INSIDE_TOL,
            ortho_tol: ORTHO_TOL,
        }
    }
}

impl OracleConfig {
    pub fn with_limit(limit: usize) -> Self {
        OracleConfig {
            limit,
            ..Default::default()
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let limit = self.limit.min(MAX_LIMIT);
        if n > limit {
            Err(ShadowError::DimensionTooLarge { n, limit })
        } else {
            Ok(())
        }
    }
}

/// Ground truth over every vertex of the cube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub exists_inside: bool,
    /// Minimizes the shadow norm; ties go to the lexicographically smallest
    /// sign pattern with `+1 < -1`.
    pub best_vertex: Vertex,
    pub best_inf_norm: f64,
    pub vertices_checked: u64,
    pub orthogonal_vertex_found: bool,
    pub min_abs_inner_product: f64,
}

/// Per-block fold state. Merging is associative and commutative.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Partial {
    best_norm: f64,
    best_mask: u64,
    min_abs: f64,
}

impl Partial {
    const EMPTY: Partial = Partial {
        best_norm: f64::INFINITY,
        best_mask: u64::MAX,
        min_abs: f64::INFINITY,
    };

    #[inline]
    fn consider(&mut self, mask: u64, norm: f64) {
        if norm < self.best_norm || (norm == self.best_norm && mask < self.best_mask) {
            self.best_norm = norm;
            self.best_mask = mask;
        }
    }

    #[inline]
    fn visit(&mut self, mask: u64, norm: f64, s: f64) {
        self.consider(mask, norm);
        self.min_abs = self.min_abs.min(s.abs());
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.consider(other.best_mask, other.best_norm);
        self.min_abs = self.min_abs.min(other.min_abs);
        self
    }

    fn into_verdict(self, n: usize, cfg: &OracleConfig) -> OracleVerdict {
        OracleVerdict {
            exists_inside: self.best_norm <= 1.0 + cfg.inside_tol,
            best_vertex: Vertex::from_mask(n, self.best_mask),
            best_inf_norm: self.best_norm,
            vertices_checked: 1u64 << n,
            orthogonal_vertex_found: self.min_abs <= cfg.ortho_tol,
            min_abs_inner_product: self.min_abs,
        }
    }
}

/// Smallest and largest `u_k` over the `+1` and the `-1` coordinates.
#[derive(Debug, Clone, Copy)]
struct Extremes {
    pos_min: f64,
    pos_max: f64,
    neg_min: f64,
    neg_max: f64,
}

impl Extremes {
    const EMPTY: Extremes = Extremes {
        pos_min: f64::INFINITY,
        pos_max: f64::NEG_INFINITY,
        neg_min: f64::INFINITY,
        neg_max: f64::NEG_INFINITY,
    };

    fn add(&mut self, x: f64, negative: bool) {
        if negative {
            self.neg_min = self.neg_min.min(x);
            self.neg_max = self.neg_max.max(x);
        } else {
            self.pos_min = self.pos_min.min(x);
            self.pos_max = self.pos_max.max(x);
        }
    }

    #[inline]
    fn join(&self, o: &Extremes) -> Extremes {
        Extremes {
            pos_min: self.pos_min.min(o.pos_min),
            pos_max: self.pos_max.max(o.pos_max),
            neg_min: self.neg_min.min(o.neg_min),
            neg_max: self.neg_max.max(o.neg_max),
        }
    }

    /// `max_k |ε_k - s u_k|`, evaluated at the group extremes.
    #[inline]
    fn shadow_norm(&self, s: f64) -> f64 {
        let mut m = 0.0f64;
        if self.pos_min <= self.pos_max {
            m = m.max((1.0 - s * self.pos_min).abs());
            m = m.max((1.0 - s * self.pos_max).abs());
        }
        if self.neg_min <= self.neg_max {
            m = m.max((-1.0 - s * self.neg_min).abs());
            m = m.max((-1.0 - s * self.neg_max).abs());
        }
        m
    }
}

#[inline]
fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Shared read-only state for one enumeration.
struct Kernel<'a, T> {
    coords: &'a [f64],
    terms: &'a Terms<T>,
    low_bits: usize,
    low_table: Vec<Extremes>,
}

impl<'a, T: FixedInt> Kernel<'a, T> {
    fn new(coords: &'a [f64], terms: &'a Terms<T>) -> Self {
        let n = coords.len();
        let low_bits = LOW_BITS.min(n - 1);
        // Bit b of a mask is coordinate n - 1 - b.
        let low_table = (0..1u64 << low_bits)
            .map(|p| {
                let mut e = Extremes::EMPTY;
                for b in 0..low_bits {
                    e.add(coords[n - 1 - b], p >> b & 1 == 1);
                }
                e
            })
            .collect();
        Kernel {
            coords,
            terms,
            low_bits,
            low_table,
        }
    }

    fn high_extremes(&self, mask: u64) -> Extremes {
        let n = self.coords.len();
        let mut e = Extremes::EMPTY;
        for b in self.low_bits..n {
            e.add(self.coords[n - 1 - b], mask >> b & 1 == 1);
        }
        e
    }

    /// Folds Gray-code indices `start..end` over the `n - 1` free bits.
    fn run_block(&self, start: u64, end: u64) -> Partial {
        let n = self.coords.len();
        let low_mask = (1u64 << self.low_bits) - 1;
        let mut mask = gray(start);
        let mut acc = self.terms.signed_sum(|k| mask >> (n - 1 - k) & 1 == 1);
        let mut high = self.high_extremes(mask);
        let mut out = Partial::EMPTY;

        let s = self.terms.round(&acc);
        out.visit(mask, high.join(&self.low_table[(mask & low_mask) as usize]).shadow_norm(s), s);

        for i in start + 1..end {
            let bit = i.trailing_zeros() as usize;
            mask ^= 1 << bit;
            self.terms.flip(&mut acc, n - 1 - bit, mask >> bit & 1 == 1);
            if bit >= self.low_bits {
                high = self.high_extremes(mask);
            }
            let s = self.terms.round(&acc);
            let ext = high.join(&self.low_table[(mask & low_mask) as usize]);
            out.visit(mask, ext.shadow_norm(s), s);
        }
        out
    }

    /// Only tracks `min |<ε, u>|`.
    fn run_block_inner(&self, start: u64, end: u64) -> f64 {
        let n = self.coords.len();
        let mut mask = gray(start);
        let mut acc = self.terms.signed_sum(|k| mask >> (n - 1 - k) & 1 == 1);
        let mut min_abs = self.terms.round(&acc).abs();
        for i in start + 1..end {
            let bit = i.trailing_zeros() as usize;
            mask ^= 1 << bit;
            self.terms.flip(&mut acc, n - 1 - bit, mask >> bit & 1 == 1);
            min_abs = min_abs.min(self.terms.round(&acc).abs());
        }
        min_abs
    }
}

fn blocks(pairs: u64) -> impl Fn(u64) -> (u64, u64) {
    move |b| (b * BLOCK_LEN, ((b + 1) * BLOCK_LEN).min(pairs))
}

fn block_count(pairs: u64) -> u64 {
    pairs.div_ceil(BLOCK_LEN)
}

fn enumerate_terms<T: FixedInt>(coords: &[f64], terms: &Terms<T>) -> Partial {
    let kernel = Kernel::new(coords, terms);
    let pairs = 1u64 << (coords.len() - 1);
    let range = blocks(pairs);
    par::map_range(0..block_count(pairs), |b| {
        let (start, end) = range(b);
        kernel.run_block(start, end)
    })
    .into_iter()
    .fold(Partial::EMPTY, Partial::merge)
}

fn min_abs_terms<T: FixedInt>(coords: &[f64], terms: &Terms<T>) -> f64 {
    let kernel = Kernel::new(coords, terms);
    let pairs = 1u64 << (coords.len() - 1);
    let range = blocks(pairs);
    par::map_range(0..block_count(pairs), |b| {
        let (start, end) = range(b);
        kernel.run_block_inner(start, end)
    })
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

/// Visits every vertex and reports the best shadow and the closest approach
/// to orthogonality. Fails with `DimensionTooLarge` when `n > limit`.
pub fn enumerate_shadows(u: &UnitVector, limit: usize) -> Result<OracleVerdict> {
    enumerate_shadows_with(u, &OracleConfig::with_limit(limit))
}

pub fn enumerate_shadows_with(u: &UnitVector, cfg: &OracleConfig) -> Result<OracleVerdict> {
    let n = u.dim();
    cfg.check(n)?;
    let coords = u.coords();
    let partial = match ExactTerms::new(coords) {
        ExactTerms::Narrow(t) => enumerate_terms(coords, &t),
        ExactTerms::Wide(t) => enumerate_terms(coords, &t),
    };
    Ok(partial.into_verdict(n, cfg))
}

/// Reference enumeration: all `2^n` masks in numeric order, each inner
/// product summed from scratch and each shadow coordinate evaluated.
pub fn enumerate_shadows_naive(u: &UnitVector, cfg: &OracleConfig) -> Result<OracleVerdict> {
    let n = u.dim();
    cfg.check(n)?;
    let coords = u.coords();
    let terms = ExactTerms::new(coords);
    let mut out = Partial::EMPTY;
    for mask in 0..1u64 << n {
        let negative = |k: usize| mask >> (n - 1 - k) & 1 == 1;
        let s = terms.signed_sum(negative);
        let mut norm = 0.0f64;
        for (k, &x) in coords.iter().enumerate() {
            let e = if negative(k) { -1.0 } else { 1.0 };
            norm = norm.max((e - s * x).abs());
        }
        out.visit(mask, norm, s);
    }
    Ok(out.into_verdict(n, cfg))
}

/// `min_ε |<ε, u>|` over all vertices.
pub fn min_abs_inner_product(u: &UnitVector, limit: usize) -> Result<f64> {
    OracleConfig::with_limit(limit).check(u.dim())?;
    let coords = u.coords();
    Ok(match ExactTerms::new(coords) {
        ExactTerms::Narrow(t) => min_abs_terms(coords, &t),
        ExactTerms::Wide(t) => min_abs_terms(coords, &t),
    })
}

/// Whether some vertex satisfies `|<ε, u>| ≤ tol`.
pub fn is_orthogonal_to_some_vertex(u: &UnitVector, tol: f64, limit: usize) -> Result<bool> {
    Ok(min_abs_inner_product(u, limit)? <= tol)
}

/// Runs the criterion and fills `near_vertex_orthogonal` with the detector.
pub fn criterion_with_detector(
    u: &UnitVector,
    tol: f64,
    limit: usize,
) -> Result<crate::geometry::CriterionResult> {
    let mut r = criterion(u);
    r.near_vertex_orthogonal = Some(is_orthogonal_to_some_vertex(u, tol, limit)?);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementStats {
    pub n: usize,
    pub trials: u64,
    pub agreements: u64,
    pub skipped: u64,
    pub disagreements: u64,
    /// Among non-skipped samples, how many satisfied the criterion.
    pub satisfied: u64,
}

#[derive(Clone, Copy)]
enum Outcome {
    Skipped,
    Agree { satisfied: bool },
    Disagree,
}

/// Samples `trials` directions and compares the criterion with the oracle.
/// Directions with `min |<ε, u>| < SKIP_TOL` are skipped and counted.
pub fn agreement_sweep(n: usize, trials: u64, seed: u64) -> Result<AgreementStats> {
    if n == 0 {
        return Err(ShadowError::InvalidDimension(0));
    }
    let cfg = OracleConfig::default();
    cfg.check(n)?;
    let outcomes = par::map_range(0..trials, |i| -> Result<Outcome> {
        let u = sample_sphere(n, seed, i)?;
        let v = enumerate_shadows_with(&u, &cfg)?;
        if v.min_abs_inner_product < SKIP_TOL {
            return Ok(Outcome::Skipped);
        }
        let satisfied = criterion(&u).satisfied;
        Ok(if satisfied == v.exists_inside {
            Outcome::Agree { satisfied }
        } else {
            Outcome::Disagree
        })
    });
    let mut stats = AgreementStats {
        n,
        trials,
        agreements: 0,
        skipped: 0,
        disagreements: 0,
        satisfied: 0,
    };
    for o in outcomes {
        match o? {
            Outcome::Skipped => stats.skipped += 1,
            Outcome::Agree { satisfied } => {
                stats.agreements += 1;
                stats.satisfied += u64::from(satisfied);
            }
            Outcome::Disagree => stats.disagreements += 1,
        }
    }
    Ok(stats)
}
