//! Vertex shadows of the cube `[-1, 1]^n`.
//!
//! Projecting the cube orthogonally onto a central hyperplane `H_u = u^⊥`
//! sends each vertex `ε` to `π_u(ε) = ε - <ε, u> u`. A vertex is *inside*
//! when its shadow lands in the section `C_n ∩ H_u`, i.e. when
//! `‖π_u(ε)‖_∞ ≤ 1`. For `u` not orthogonal to any vertex, an inside vertex
//! exists exactly when `‖u‖_1 ‖u‖_∞ ≤ 2`.
//!
//! The crate is split into:
//!
//! * [`geometry`]: unit vectors, vertices, projections and the norm criterion.
//! * [`oracle`]: exhaustive Gray-code enumeration of all `2^n` vertices.
//! * [`extremal`]: the maximum `(√n + 1) / 2` of `‖u‖_1 ‖u‖_∞` on the sphere.
//! * [`measure`]: Monte Carlo statistics of the criterion over the sphere.
//!
//! With the default `parallel` feature, enumeration and sampling run on
//! rayon. Without it the same code runs sequentially. Results are
//! bit-identical either way.

pub mod error;
pub mod exact;
pub mod extremal;
pub mod geometry;
pub mod measure;
pub mod oracle;
mod par;

pub use error::{Result, ShadowError};
pub use extremal::{
    closed_form_max, extremal_result, maximizer, numerical_max, threshold_dimension,
    ExtremalResult, NumericalMax,
};
pub use geometry::{
    canonical_vertex, criterion, norms, project, shadow, shadow_norm_closed_form, CriterionResult,
    Norms, ShadowReport, Tolerances, UnitVector, Vertex,
};
pub use measure::{estimate, growth_scan, sample_sphere, MeasureEstimate};
pub use oracle::{
    agreement_sweep, enumerate_shadows, is_orthogonal_to_some_vertex, AgreementStats,
    OracleConfig, OracleVerdict,
};
