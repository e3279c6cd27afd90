//! Numerical laboratory for negative isotropic curvature on 4-manifolds.
//!
//! The crate computes curvature of explicit 4-metrics, decides the sign of
//! isotropic curvature both by direct search over isotropic planes and by
//! the spectral criterion on `Λ²`, builds the glued warped-metric family
//! `g_c` together with its total modified scalar curvature `F(g_c)`, and
//! solves the conformal eigenvalue problem that turns `F < 0` into a
//! pointwise negative `σ`.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebraic;
pub mod config;
pub mod conformal;
pub mod curvature;
pub mod exec;
pub mod gluing;
pub mod isotropic;
pub mod metric;
pub mod verify;

pub use exec::Execution;
