//! Pointwise check of the transformation law for `σ_μ` in four dimensions:
//! `σ_μ(u^{4/(n−2)}g)` from the curvature engine against
//! `u^{−4/(n−2)}σ_μ(g) − b·u^{−(n+2)/(n−2)}Δ_g u`.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::curvature::{conformal_metric, curvature_at, CurvatureOptions};
use crate::exec::{try_map_indexed, Execution};
use crate::metric::{metric_derivatives, MetricError, MetricField, ScalarField};

use super::ConformalLaw;

/// `Δ_g u = g^{ij}(∂_i∂_j u − Γ^k_{ij} ∂_k u)` at `x`.
pub fn laplace_beltrami(
    m: &MetricField,
    u: &dyn ScalarField,
    x: &[f64],
    opts: &CurvatureOptions,
) -> Result<f64, MetricError> {
    let jet = metric_derivatives(m, x, &opts.derivatives)?;
    let n = jet.dim();
    let ginv = jet.g.clone().try_inverse().ok_or_else(|| MetricError::NotPositiveDefinite {
        point: x.to_vec(),
        min_eigenvalue: 0.0,
    })?;
    let grad = u.gradient(x);
    let hess = u.hessian(x);
    // Γ_{lij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij), then raise l.
    let mut christoffel_grad = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                let mut gamma = 0.0;
                for l in 0..n {
                    let lowered = 0.5 * (jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)]);
                    gamma += ginv[(k, l)] * lowered;
                }
                acc += gamma * grad[k];
            }
            christoffel_grad[(i, j)] = acc;
        }
    }
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| ginv[(i, j)] * (hess[(i, j)] - christoffel_grad[(i, j)]))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformationLawReport {
    pub points: usize,
    /// Laplacian coefficient used on the right-hand side, `μκ`.
    pub coefficient: f64,
    /// `max |direct − law| / max(|direct|, |law|)` over the points.
    pub relative_gap: f64,
    pub max_abs_gap: f64,
    /// Same comparison with coefficient `κ` instead of `μκ`.
    pub relative_gap_with_kappa: f64,
    /// Least-squares fit of `b` in `direct − u^{−4/(n−2)}σ = −b·u^{−(n+2)/(n−2)}Δu`;
    /// `None` when `Δu` vanishes at every point.
    pub fitted_coefficient: Option<f64>,
}

/// Compares both sides of the law at `points` for `g̃ = u^{4/(n−2)} g`.
pub fn transformation_law_check(
    m: &MetricField,
    u: Arc<dyn ScalarField>,
    points: &[Vec<f64>],
    law: &ConformalLaw,
    opts: &CurvatureOptions,
    exec: Execution,
) -> Result<TransformationLawReport, MetricError> {
    let scaled = conformal_metric(m, u.clone(), law.metric_power())?;
    let (p1, p2) = (law.metric_power(), law.laplacian_power());
    let rows = try_map_indexed(exec, points.len(), |i| -> Result<(f64, f64, f64), MetricError> {
        let x = &points[i];
        let direct = curvature_at(&scaled, x, opts)?.sigma_mu(law.mu);
        let base = curvature_at(m, x, opts)?.sigma_mu(law.mu);
        let value = u.value(x);
        let lap = laplace_beltrami(m, u.as_ref(), x, opts)?;
        Ok((direct, value.powf(-p1) * base, -value.powf(-p2) * lap))
    })?;
    let compare = |b: f64| {
        let (mut gap, mut scale) = (0.0f64, 0.0f64);
        for (direct, zeroth, d) in &rows {
            let rhs = zeroth + b * d;
            gap = gap.max((direct - rhs).abs());
            scale = scale.max(direct.abs()).max(rhs.abs());
        }
        (gap, if scale > 0.0 { gap / scale } else { gap })
    };
    let coefficient = law.laplacian_coefficient();
    let (max_abs_gap, relative_gap) = compare(coefficient);
    let (_, relative_gap_with_kappa) = compare(law.kappa());
    let (num, den) = rows
        .iter()
        .fold((0.0, 0.0), |(n, d), (direct, zeroth, dl)| (n + (direct - zeroth) * dl, d + dl * dl));
    Ok(TransformationLawReport {
        points: points.len(),
        coefficient,
        relative_gap,
        max_abs_gap,
        relative_gap_with_kappa,
        fitted_coefficient: (den > 0.0).then(|| num / den),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::builtins;
    use crate::metric::scalar::{ConstantField, SineField};
    use crate::metric::{DerivativeOptions, GridSpec, StencilOrder};

    fn fd4() -> CurvatureOptions {
        CurvatureOptions {
            derivatives: DerivativeOptions::finite_difference(StencilOrder::Fourth, 1e-3),
            flip_sign: false,
        }
    }

    #[test]
    fn trivial_factors_give_zero_gap() {
        let m = builtins::flat_torus(4, 2.0 * std::f64::consts::PI);
        let pts = GridSpec::full_periodic(m.chart(), 3).points(m.chart()).unwrap();
        for value in [1.0, 2.0] {
            let r = transformation_law_check(
                &m,
                Arc::new(ConstantField { dim: 4, value }),
                &pts,
                &ConformalLaw::new(4, 1.0 / 6.0),
                &CurvatureOptions::default(),
                Execution::Parallel,
            )
            .unwrap();
            assert_eq!(r.max_abs_gap, 0.0);
            assert_eq!(r.fitted_coefficient, None);
        }
    }

    #[test]
    fn sine_factor_on_flat_torus_fits_mu_kappa() {
        let m = builtins::flat_torus(4, 2.0 * std::f64::consts::PI);
        let pts = GridSpec::full_periodic(m.chart(), 4).points(m.chart()).unwrap();
        let u = Arc::new(SineField {
            dim: 4,
            axis: 0,
            mean: 1.0,
            amplitude: 0.1,
        });
        for mu in [1.0 / 6.0, 1.0] {
            let law = ConformalLaw::new(4, mu);
            let r = transformation_law_check(&m, u.clone(), &pts, &law, &fd4(), Execution::Parallel).unwrap();
            assert!(r.relative_gap < 1e-6, "{r:?}");
            assert!((r.fitted_coefficient.unwrap() - law.laplacian_coefficient()).abs() < 1e-6);
        }
    }

    #[test]
    fn law_holds_on_a_curved_base() {
        let m = builtins::warped_t4();
        let pts = GridSpec::full_periodic(m.chart(), 3).points(m.chart()).unwrap();
        let u = Arc::new(SineField {
            dim: 4,
            axis: 1,
            mean: 1.0,
            amplitude: 0.2,
        });
        let r = transformation_law_check(&m, u, &pts, &ConformalLaw::new(4, 1.0 / 6.0), &CurvatureOptions::default(), Execution::Parallel)
            .unwrap();
        assert!(r.relative_gap < 1e-10, "{r:?}");
    }
}
