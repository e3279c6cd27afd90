//! Curvature of 4-metrics at a point.
//!
//! Conventions: `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}`,
//! lowered on the first index, so `R_{1212}` is the sectional curvature of
//! the `e₁∧e₂` plane and the unit sphere has `R_{abcd} = δ_ac δ_bd − δ_ad δ_bc`.
//! Ricci is `Ric_{bd} = Σ_a R_{abad}`.
//!
//! Operators on `Λ²` use the basis `e₁∧e₂, e₁∧e₃, e₁∧e₄, e₂∧e₃, e₂∧e₄, e₃∧e₄`,
//! each declared unit, with matrix entries `⟨T(e_a∧e_b), e_c∧e_d⟩ = T_{abcd}`.

use std::ops::{Index, IndexMut};
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix4, Matrix6, SymmetricEigen};

use crate::metric::{
    metric_derivatives, orthonormal_frame, DerivativeOptions, MetricError, MetricField, MetricFunction,
    MetricJet, Representation, ScalarField,
};

/// Index pairs of the `Λ²` basis, in order.
pub const BIVECTORS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const N: usize = 4;

/// A 4-index tensor in four dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    data: [f64; 256],
}

impl Default for Tensor4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Tensor4 {
    pub fn zeros() -> Self {
        Self { data: [0.0; 256] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros();
        for a in 0..N {
            for b in 0..N {
                for c in 0..N {
                    for d in 0..N {
                        t[[a, b, c, d]] = f(a, b, c, d);
                    }
                }
            }
        }
        t
    }

    #[inline]
    fn offset(i: [usize; 4]) -> usize {
        ((i[0] * N + i[1]) * N + i[2]) * N + i[3]
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut t = self.clone();
        t.data.iter_mut().for_each(|v| *v *= k);
        t
    }

    /// `Σ T_{ijkl} E_{ia} E_{jb} E_{kc} E_{ld}`.
    pub fn transform(&self, e: &Matrix4<f64>) -> Self {
        let mut cur = self.clone();
        for slot in 0..4 {
            let mut next = Self::zeros();
            for i in 0..256 {
                let idx = [i >> 6, (i >> 4) & 3, (i >> 2) & 3, i & 3];
                let mut acc = 0.0;
                for k in 0..N {
                    let mut src = idx;
                    src[slot] = k;
                    acc += cur[src] * e[(k, idx[slot])];
                }
                next.data[i] = acc;
            }
            cur = next;
        }
        cur
    }

    /// `R(X, Y, Z, W) = Σ R_{abcd} X^a Y^b Z^c W^d`.
    pub fn evaluate(&self, x: &[f64; 4], y: &[f64; 4], z: &[f64; 4], w: &[f64; 4]) -> f64 {
        let mut acc = 0.0;
        for a in 0..N {
            for b in 0..N {
                let xy = x[a] * y[b];
                if xy == 0.0 {
                    continue;
                }
                for c in 0..N {
                    for d in 0..N {
                        acc += xy * z[c] * w[d] * self[[a, b, c, d]];
                    }
                }
            }
        }
        acc
    }

    /// The `6×6` matrix `⟨T(e_a∧e_b), e_c∧e_d⟩ = T_{abcd}` on `Λ²`.
    pub fn bivector_matrix(&self) -> Matrix6<f64> {
        Matrix6::from_fn(|i, j| {
            let (a, b) = BIVECTORS[i];
            let (c, d) = BIVECTORS[j];
            self[[a, b, c, d]]
        })
    }

    /// Inverse of [`Tensor4::bivector_matrix`] for tensors with the
    /// antisymmetries of a curvature tensor.
    pub fn from_bivector_matrix(op: &Matrix6<f64>) -> Self {
        let pair = |a: usize, b: usize| -> Option<(usize, f64)> {
            if a == b {
                return None;
            }
            let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
            BIVECTORS.iter().position(|&p| p == (lo, hi)).map(|i| (i, sign))
        };
        Self::from_fn(|a, b, c, d| match (pair(a, b), pair(c, d)) {
            (Some((i, s1)), Some((j, s2))) => s1 * s2 * op[(i, j)],
            _ => 0.0,
        })
    }

    /// Largest violation of the pair antisymmetries, pair symmetry and the
    /// first Bianchi identity.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..N {
            for b in 0..N {
                for c in 0..N {
                    for d in 0..N {
                        let r = self[[a, b, c, d]];
                        worst = worst
                            .max((r + self[[b, a, c, d]]).abs())
                            .max((r + self[[a, b, d, c]]).abs())
                            .max((r - self[[c, d, a, b]]).abs())
                            .max((r + self[[a, c, d, b]] + self[[a, d, b, c]]).abs());
                    }
                }
            }
        }
        worst
    }
}

impl Index<[usize; 4]> for Tensor4 {
    type Output = f64;

    fn index(&self, i: [usize; 4]) -> &f64 {
        &self.data[Self::offset(i)]
    }
}

impl IndexMut<[usize; 4]> for Tensor4 {
    fn index_mut(&mut self, i: [usize; 4]) -> &mut f64 {
        &mut self.data[Self::offset(i)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CurvatureOptions {
    pub derivatives: DerivativeOptions,
    /// Debug switch that negates the Riemann tensor; only used as a negative
    /// control for the sign-convention anchors.
    pub flip_sign: bool,
}

impl CurvatureOptions {
    pub fn fourth_order() -> Self {
        Self {
            derivatives: DerivativeOptions::fourth_order(),
            flip_sign: false,
        }
    }
}

/// Weyl tensor with its norm and `Λ²` operator.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylParts {
    pub weyl: Tensor4,
    /// `|W|` as an element of `⊗⁴T*M`: `sqrt(Σ W_{abcd}²)`.
    pub weyl_norm: f64,
    pub w_op: Matrix6<f64>,
}

/// Full orthonormal-frame curvature record at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvaturePointData {
    /// Columns are the frame vectors in coordinate components.
    pub frame: Matrix4<f64>,
    pub riemann: Tensor4,
    pub ricci: Matrix4<f64>,
    pub scalar: f64,
    pub weyl: Tensor4,
    pub weyl_norm: f64,
    pub r_op: Matrix6<f64>,
    pub w_op: Matrix6<f64>,
}

impl CurvaturePointData {
    /// Builds the record from a frame-expressed Riemann tensor.
    pub fn from_riemann(frame: Matrix4<f64>, riemann: Tensor4) -> Self {
        let ricci = Matrix4::from_fn(|b, d| (0..N).map(|a| riemann[[a, b, a, d]]).sum());
        let scalar = ricci.trace();
        let WeylParts { weyl, weyl_norm, w_op } = weyl_decompose(&riemann, &ricci, scalar);
        let r_op = riemann.bivector_matrix();
        Self {
            frame,
            riemann,
            ricci,
            scalar,
            weyl,
            weyl_norm,
            r_op,
            w_op,
        }
    }

    /// An algebraic curvature tensor given by its `Λ²` matrix, in the
    /// standard frame.
    pub fn from_operator(r_op: &Matrix6<f64>) -> Self {
        Self::from_riemann(Matrix4::identity(), Tensor4::from_bivector_matrix(r_op))
    }

    /// The modified scalar curvature `s/6 + |W|`.
    pub fn sigma(&self) -> f64 {
        self.sigma_mu(1.0 / 6.0)
    }

    /// `μ s + |W|`.
    pub fn sigma_mu(&self, mu: f64) -> f64 {
        mu * self.scalar + self.weyl_norm
    }

    /// Largest `|Σ_a W_{abad}|` over `b, d`.
    pub fn weyl_trace_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for b in 0..N {
            for d in 0..N {
                let t: f64 = (0..N).map(|a| self.weyl[[a, b, a, d]]).sum();
                worst = worst.max(t.abs());
            }
        }
        worst
    }
}

/// Weyl tensor by removing the Ricci and scalar parts (dimension 4).
pub fn weyl_decompose(riemann: &Tensor4, ricci: &Matrix4<f64>, scalar: f64) -> WeylParts {
    let n = N as f64;
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let weyl = Tensor4::from_fn(|a, b, c, d| {
        let ricci_part = ricci[(a, c)] * delta(b, d) - ricci[(a, d)] * delta(b, c)
            + ricci[(b, d)] * delta(a, c)
            - ricci[(b, c)] * delta(a, d);
        let scalar_part = delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c);
        riemann[[a, b, c, d]] - ricci_part / (n - 2.0) + scalar * scalar_part / ((n - 1.0) * (n - 2.0))
    });
    WeylParts {
        weyl_norm: weyl.norm(),
        w_op: weyl.bivector_matrix(),
        weyl,
    }
}

/// `R`, `W` and `Q = (s/6)I − W` on `Λ²`, with `Q`'s eigenvalues ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda2Operators {
    pub r_op: Matrix6<f64>,
    pub w_op: Matrix6<f64>,
    pub q: Matrix6<f64>,
    pub q_eigenvalues: [f64; 6],
}

impl Lambda2Operators {
    pub fn q_max(&self) -> f64 {
        self.q_eigenvalues[5]
    }
}

pub fn lambda2_operator(data: &CurvaturePointData) -> Lambda2Operators {
    let q = Matrix6::identity() * (data.scalar / 6.0) - data.w_op;
    let mut eig: Vec<f64> = SymmetricEigen::new(q).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Lambda2Operators {
        r_op: data.r_op,
        w_op: data.w_op,
        q,
        q_eigenvalues: eig.try_into().expect("six eigenvalues"),
    }
}

/// Lowered Riemann tensor in coordinates from a metric jet (any dimension).
pub fn coordinate_riemann(jet: &MetricJet) -> Option<Vec<f64>> {
    let n = jet.dim();
    let ginv = jet.g.clone().try_inverse()?;
    // Γ_{l,ij} and Γ^k_{ij}
    let mut first = vec![0.0; n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                first[(l * n + i) * n + j] =
                    0.5 * (jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)]);
            }
        }
    }
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                gamma[(k * n + i) * n + j] = (0..n).map(|l| ginv[(k, l)] * first[(l * n + i) * n + j]).sum();
            }
        }
    }
    let gm = |k: usize, i: usize, j: usize| gamma[(k * n + i) * n + j];
    let dd = |k: usize, l: usize, i: usize, j: usize| jet.ddg[k * n + l][(i, j)];
    let mut r = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let second =
                        0.5 * (dd(b, c, a, d) + dd(a, d, b, c) - dd(a, c, b, d) - dd(b, d, a, c));
                    let mut quad = 0.0;
                    for p in 0..n {
                        for q in 0..n {
                            quad += jet.g[(p, q)] * (gm(p, b, c) * gm(q, a, d) - gm(p, b, d) * gm(q, a, c));
                        }
                    }
                    r[((a * n + b) * n + c) * n + d] = second + quad;
                }
            }
        }
    }
    Some(r)
}

/// Full curvature record of a 4-metric at `x`.
pub fn curvature_at(m: &MetricField, x: &[f64], opts: &CurvatureOptions) -> Result<CurvaturePointData, MetricError> {
    if m.dim() != N {
        return Err(MetricError::NotFourDimensional(m.dim()));
    }
    let jet = metric_derivatives(m, x, &opts.derivatives)?;
    let frame = orthonormal_frame(m, x)?;
    let coord = coordinate_riemann(&jet).ok_or_else(|| MetricError::NotPositiveDefinite {
        point: x.to_vec(),
        min_eigenvalue: 0.0,
    })?;
    let sign = if opts.flip_sign { -1.0 } else { 1.0 };
    let mut riemann = Tensor4::zeros();
    riemann.data.copy_from_slice(&coord);
    let frame4 = Matrix4::from_fn(|i, j| frame[(i, j)]);
    let riemann = riemann.transform(&frame4).scaled(sign);
    Ok(CurvaturePointData::from_riemann(frame4, riemann))
}

/// The metric `φ(x)^power · g` for a positive scalar field `φ`.
///
/// Exact derivatives follow from the product rule when the base metric has
/// them; finite differences of the components are used otherwise, or when
/// the caller turns analytic derivatives off.
pub struct ConformalMetric {
    base: Arc<dyn MetricFunction>,
    factor: Arc<dyn ScalarField>,
    power: f64,
}

impl MetricFunction for ConformalMetric {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn components(&self, x: &[f64]) -> DMatrix<f64> {
        self.base.components(x) * self.factor.value(x).powf(self.power)
    }

    fn first_derivatives(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let dg = self.base.first_derivatives(x)?;
        let g = self.base.components(x);
        let (h, dh, _) = self.factor_jet(x);
        Some((0..self.dim()).map(|k| &g * dh[k] + &dg[k] * h).collect())
    }

    fn second_derivatives(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let dg = self.base.first_derivatives(x)?;
        let ddg = self.base.second_derivatives(x)?;
        let g = self.base.components(x);
        let (h, dh, ddh) = self.factor_jet(x);
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for k in 0..n {
            for l in 0..n {
                out.push(
                    &g * ddh[(k, l)] + &dg[l] * dh[k] + &dg[k] * dh[l] + &ddg[k * n + l] * h,
                );
            }
        }
        Some(out)
    }
}

impl ConformalMetric {
    /// `h = φ^p` with its gradient and Hessian.
    fn factor_jet(&self, x: &[f64]) -> (f64, Vec<f64>, DMatrix<f64>) {
        let p = self.power;
        let phi = self.factor.value(x);
        let grad = self.factor.gradient(x);
        let hess = self.factor.hessian(x);
        let h = phi.powf(p);
        let dh: Vec<f64> = grad.iter().map(|g| p * phi.powf(p - 1.0) * g).collect();
        let ddh = DMatrix::from_fn(self.dim(), self.dim(), |k, l| {
            p * (p - 1.0) * phi.powf(p - 2.0) * grad[k] * grad[l] + p * phi.powf(p - 1.0) * hess[(k, l)]
        });
        (h, dh, ddh)
    }
}

pub fn conformal_metric(
    m: &MetricField,
    factor: Arc<dyn ScalarField>,
    power: f64,
) -> Result<MetricField, MetricError> {
    let Representation::Analytic(base) = m.representation() else {
        return Err(MetricError::MalformedGrid(
            "conformal rescaling needs an analytic metric".into(),
        ));
    };
    MetricField::analytic(
        m.chart().clone(),
        Arc::new(ConformalMetric {
            base: base.clone(),
            factor,
            power,
        }),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConformalScaleReport {
    /// `|W_{f²g}|_{f²g}`.
    pub scaled_norm: f64,
    /// `|W_g|_g`.
    pub base_norm: f64,
    /// `f^{−2}|W_g|_g`.
    pub predicted: f64,
    pub relative_gap: f64,
}

/// Compares `|W_{f²g}|_{f²g}` with `f^{−2}|W_g|_g` at `x`.
pub fn conformal_scale_check(
    m: &MetricField,
    f: Arc<dyn ScalarField>,
    x: &[f64],
    opts: &CurvatureOptions,
) -> Result<ConformalScaleReport, MetricError> {
    let value = f.value(x);
    let scaled = conformal_metric(m, f, 2.0)?;
    let scaled_norm = curvature_at(&scaled, x, opts)?.weyl_norm;
    let base_norm = curvature_at(m, x, opts)?.weyl_norm;
    let predicted = base_norm / (value * value);
    let scale = scaled_norm.abs().max(predicted.abs());
    let relative_gap = if scale == 0.0 {
        0.0
    } else {
        (scaled_norm - predicted).abs() / scale
    };
    Ok(ConformalScaleReport {
        scaled_norm,
        base_norm,
        predicted,
        relative_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::builtins;
    use crate::metric::scalar::{ConstantField, ExpSineField};

    fn analytic() -> CurvatureOptions {
        CurvatureOptions::default()
    }

    #[test]
    fn flat_torus_has_no_curvature() {
        let d = curvature_at(&builtins::flat_torus(4, 1.0), &[0.1, 0.2, 0.3, 0.4], &analytic()).unwrap();
        assert_eq!(d.riemann.max_abs(), 0.0);
        assert_eq!(d.scalar, 0.0);
        assert_eq!(d.weyl_norm, 0.0);
    }

    #[test]
    fn round_sphere_is_constant_curvature_one() {
        let d = curvature_at(&builtins::round_s4(), &[1.0, 1.2, 0.8, 0.3], &analytic()).unwrap();
        let expected = Tensor4::from_fn(|a, b, c, dd| {
            let del = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
            del(a, c) * del(b, dd) - del(a, dd) * del(b, c)
        });
        let mut diff = d.riemann.clone();
        diff.data.iter_mut().zip(expected.data.iter()).for_each(|(x, e)| *x -= e);
        assert!(diff.max_abs() < 1e-12, "{}", diff.max_abs());
        assert!((d.scalar - 12.0).abs() < 1e-12);
        assert!(d.weyl_norm < 1e-12);
        assert!((d.r_op - Matrix6::identity()).amax() < 1e-12);
    }

    #[test]
    fn hyperbolic_product_is_conformally_flat() {
        let d = curvature_at(&builtins::hyperbolic3_x_circle(1.0), &[0.4, 0.1, 0.2, 0.3], &analytic()).unwrap();
        assert!((d.scalar + 6.0).abs() < 1e-12);
        assert!(d.weyl_norm < 1e-12);
    }

    #[test]
    fn finite_differences_preserve_symmetries() {
        let opts = CurvatureOptions {
            derivatives: DerivativeOptions::finite_difference(crate::metric::StencilOrder::Fourth, 1e-3),
            flip_sign: false,
        };
        for m in [builtins::round_s4(), builtins::warped_t4(), builtins::kahler_h2_x_h2()] {
            let d = curvature_at(&m, &[1.0, 1.2, 0.8, 0.3], &opts).unwrap();
            assert!(d.riemann.symmetry_defect() < 1e-8);
            assert!(d.weyl_trace_defect() < 1e-8);
            assert!(d.w_op.trace().abs() < 1e-8);
        }
    }

    #[test]
    fn bivector_matrix_round_trips() {
        let d = curvature_at(&builtins::warped_t4(), &[0.3, 1.0, 2.0, 0.1], &analytic()).unwrap();
        let back = Tensor4::from_bivector_matrix(&d.r_op);
        let mut diff = back.clone();
        diff.data.iter_mut().zip(d.riemann.data.iter()).for_each(|(x, e)| *x -= e);
        assert!(diff.max_abs() < 1e-13);
        assert!(d.weyl_norm > 0.1);
    }

    #[test]
    fn lambda2_anchor_values() {
        let sphere = curvature_at(&builtins::round_s4(), &[1.0, 1.2, 0.8, 0.3], &analytic()).unwrap();
        for q in lambda2_operator(&sphere).q_eigenvalues {
            assert!((q - 2.0).abs() < 1e-12);
        }
        let hyp = curvature_at(&builtins::hyperbolic3_x_circle(1.0), &[0.4, 0.1, 0.2, 0.3], &analytic()).unwrap();
        for q in lambda2_operator(&hyp).q_eigenvalues {
            assert!((q + 1.0).abs() < 1e-12);
        }
        let flat = curvature_at(&builtins::flat_torus(4, 1.0), &[0.0; 4], &analytic()).unwrap();
        assert_eq!(lambda2_operator(&flat).q, Matrix6::zeros());
    }

    #[test]
    fn flipped_sign_breaks_sphere_anchor() {
        let opts = CurvatureOptions {
            flip_sign: true,
            ..analytic()
        };
        let d = curvature_at(&builtins::round_s4(), &[1.0, 1.2, 0.8, 0.3], &opts).unwrap();
        assert!((d.scalar + 12.0).abs() < 1e-12);
    }

    #[test]
    fn three_dimensional_metrics_are_rejected() {
        assert!(matches!(
            curvature_at(&builtins::cusp(1.0, 1.0), &[0.0; 3], &analytic()),
            Err(MetricError::NotFourDimensional(3))
        ));
    }

    #[test]
    fn constant_conformal_factor_scales_weyl_norm() {
        let m = builtins::warped_t4();
        let x = [0.3, 1.0, 2.0, 0.1];
        let one = conformal_scale_check(&m, Arc::new(ConstantField { dim: 4, value: 1.0 }), &x, &analytic()).unwrap();
        assert!(one.relative_gap < 1e-10);
        let three = conformal_scale_check(&m, Arc::new(ConstantField { dim: 4, value: 3.0 }), &x, &analytic()).unwrap();
        assert!(three.relative_gap <= 1e-10, "{three:?}");
        assert!((three.scaled_norm * 9.0 - three.base_norm).abs() < 1e-9);
    }

    #[test]
    fn exp_sine_conformal_factor_scales_weyl_norm() {
        let m = builtins::warped_t4();
        let f = Arc::new(ExpSineField { dim: 4, axis: 0 });
        let fd = CurvatureOptions {
            derivatives: DerivativeOptions::finite_difference(crate::metric::StencilOrder::Fourth, 1e-3),
            flip_sign: false,
        };
        let r = conformal_scale_check(&m, f.clone(), &[0.7, 1.0, 2.0, 0.1], &fd).unwrap();
        assert!(r.relative_gap < 1e-6, "{r:?}");
        let r = conformal_scale_check(&m, f, &[0.7, 1.0, 2.0, 0.1], &analytic()).unwrap();
        assert!(r.relative_gap < 1e-6, "{r:?}");
    }
}
