//! Conformal deformation by the lowest eigenfunction of
//! `L = −b·Δ + σ_μ`, `Δ = −d*d`, on a one-dimensional profile model of the
//! glued manifold.
//!
//! Under `g̃ = u^{4/(n−2)} g` the scalar curvature obeys
//! `s̃ = u^{−(n+2)/(n−2)}(−κΔu + s u)` with `κ = 4(n−1)/(n−2)`, and `|W|`
//! picks up `u^{−4/(n−2)}`. Hence `σ_μ = μs + |W|` transforms with the
//! Laplacian coefficient `b = μκ`, and `L(u) = λu` gives
//! `σ̃_μ = λ u^{−4/(n−2)}`.

pub mod eigen;
pub mod law;

use serde::Serialize;
use thiserror::Error;

use crate::curvature::{curvature_at, CurvatureOptions};
use crate::gluing::{GluedFamily, GluingError};
use crate::metric::MetricError;

pub use eigen::SymTridiagonal;
pub use law::{transformation_law_check, TransformationLawReport};

#[derive(Debug, Error)]
pub enum ConformalError {
    #[error("node {node} has non-positive volume {volume}")]
    DegenerateCell { node: usize, volume: f64 },
    #[error("malformed profile: {0}")]
    Malformed(String),
    #[error("inverse iteration did not reach residual {tol:e} in {iterations} steps (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64, tol: f64 },
    #[error("lowest eigenfunction changes sign at node {node} (u = {value})")]
    NegativeComponent { node: usize, value: f64 },
    #[error("conformal factor is not positive at node {node} (u = {value})")]
    NonPositiveU { node: usize, value: f64 },
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Dimension-dependent constants of the conformal transformation law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConformalLaw {
    pub n: usize,
    pub mu: f64,
}

impl ConformalLaw {
    pub fn new(n: usize, mu: f64) -> Self {
        Self { n, mu }
    }

    /// `4(n−1)/(n−2)`, the scalar-curvature coefficient.
    pub fn kappa(&self) -> f64 {
        let n = self.n as f64;
        4.0 * (n - 1.0) / (n - 2.0)
    }

    /// `μκ`: the Laplacian coefficient in the law for `σ_μ`.
    pub fn laplacian_coefficient(&self) -> f64 {
        self.mu * self.kappa()
    }

    /// `4/(n−2)`.
    pub fn metric_power(&self) -> f64 {
        4.0 / (self.n as f64 - 2.0)
    }

    /// `(n+2)/(n−2)`.
    pub fn laplacian_power(&self) -> f64 {
        (self.n as f64 + 2.0) / (self.n as f64 - 2.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Bulk,
    Cell,
    Cap,
}

/// A weighted chain graph: node volumes `V`, node values of `σ`, and edge
/// weights `w` (interface fiber volume over node spacing) between
/// consecutive nodes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileManifold {
    pub kinds: Vec<NodeKind>,
    /// Profile coordinate of each node (cell centres; `None` for lumped nodes).
    pub t: Vec<Option<f64>>,
    pub volume: Vec<f64>,
    pub sigma: Vec<f64>,
    pub weights: Vec<f64>,
    /// Laplacian coefficient `b` of `L = −bΔ + σ`.
    pub coefficient: f64,
}

impl ProfileManifold {
    pub fn new(
        kinds: Vec<NodeKind>,
        t: Vec<Option<f64>>,
        volume: Vec<f64>,
        sigma: Vec<f64>,
        weights: Vec<f64>,
        coefficient: f64,
    ) -> Result<Self, ConformalError> {
        let n = volume.len();
        if n == 0 || kinds.len() != n || t.len() != n || sigma.len() != n || weights.len() + 1 != n {
            return Err(ConformalError::Malformed(format!(
                "{n} volumes, {} kinds, {} positions, {} sigmas, {} weights",
                kinds.len(),
                t.len(),
                sigma.len(),
                weights.len()
            )));
        }
        if let Some((node, &v)) = volume.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(ConformalError::DegenerateCell { node, volume: v });
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(ConformalError::Malformed("edge weights must be positive".into()));
        }
        if sigma.iter().any(|s| !s.is_finite()) || !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(ConformalError::Malformed("σ and the coefficient must be finite".into()));
        }
        Ok(Self {
            kinds,
            t,
            volume,
            sigma,
            weights,
            coefficient,
        })
    }

    /// A chain of plain cells.
    pub fn chain(volume: Vec<f64>, sigma: Vec<f64>, weights: Vec<f64>, coefficient: f64) -> Result<Self, ConformalError> {
        let n = volume.len();
        Self::new(vec![NodeKind::Cell; n], vec![None; n], volume, sigma, weights, coefficient)
    }

    pub fn len(&self) -> usize {
        self.volume.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volume.is_empty()
    }

    pub fn total_volume(&self) -> f64 {
        crate::metric::pairwise_sum(&self.volume)
    }

    /// `⟨L1, 1⟩ = Σ σ_i V_i`, the discrete `F`.
    pub fn functional(&self) -> f64 {
        let terms: Vec<f64> = self.volume.iter().zip(&self.sigma).map(|(v, s)| v * s).collect();
        crate::metric::pairwise_sum(&terms)
    }

    /// Discrete Laplacian `(Δu)_i = (1/V_i) Σ_j w_ij (u_j − u_i)`.
    pub fn laplacian(&self, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                if i > 0 {
                    acc += self.weights[i - 1] * (u[i - 1] - u[i]);
                }
                if i + 1 < n {
                    acc += self.weights[i] * (u[i + 1] - u[i]);
                }
                acc / self.volume[i]
            })
            .collect()
    }

    /// `(Lu)_i = −b(Δu)_i + σ_i u_i`.
    pub fn apply_l(&self, u: &[f64]) -> Vec<f64> {
        self.laplacian(u)
            .iter()
            .zip(&self.sigma)
            .zip(u)
            .map(|((d, s), x)| -self.coefficient * d + s * x)
            .collect()
    }

    /// `⟨u, v⟩_V = Σ V_i u_i v_i`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let terms: Vec<f64> = (0..self.len()).map(|i| self.volume[i] * u[i] * v[i]).collect();
        crate::metric::pairwise_sum(&terms)
    }
}

/// `L` in the symmetric form `V^{1/2} L V^{−1/2}`, which shares its
/// eigenvalues; eigenvectors map back by `u = V^{−1/2} y`.
pub fn assemble_l(pm: &ProfileManifold) -> SymTridiagonal {
    let n = pm.len();
    let b = pm.coefficient;
    let diag = (0..n)
        .map(|i| {
            let mut stiff = 0.0;
            if i > 0 {
                stiff += pm.weights[i - 1];
            }
            if i + 1 < n {
                stiff += pm.weights[i];
            }
            (b * stiff + pm.volume[i] * pm.sigma[i]) / pm.volume[i]
        })
        .collect();
    let off = (0..n.saturating_sub(1))
        .map(|i| -b * pm.weights[i] / (pm.volume[i] * pm.volume[i + 1]).sqrt())
        .collect();
    SymTridiagonal { diag, off }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenSolution {
    /// Index of the eigenvalue, 0 for the lowest.
    pub index: usize,
    pub lambda: f64,
    /// Normalized by `Σ V u² = 1`; positive on average.
    pub u: Vec<f64>,
    /// `‖Lu − λu‖₂ / ‖u‖₂` (Euclidean norms over nodes).
    pub residual: f64,
    pub iterations: usize,
}

impl EigenSolution {
    pub fn min_u(&self) -> f64 {
        self.u.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_u(&self) -> f64 {
        self.u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Number of sign changes along the chain.
    pub fn sign_changes(&self) -> usize {
        self.u.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
    }
}

fn residual(pm: &ProfileManifold, lambda: f64, u: &[f64]) -> f64 {
    let lu = pm.apply_l(u);
    let r: Vec<f64> = lu.iter().zip(u).map(|(a, b)| a - lambda * b).collect();
    eigen::norm(&r) / eigen::norm(u)
}

/// The `k`-th eigenpair of `L` (0 = lowest).
pub fn eigenpair(pm: &ProfileManifold, k: usize, tol: f64) -> Result<EigenSolution, ConformalError> {
    if k >= pm.len() {
        return Err(ConformalError::Malformed(format!("no eigenvalue {k} on {} nodes", pm.len())));
    }
    const MAX_ITER: usize = 100;
    let t = assemble_l(pm);
    let sqrt_v: Vec<f64> = pm.volume.iter().map(|v| v.sqrt()).collect();
    let to_u = |y: &[f64]| -> Vec<f64> { y.iter().zip(&sqrt_v).map(|(a, s)| a / s).collect() };
    let (pair, ok) = eigen::eigenpair(&t, k, MAX_ITER, |value, y| residual(pm, value, &to_u(y)) <= tol);
    let mut u = to_u(&pair.vector);
    let norm_v = pm.inner(&u, &u).sqrt();
    let sign = if u.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    u.iter_mut().for_each(|x| *x *= sign / norm_v);
    let res = residual(pm, pair.value, &u);
    if !ok {
        return Err(ConformalError::NoConvergence {
            iterations: pair.iterations,
            residual: res,
            tol,
        });
    }
    Ok(EigenSolution {
        index: k,
        lambda: pair.value,
        u,
        residual: res,
        iterations: pair.iterations,
    })
}

/// Lowest eigenpair, with strict positivity of `u` enforced.
pub fn lowest_eigenpair(pm: &ProfileManifold, tol: f64) -> Result<EigenSolution, ConformalError> {
    let sol = eigenpair(pm, 0, tol)?;
    if let Some((node, &value)) = sol.u.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(ConformalError::NegativeComponent { node, value });
    }
    Ok(sol)
}

/// `σ̃` at every node, from the transformation law and from `λu^{−4/(n−2)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformalDeformation {
    /// `u^{−4/(n−2)}σ − b·u^{−(n+2)/(n−2)}Δu`.
    pub from_law: Vec<f64>,
    /// `λ·u^{−4/(n−2)}`.
    pub from_eigenvalue: Vec<f64>,
    /// `max |law − eigen| / max |eigen|`.
    pub relative_gap: f64,
    pub max_sigma_tilde: f64,
}

pub fn conformal_deform(
    pm: &ProfileManifold,
    sol: &EigenSolution,
    law: &ConformalLaw,
) -> Result<ConformalDeformation, ConformalError> {
    if let Some((node, &value)) = sol.u.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(ConformalError::NonPositiveU { node, value });
    }
    let (p1, p2) = (law.metric_power(), law.laplacian_power());
    let lap = pm.laplacian(&sol.u);
    let from_law: Vec<f64> = (0..pm.len())
        .map(|i| {
            let u = sol.u[i];
            u.powf(-p1) * pm.sigma[i] - pm.coefficient * u.powf(-p2) * lap[i]
        })
        .collect();
    let from_eigenvalue: Vec<f64> = sol.u.iter().map(|u| sol.lambda * u.powf(-p1)).collect();
    let scale = from_eigenvalue.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = from_law
        .iter()
        .zip(&from_eigenvalue)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(ConformalDeformation {
        relative_gap: if scale > 0.0 { gap / scale } else { gap },
        max_sigma_tilde: from_law.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        from_law,
        from_eigenvalue,
    })
}

/// Discretization settings for [`glued_profile`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileOptions {
    /// Number of cells over `[0, a + 1 + pad]`; at least 64.
    pub cells: usize,
    /// Flat collar length after the band.
    pub pad: f64,
    pub curvature: CurvatureOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            cells: 256,
            pad: 1.0,
            curvature: CurvatureOptions::default(),
        }
    }
}

const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// The glued manifold reduced to functions of `t`: a bulk node for the
/// hyperbolic core, cells over `[0, a + 1 + pad]`, and a cap node.
pub fn glued_profile(fam: &GluedFamily, mu: f64, opts: &ProfileOptions) -> Result<ProfileManifold, ConformalError> {
    if opts.cells < 64 {
        return Err(ConformalError::Malformed(format!("need at least 64 cells, got {}", opts.cells)));
    }
    if !(mu > 0.0) {
        return Err(ConformalError::Malformed(format!("μ must be positive, got {mu}")));
    }
    let law = ConformalLaw::new(4, mu);
    let k = &fam.constants;
    let (c, a) = (fam.c, fam.a());
    let fiber = k.area * k.ell;
    let end = a + 1.0 + opts.pad.max(0.0);
    let dt = end / opts.cells as f64;
    let band = fam.band_metric(opts.pad);
    let m = band.metric_field()?;
    let cusp_sigma = -6.0 * mu / (c * c);
    let kinks = crate::gluing::weyl_kinks(fam);
    let sigma_at = |t: f64| -> Result<f64, MetricError> {
        if t <= a {
            Ok(cusp_sigma)
        } else {
            Ok(curvature_at(&m, &[t, 0.0, 0.0, 0.0], &opts.curvature)?.sigma_mu(mu))
        }
    };

    let mut kinds = vec![NodeKind::Bulk];
    let mut ts = vec![None];
    let mut volume = vec![k.vol0 * c.powi(3) * k.ell];
    let mut sigma = vec![cusp_sigma];
    let mut weights = Vec::with_capacity(opts.cells + 1);
    let density = |t: f64| {
        let f = fam.warp(t).f;
        f * f * fiber
    };
    weights.push(density(0.0) / (0.5 * dt));
    for i in 0..opts.cells {
        let lo = i as f64 * dt;
        let (mut v, mut vs) = (0.0, 0.0);
        // |W| has kinks inside the band; split cells there.
        let mut pieces = vec![lo];
        pieces.extend(kinks.iter().copied().filter(|&k| k > lo && k < lo + dt));
        pieces.push(lo + dt);
        for piece in pieces.windows(2) {
            let h = piece[1] - piece[0];
            for (x, w) in GAUSS5 {
                let t = piece[0] + 0.5 * h * (x + 1.0);
                let d = 0.5 * h * w * density(t);
                v += d;
                vs += d * sigma_at(t)?;
            }
        }
        kinds.push(NodeKind::Cell);
        ts.push(Some(lo + 0.5 * dt));
        volume.push(v);
        sigma.push(vs / v);
        if i + 1 < opts.cells {
            weights.push(density(lo + dt) / dt);
        }
    }
    weights.push(density(end) / (0.5 * dt));
    kinds.push(NodeKind::Cap);
    ts.push(None);
    volume.push(k.cap_volume);
    sigma.push((mu * k.s_cap + k.w_cap) / k.cap_volume);
    ProfileManifold::new(kinds, ts, volume, sigma, weights, law.laplacian_coefficient())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::{functional_f_at, BandOptions, GeometryConstants};
    use crate::metric::warp::TDomain;
    use crate::metric::WarpedMetric;
    use nalgebra::{DMatrix, SymmetricEigen};
    use proptest::prelude::*;

    fn toy() -> ProfileManifold {
        ProfileManifold::chain(vec![1.0; 3], vec![-1.0, 0.0, 1.0], vec![1.0; 2], ConformalLaw::new(4, 1.0).kappa()).unwrap()
    }

    /// Smallest root of `det(A − λI)` for the toy matrix, by bisection on
    /// its characteristic polynomial.
    fn toy_oracle() -> f64 {
        // A = [[5, −6, 0], [−6, 12, −6], [0, −6, 7]].
        let p = |l: f64| {
            let (a, b, c) = (5.0 - l, 12.0 - l, 7.0 - l);
            a * (b * c - 36.0) + 6.0 * (-6.0 * c)
        };
        let (mut lo, mut hi) = (-10.0, 0.5);
        assert!(p(lo) * p(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p(lo) * p(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn toy_chain_matches_characteristic_polynomial() {
        let sol = lowest_eigenpair(&toy(), 1e-12).unwrap();
        assert!((sol.lambda - toy_oracle()).abs() < 1e-12, "{}", sol.lambda);
        assert!(sol.residual < 1e-12);
        let dense = DMatrix::<f64>::from_row_slice(3, 3, &[5.0, -6.0, 0.0, -6.0, 12.0, -6.0, 0.0, -6.0, 7.0]);
        let min = SymmetricEigen::new(dense).eigenvalues.min();
        assert!((sol.lambda - min).abs() < 1e-12);
    }

    #[test]
    fn constants_are_harmonic_and_constant_sigma_is_an_eigenvalue() {
        let pm = ProfileManifold::chain(vec![0.5, 2.0, 1.0, 3.0], vec![-1.0; 4], vec![1.0, 0.3, 2.0], 6.0).unwrap();
        assert!(pm.laplacian(&[1.0; 4]).iter().all(|v| v.abs() < 1e-15));
        let sol = lowest_eigenpair(&pm, 1e-12).unwrap();
        assert!((sol.lambda + 1.0).abs() < 1e-12);
        let mean = sol.u.iter().sum::<f64>() / 4.0;
        assert!(sol.u.iter().all(|u| (u - mean).abs() < 1e-10));
    }

    #[test]
    fn degenerate_cells_are_rejected() {
        assert!(matches!(
            ProfileManifold::chain(vec![1.0, 0.0], vec![0.0; 2], vec![1.0], 1.0),
            Err(ConformalError::DegenerateCell { node: 1, .. })
        ));
    }

    fn random_profile(seed: u64, n: usize) -> ProfileManifold {
        use rand::Rng;
        let mut rng = crate::algebraic::stream_rng(seed, 0);
        ProfileManifold::chain(
            (0..n).map(|_| rng.random_range(0.1..10.0)).collect(),
            (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
            (0..n - 1).map(|_| rng.random_range(0.1..5.0)).collect(),
            rng.random_range(0.5..6.0),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn l_is_self_adjoint_in_the_volume_inner_product(seed in 0u64..1000) {
            use rand::Rng;
            let pm = random_profile(seed, 40);
            let mut rng = crate::algebraic::stream_rng(seed, 1);
            let u: Vec<f64> = (0..40).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..40).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = pm.inner(&pm.apply_l(&u), &v);
            let b = pm.inner(&u, &pm.apply_l(&v));
            prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }

        #[test]
        fn lowest_eigenvalue_is_below_the_mean_of_sigma(seed in 0u64..1000) {
            let pm = random_profile(seed, 30);
            let sol = lowest_eigenpair(&pm, 1e-10).unwrap();
            prop_assert!(sol.lambda <= pm.functional() / pm.total_volume() + 1e-12);
            prop_assert!(sol.u.iter().all(|&u| u > 0.0));
        }
    }

    #[test]
    fn second_mode_changes_sign() {
        let pm = random_profile(4, 50);
        let first = lowest_eigenpair(&pm, 1e-10).unwrap();
        let second = eigenpair(&pm, 1, 1e-10).unwrap();
        assert!(second.lambda > first.lambda);
        assert_eq!(first.sign_changes(), 0);
        assert!(second.sign_changes() >= 1);
        assert!(pm.inner(&first.u, &second.u).abs() < 1e-9);
    }

    #[test]
    fn constant_factors_deform_by_scaling() {
        let pm = random_profile(8, 10);
        let law = ConformalLaw::new(4, 1.0 / 6.0);
        for k in [1.0, 2.5] {
            let sol = EigenSolution {
                index: 0,
                lambda: 0.0,
                u: vec![k; 10],
                residual: 0.0,
                iterations: 0,
            };
            let d = conformal_deform(&pm, &sol, &law).unwrap();
            for (a, s) in d.from_law.iter().zip(&pm.sigma) {
                assert!((a - s / (k * k)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn deformation_agrees_with_eigenvalue_form() {
        use rand::Rng;
        let mut rng = crate::algebraic::stream_rng(12, 0);
        let n = 40;
        // Strong coupling keeps u away from zero, where u^{-3} amplifies round-off.
        let pm = ProfileManifold::chain(
            (0..n).map(|_| rng.random_range(1.0..2.0)).collect(),
            (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            (0..n - 1).map(|_| rng.random_range(50.0..100.0)).collect(),
            1.0,
        )
        .unwrap();
        let sol = lowest_eigenpair(&pm, 1e-10).unwrap();
        let d = conformal_deform(&pm, &sol, &ConformalLaw::new(4, 1.0)).unwrap();
        assert!(d.relative_gap < 1e-9, "{} {} {} {} {}", d.relative_gap, sol.min_u(), sol.max_u(), sol.residual, sol.lambda);
    }

    #[test]
    fn kappa_is_computed_from_dimension() {
        let law = ConformalLaw::new(4, 1.0 / 6.0);
        assert_eq!(law.kappa(), 6.0);
        assert!((law.laplacian_coefficient() - 1.0).abs() < 1e-15);
        assert_eq!(law.metric_power(), 2.0);
        assert_eq!(law.laplacian_power(), 3.0);
    }

    #[test]
    fn glued_profile_nodes_and_volume() {
        let fam = GluedFamily::new(10.0, GeometryConstants::default()).unwrap();
        let opts = ProfileOptions::default();
        let pm = glued_profile(&fam, 1.0 / 6.0, &opts).unwrap();
        assert!((pm.sigma[0] + 0.01).abs() < 1e-15);
        assert_eq!(*pm.sigma.last().unwrap(), 0.0);
        assert_eq!(pm.kinds[0], NodeKind::Bulk);
        assert_eq!(*pm.kinds.last().unwrap(), NodeKind::Cap);

        let end = fam.a() + 1.0 + opts.pad;
        let warped = WarpedMetric::new(fam.warp_profile(opts.pad), 1.0, Some(1.0));
        assert!(matches!(warped.profile.domain(), TDomain::Interval { .. }));
        let cells: f64 = warped
            .integrate(|_| Ok(1.0), 0.0, end, 20_001, crate::Execution::Parallel)
            .unwrap();
        let expected = cells + 1000.0 + 1.0;
        assert!((pm.total_volume() - expected).abs() / expected < 1e-6);

        let row = functional_f_at(&fam, 1.0 / 6.0, &BandOptions::default()).unwrap();
        assert!((pm.functional() - row.f).abs() < 1e-6 * row.f.abs(), "{} {}", pm.functional(), row.f);
    }

    #[test]
    fn glued_profile_needs_resolution() {
        let fam = GluedFamily::new(10.0, GeometryConstants::default()).unwrap();
        let opts = ProfileOptions {
            cells: 32,
            ..ProfileOptions::default()
        };
        assert!(glued_profile(&fam, 1.0 / 6.0, &opts).is_err());
    }
}
