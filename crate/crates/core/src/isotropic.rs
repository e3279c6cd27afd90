//! Isotropic curvature `K = ⟨R(v∧w), v̄∧w̄⟩` with `v = e₁ + i e₂`,
//! `w = e₃ + i e₄` for an orthonormal frame `(e₁, …, e₄)`, its extremes over
//! all isotropic planes, and the modified scalar curvature `σ_μ = μs + |W|`.
//!
//! Frames are written in the orthonormal frame of the curvature record, so
//! "orthonormal" means an orthogonal `4×4` matrix.

use nalgebra::{Matrix4, Matrix6};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::algebraic::{random_curvature_operator, stream_rng};
use crate::curvature::{
    curvature_at, lambda2_operator, CurvatureOptions, CurvaturePointData, BIVECTORS,
};
use crate::exec::{map_indexed, try_map_indexed, Execution};
use crate::metric::integrate::pairwise_sum;
use crate::metric::{GridSpec, MetricError, MetricField};

#[derive(Debug, Error)]
pub enum IsotropicError {
    #[error("frame is not orthonormal (defect {defect:.3e})")]
    FrameNotOrthonormal { defect: f64 },
    #[error("μ must be positive, got {0}")]
    NonPositiveMu(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

const ORTHONORMAL_TOL: f64 = 1e-10;

/// The isotropic plane spanned by `e₁ + i e₂` and `e₃ + i e₄`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropicPlane {
    frame: Matrix4<f64>,
}

impl IsotropicPlane {
    /// `frame` columns are `e₁, …, e₄`.
    pub fn new(frame: Matrix4<f64>) -> Result<Self, IsotropicError> {
        let defect = (frame.transpose() * frame - Matrix4::identity()).amax();
        if !(defect <= ORTHONORMAL_TOL) {
            return Err(IsotropicError::FrameNotOrthonormal { defect });
        }
        Ok(Self { frame })
    }

    pub fn standard() -> Self {
        Self {
            frame: Matrix4::identity(),
        }
    }

    pub fn frame(&self) -> &Matrix4<f64> {
        &self.frame
    }

    pub fn vectors(&self) -> ([Complex64; 4], [Complex64; 4]) {
        let f = &self.frame;
        let v = std::array::from_fn(|a| Complex64::new(f[(a, 0)], f[(a, 1)]));
        let w = std::array::from_fn(|a| Complex64::new(f[(a, 2)], f[(a, 3)]));
        (v, w)
    }

    /// Components of `v∧w` in the unit `Λ²` basis.
    pub fn bivector(&self) -> [Complex64; 6] {
        let (v, w) = self.vectors();
        std::array::from_fn(|i| {
            let (a, b) = BIVECTORS[i];
            v[a] * w[b] - v[b] * w[a]
        })
    }

    /// Largest of `|⟨v,v⟩|, |⟨w,w⟩|, |⟨v,w⟩|` under the complex-bilinear
    /// extension of the inner product.
    pub fn isotropy_defect(&self) -> f64 {
        let (v, w) = self.vectors();
        let dot = |x: &[Complex64; 4], y: &[Complex64; 4]| -> Complex64 {
            x.iter().zip(y).map(|(a, b)| a * b).sum()
        };
        dot(&v, &v).norm().max(dot(&w, &w).norm()).max(dot(&v, &w).norm())
    }

    /// Rotation by `θ` in the plane of frame vectors `i` and `j`.
    pub fn rotated(&self, i: usize, j: usize, theta: f64) -> Self {
        Self {
            frame: givens(&self.frame, i, j, theta),
        }
    }

    /// `v ↦ e^{iθ} v`, i.e. a rotation of `(e₁, e₂)`.
    pub fn with_phase(&self, theta: f64) -> Self {
        self.rotated(0, 1, theta)
    }

    /// The plane with the roles of `v` and `w` exchanged.
    pub fn swapped(&self) -> Self {
        let f = &self.frame;
        let mut s = *f;
        s.set_column(0, &f.column(2));
        s.set_column(1, &f.column(3));
        s.set_column(2, &f.column(0));
        s.set_column(3, &f.column(1));
        Self { frame: s }
    }
}

fn givens(f: &Matrix4<f64>, i: usize, j: usize, theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    let mut out = *f;
    let (ci, cj) = (f.column(i).into_owned(), f.column(j).into_owned());
    out.set_column(i, &(ci * c + cj * s));
    out.set_column(j, &(cj * c - ci * s));
    out
}

/// `K` computed two independent ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsotropicCurvature {
    /// `Σ φ_A R_{AB} φ̄_B` with `φ = v∧w`.
    pub bivector_route: f64,
    /// `R₁₃₁₃ + R₁₄₁₄ + R₂₃₂₃ + R₂₄₂₄ − 2R₁₂₃₄` in the plane's frame.
    pub expansion_route: f64,
}

impl IsotropicCurvature {
    pub fn value(&self) -> f64 {
        self.bivector_route
    }

    pub fn gap(&self) -> f64 {
        (self.bivector_route - self.expansion_route).abs()
    }
}

pub fn isotropic_curvature(data: &CurvaturePointData, plane: &IsotropicPlane) -> IsotropicCurvature {
    let f = plane.frame();
    let e: [[f64; 4]; 4] = std::array::from_fn(|k| std::array::from_fn(|a| f[(a, k)]));
    let r = |a: usize, b: usize, c: usize, d: usize| data.riemann.evaluate(&e[a], &e[b], &e[c], &e[d]);
    IsotropicCurvature {
        bivector_route: bivector_form(&data.r_op, plane),
        expansion_route: r(0, 2, 0, 2) + r(0, 3, 0, 3) + r(1, 2, 1, 2) + r(1, 3, 1, 3)
            - 2.0 * r(0, 1, 2, 3),
    }
}

fn bivector_form(r_op: &Matrix6<f64>, plane: &IsotropicPlane) -> f64 {
    let phi = plane.bivector();
    let mut acc = 0.0;
    for a in 0..6 {
        for b in 0..6 {
            acc += r_op[(a, b)] * (phi[a] * phi[b].conj()).re;
        }
    }
    acc
}

/// Random-frame count and coordinate-ascent sweep limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub samples: usize,
    pub refinements: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            samples: 512,
            refinements: 64,
        }
    }
}

impl SearchBudget {
    pub fn doubled(self) -> Self {
        Self {
            samples: self.samples * 2,
            refinements: self.refinements * 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    pub seed: u64,
    /// Budget doubling stops once `k_min` and `k_max` move less than this.
    pub stabilize_tol: f64,
    pub max_doublings: usize,
    /// Extremes within `zero_tol · (1 + max|R|)` of zero count as zero when
    /// deciding the verdict.
    pub zero_tol: f64,
    pub exec: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: SearchBudget::default(),
            seed: 0,
            stabilize_tol: 1e-8,
            max_doublings: 4,
            zero_tol: 1e-10,
            exec: Execution::Sequential,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "NIC")]
    Nic,
    #[serde(rename = "PIC")]
    Pic,
    #[serde(rename = "INDEFINITE")]
    Indefinite,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Nic => "NIC",
            Verdict::Pic => "PIC",
            Verdict::Indefinite => "INDEFINITE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropicVerdict {
    pub k_min: f64,
    pub k_max: f64,
    pub sigma: f64,
    pub q_max: f64,
    pub verdict: Verdict,
    /// Budget of the final (stabilized) search.
    pub budget: SearchBudget,
    pub argmin: IsotropicPlane,
    pub argmax: IsotropicPlane,
}

fn random_frame<R: Rng>(rng: &mut R) -> Matrix4<f64> {
    loop {
        let g = Matrix4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let mut q = Matrix4::zeros();
        let mut ok = true;
        for k in 0..4 {
            let mut col = g.column(k).into_owned();
            for _ in 0..2 {
                for p in 0..k {
                    let qp = q.column(p).into_owned();
                    col -= qp * qp.dot(&col);
                }
            }
            let n = col.norm();
            if n < 1e-8 {
                ok = false;
                break;
            }
            q.set_column(k, &(col / n));
        }
        if ok {
            return q;
        }
    }
}

/// Planes that move the isotropic plane; rotations in `(e₁,e₂)` and
/// `(e₃,e₄)` only change `v`, `w` by a phase and leave `K` fixed.
const ASCENT_PLANES: [(usize, usize); 4] = [(0, 2), (0, 3), (1, 2), (1, 3)];

/// Along a Givens rotation `K(θ)` is a trigonometric polynomial of degree at
/// most four, so nine equispaced samples determine it exactly.
struct TrigPoly {
    a: [f64; 5],
    b: [f64; 5],
}

impl TrigPoly {
    fn fit(samples: &[f64; 9]) -> Self {
        let mut a = [0.0; 5];
        let mut b = [0.0; 5];
        for (j, &k) in samples.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 9.0;
            for m in 0..5 {
                let (s, c) = (m as f64 * theta).sin_cos();
                a[m] += k * c;
                b[m] += k * s;
            }
        }
        a[0] /= 9.0;
        for m in 1..5 {
            a[m] *= 2.0 / 9.0;
            b[m] *= 2.0 / 9.0;
        }
        Self { a, b }
    }

    /// Value and first two derivatives.
    fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let mut v = (self.a[0], 0.0, 0.0);
        for m in 1..5 {
            let mf = m as f64;
            let (s, c) = (mf * theta).sin_cos();
            v.0 += self.a[m] * c + self.b[m] * s;
            v.1 += mf * (-self.a[m] * s + self.b[m] * c);
            v.2 -= mf * mf * (self.a[m] * c + self.b[m] * s);
        }
        v
    }

    /// Global maximizer: dense scan, then Newton.
    fn argmax(&self) -> (f64, f64) {
        const SCAN: usize = 96;
        let mut best = (0.0, self.eval(0.0).0);
        for j in 1..SCAN {
            let t = 2.0 * std::f64::consts::PI * j as f64 / SCAN as f64;
            let v = self.eval(t).0;
            if v > best.1 {
                best = (t, v);
            }
        }
        let mut t = best.0;
        for _ in 0..8 {
            let (_, d1, d2) = self.eval(t);
            if d2 >= 0.0 {
                break;
            }
            let step = (-d1 / d2).clamp(-0.1, 0.1);
            t += step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let v = self.eval(t).0;
        if v >= best.1 {
            (t, v)
        } else {
            best
        }
    }
}

/// Coordinate ascent of `sign·K` from `plane`.
fn refine(r_op: &Matrix6<f64>, plane: IsotropicPlane, sign: f64, sweeps: usize) -> (IsotropicPlane, f64) {
    let mut plane = plane;
    let mut value = sign * bivector_form(r_op, &plane);
    for _ in 0..sweeps {
        let start = value;
        for &(i, j) in &ASCENT_PLANES {
            let samples: [f64; 9] = std::array::from_fn(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 9.0;
                sign * bivector_form(r_op, &plane.rotated(i, j, theta))
            });
            let (theta, predicted) = TrigPoly::fit(&samples).argmax();
            if predicted > value {
                let candidate = plane.rotated(i, j, theta);
                let v = sign * bivector_form(r_op, &candidate);
                if v > value {
                    plane = candidate;
                    value = v;
                }
            }
        }
        if value - start <= 1e-15 * (1.0 + value.abs()) {
            break;
        }
    }
    (plane, sign * value)
}

struct Extremes {
    k_min: f64,
    k_max: f64,
    argmin: IsotropicPlane,
    argmax: IsotropicPlane,
}

fn search_once(r_op: &Matrix6<f64>, budget: SearchBudget, seed: u64, exec: Execution) -> Extremes {
    let samples = map_indexed(exec, budget.samples.max(1), |i| {
        let frame = random_frame(&mut stream_rng(seed, i as u64));
        let plane = IsotropicPlane { frame };
        (plane, bivector_form(r_op, &plane))
    });
    // Isotropic planes form two components (one per frame orientation);
    // refine the best start found in each.
    let mut starts: Vec<(IsotropicPlane, f64)> = Vec::new();
    for positive in [true, false] {
        let pick = samples
            .iter()
            .filter(|(p, _)| (p.frame.determinant() > 0.0) == positive);
        let best_max = pick.clone().max_by(|a, b| a.1.total_cmp(&b.1));
        let best_min = pick.min_by(|a, b| a.1.total_cmp(&b.1));
        starts.extend(best_max.map(|s| (s.0, 1.0)));
        starts.extend(best_min.map(|s| (s.0, -1.0)));
    }
    let mut out = Extremes {
        k_min: f64::INFINITY,
        k_max: f64::NEG_INFINITY,
        argmin: IsotropicPlane::standard(),
        argmax: IsotropicPlane::standard(),
    };
    for (plane, sign) in starts {
        let (p, k) = refine(r_op, plane, sign, budget.refinements);
        if sign > 0.0 && k > out.k_max {
            out.k_max = k;
            out.argmax = p;
        }
        if sign < 0.0 && k < out.k_min {
            out.k_min = k;
            out.argmin = p;
        }
    }
    out
}

/// Extremal isotropic curvatures at a point, with the budget doubled until
/// both extremes are stable.
pub fn extremal_isotropic(data: &CurvaturePointData, search: &SearchOptions) -> IsotropicVerdict {
    let mut budget = search.budget;
    let mut current = search_once(&data.r_op, budget, search.seed, search.exec);
    for _ in 0..search.max_doublings {
        let next_budget = budget.doubled();
        let next = search_once(&data.r_op, next_budget, search.seed, search.exec);
        let moved = (next.k_max - current.k_max).abs().max((next.k_min - current.k_min).abs());
        // Keep the better extremes; the search can only undershoot.
        let merged = Extremes {
            k_min: current.k_min.min(next.k_min),
            k_max: current.k_max.max(next.k_max),
            argmin: if next.k_min < current.k_min { next.argmin } else { current.argmin },
            argmax: if next.k_max > current.k_max { next.argmax } else { current.argmax },
        };
        current = merged;
        budget = next_budget;
        if moved <= search.stabilize_tol {
            break;
        }
    }
    let zero = search.zero_tol * (1.0 + data.r_op.amax());
    let verdict = if current.k_max < -zero {
        Verdict::Nic
    } else if current.k_min > zero {
        Verdict::Pic
    } else {
        Verdict::Indefinite
    };
    IsotropicVerdict {
        k_min: current.k_min,
        k_max: current.k_max,
        sigma: data.sigma(),
        q_max: lambda2_operator(data).q_max(),
        verdict,
        budget,
        argmin: current.argmin,
        argmax: current.argmax,
    }
}

/// `σ_μ` at every node of a grid, plus its integral against the volume form.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaField {
    pub mu: f64,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub integral: f64,
}

impl SigmaField {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn sigma_field(
    m: &MetricField,
    mu: f64,
    grid: &GridSpec,
    opts: &CurvatureOptions,
    exec: Execution,
) -> Result<SigmaField, IsotropicError> {
    if !(mu > 0.0) {
        return Err(IsotropicError::NonPositiveMu(mu));
    }
    let rules = grid.rules(m.chart())?;
    let points = grid.points(m.chart())?;
    let shape: Vec<usize> = rules.iter().map(|r| r.nodes.len()).collect();
    let rows = try_map_indexed(exec, points.len(), |flat| -> Result<(f64, f64), MetricError> {
        let x = &points[flat];
        let data = curvature_at(m, x, opts)?;
        let mut index = vec![0; shape.len()];
        crate::metric::unflatten(flat, &shape, &mut index);
        let weight: f64 = index.iter().zip(&rules).map(|(&i, r)| r.weights[i]).product();
        let volume = m.metric_at(x)?.determinant().sqrt();
        let sigma = data.sigma_mu(mu);
        Ok((sigma, weight * volume * sigma))
    })?;
    let (values, terms): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    Ok(SigmaField {
        mu,
        points,
        values,
        integral: pairwise_sum(&terms),
    })
}

/// A tensor on which the two sides of the comparison disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckCase {
    pub index: usize,
    pub seed: u64,
    pub r_op: [[f64; 6]; 6],
    pub k_max: f64,
    pub q_max: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub count: usize,
    pub seed: u64,
    /// Rows: `k_max < 0` true/false; columns: `q_max < 0` true/false.
    pub agreement: [[usize; 2]; 2],
    pub agreement_rate: f64,
    /// Tensors with `σ < 0` among the sample.
    pub sigma_negative: usize,
    /// Tensors with `σ < 0` but `k_max ≥ 0`; must be empty.
    pub sufficiency_violations: Vec<CrosscheckCase>,
    pub disagreements: Vec<CrosscheckCase>,
    /// Largest `|k_max − 2 q_max|` seen.
    pub max_spectral_gap: f64,
    /// Largest route (a)/(b) gap on one random frame per tensor.
    pub max_route_gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrosscheckOptions {
    pub search: SearchOptions,
    /// Range of the identity shift added to each random tensor.
    pub shift: (f64, f64),
    pub exec: Execution,
}

impl Default for CrosscheckOptions {
    fn default() -> Self {
        Self {
            search: SearchOptions {
                max_doublings: 1,
                ..SearchOptions::default()
            },
            shift: (-4.0, 2.0),
            exec: Execution::Parallel,
        }
    }
}

/// Compares the sign of the searched `k_max` with the sign of the top
/// eigenvalue of `(s/6)I − W` on random algebraic curvature tensors.
pub fn criterion_crosscheck(count: usize, seed: u64, opts: &CrosscheckOptions) -> CrosscheckReport {
    let rows = map_indexed(opts.exec, count, |i| {
        let mut rng = stream_rng(seed, i as u64);
        let r_op = random_curvature_operator(&mut rng, opts.shift);
        let data = CurvaturePointData::from_operator(&r_op);
        let search = SearchOptions {
            seed: seed ^ 0x5DEE_CE66_D1CE_5EED ^ (i as u64).rotate_left(32),
            exec: Execution::Sequential,
            ..opts.search
        };
        let v = extremal_isotropic(&data, &search);
        let plane = IsotropicPlane {
            frame: random_frame(&mut rng),
        };
        let route_gap = isotropic_curvature(&data, &plane).gap();
        let case = CrosscheckCase {
            index: i,
            seed,
            r_op: std::array::from_fn(|a| std::array::from_fn(|b| r_op[(a, b)])),
            k_max: v.k_max,
            q_max: v.q_max,
            sigma: v.sigma,
        };
        (case, route_gap)
    });
    let mut report = CrosscheckReport {
        count,
        seed,
        agreement: [[0; 2]; 2],
        agreement_rate: 0.0,
        sigma_negative: 0,
        sufficiency_violations: Vec::new(),
        disagreements: Vec::new(),
        max_spectral_gap: 0.0,
        max_route_gap: 0.0,
    };
    for (case, route_gap) in rows {
        let k_neg = case.k_max < 0.0;
        let q_neg = case.q_max < 0.0;
        report.agreement[usize::from(!k_neg)][usize::from(!q_neg)] += 1;
        report.max_spectral_gap = report.max_spectral_gap.max((case.k_max - 2.0 * case.q_max).abs());
        report.max_route_gap = report.max_route_gap.max(route_gap);
        if case.sigma < 0.0 {
            report.sigma_negative += 1;
            if !k_neg {
                report.sufficiency_violations.push(case.clone());
            }
        }
        if k_neg != q_neg {
            report.disagreements.push(case);
        }
    }
    let agree = report.agreement[0][0] + report.agreement[1][1];
    report.agreement_rate = if count == 0 { 1.0 } else { agree as f64 / count as f64 };
    report
}
