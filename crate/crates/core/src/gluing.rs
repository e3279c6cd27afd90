//! The glued family `g_c`: the scaled hyperbolic bulk `c²g_H + dθ²`, the
//! band metric `k_c + dθ²` with `k_c = dt² + f_c(t)²g_e`, and the fixed cap.
//!
//! The warp `f_c(t) = φ(t − a)·c·e^{−t/c} + 1 − φ(t − a)` interpolates from
//! the cusp profile to the flat one over `[a, a + ½]`, `a = a(c)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::{curvature_at, CurvatureOptions};
use crate::exec::{try_map_indexed, Execution};
use crate::metric::warp::TDomain;
use crate::metric::{MetricError, WarpJet, WarpProfile, WarpedMetric};

#[derive(Debug, Error)]
pub enum GluingError {
    #[error("band bound violated at c = {c}: c·e^(-t/c) ranges over [{min}, {max}], need (1/2, 1]")]
    BoundViolated { c: f64, min: f64, max: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Smallest admissible `c`: below it the band bound fails.
pub fn c_threshold() -> f64 {
    1.0 / std::f64::consts::LN_2
}

/// Value and first two derivatives of a one-variable function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Cut-off function equal to 1 for `t ≤ 0` and 0 for `t ≥ ½`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpFunction {
    /// `h(½−t)/(h(½−t)+h(t))`, `h(x) = e^{−1/x}` for `x > 0`.
    #[default]
    Exponential,
    /// `φ ≡ 0`: the warp is identically 1.
    Zero,
}

/// `h(x) = e^{−1/x}` with derivatives; zero (to all orders) for small `x`.
fn h_jet(x: f64) -> (f64, f64, f64) {
    if x < 1e-3 {
        return (0.0, 0.0, 0.0);
    }
    let h = (-1.0 / x).exp();
    let x2 = x * x;
    (h, h / x2, h * (1.0 / (x2 * x2) - 2.0 / (x2 * x)))
}

impl BumpFunction {
    pub fn jet(&self, t: f64) -> Jet {
        match self {
            BumpFunction::Zero => Jet {
                value: 0.0,
                d1: 0.0,
                d2: 0.0,
            },
            BumpFunction::Exponential => {
                if t <= 0.0 {
                    return Jet {
                        value: 1.0,
                        d1: 0.0,
                        d2: 0.0,
                    };
                }
                if t >= 0.5 {
                    return Jet {
                        value: 0.0,
                        d1: 0.0,
                        d2: 0.0,
                    };
                }
                let (ha, ha1, ha2) = h_jet(0.5 - t);
                let (a, a1, a2) = (ha, -ha1, ha2);
                let (b, b1, b2) = h_jet(t);
                let s = a + b;
                let s1 = a1 + b1;
                let num = a1 * b - a * b1;
                Jet {
                    value: a / s,
                    d1: num / (s * s),
                    d2: (a2 * b - a * b2) / (s * s) - 2.0 * num * s1 / (s * s * s),
                }
            }
        }
    }

    /// `max |φ′|` and `max |φ″|` over a dense scan of `[0, ½]`.
    pub fn derivative_bounds(&self, samples: usize) -> (f64, f64) {
        (0..=samples).fold((0.0f64, 0.0f64), |(m1, m2), i| {
            let j = self.jet(0.5 * i as f64 / samples as f64);
            (m1.max(j.d1.abs()), m2.max(j.d2.abs()))
        })
    }
}

/// Choice of the gluing position `a(c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GluePosition {
    /// `a(c) = c log c`, where the cusp warp reaches exactly 1.
    #[default]
    CLogC,
    /// `a(c) = c log(c/2)`, where the cusp warp equals 2.
    CLogHalfC,
}

impl GluePosition {
    pub fn a(&self, c: f64) -> f64 {
        match self {
            GluePosition::CLogC => c * c.ln(),
            GluePosition::CLogHalfC => c * (c / 2.0).ln(),
        }
    }
}

/// Geometry constants entering `F(g_c)`; none depends on `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConstants {
    /// Volume of the compact core `N₀` under the hyperbolic metric.
    pub vol0: f64,
    /// Area of the flat cross-section torus.
    pub area: f64,
    /// Length of the circle factor.
    pub ell: f64,
    /// `∫ s dV` over the cap.
    pub s_cap: f64,
    /// `∫ |W| dV` over the cap.
    pub w_cap: f64,
    /// Volume of the cap, used only by the one-dimensional profile model.
    pub cap_volume: f64,
}

impl Default for GeometryConstants {
    fn default() -> Self {
        Self {
            vol0: 1.0,
            area: 1.0,
            ell: 1.0,
            s_cap: 0.0,
            w_cap: 0.0,
            cap_volume: 1.0,
        }
    }
}

impl GeometryConstants {
    pub fn validate(&self) -> Result<(), GluingError> {
        for (name, v) in [
            ("vol0", self.vol0),
            ("area", self.area),
            ("ell", self.ell),
            ("cap_volume", self.cap_volume),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GluingError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.s_cap.is_finite() || !(self.w_cap >= 0.0 && self.w_cap.is_finite()) {
            return Err(GluingError::InvalidParameter(
                "cap integrals must be finite and w_cap non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GluedFamily {
    pub c: f64,
    pub position: GluePosition,
    pub bump: BumpFunction,
    pub constants: GeometryConstants,
}

impl GluedFamily {
    /// Requires `c > 1/log 2`.
    pub fn new(c: f64, constants: GeometryConstants) -> Result<Self, GluingError> {
        constants.validate()?;
        if !(c > c_threshold()) || !c.is_finite() {
            return Err(GluingError::InvalidParameter(format!(
                "c must exceed 1/log 2 ≈ {:.6}, got {c}",
                c_threshold()
            )));
        }
        Ok(Self::unchecked(c, constants))
    }

    /// No check on `c`; for probing the boundary cases.
    pub fn unchecked(c: f64, constants: GeometryConstants) -> Self {
        Self {
            c,
            position: GluePosition::default(),
            bump: BumpFunction::default(),
            constants,
        }
    }

    pub fn with_position(mut self, position: GluePosition) -> Self {
        self.position = position;
        self
    }

    pub fn with_bump(mut self, bump: BumpFunction) -> Self {
        self.bump = bump;
        self
    }

    /// The same family at another `c`.
    pub fn at(&self, c: f64) -> Result<Self, GluingError> {
        Ok(Self::new(c, self.constants)?
            .with_position(self.position)
            .with_bump(self.bump))
    }

    pub fn a(&self) -> f64 {
        self.position.a(self.c)
    }

    pub fn warp(&self, t: f64) -> WarpJet {
        warp_fc(self, t)
    }

    /// `f_c` as a profile on `[−1, a + 2 + pad]`.
    pub fn warp_profile(&self, pad: f64) -> WarpProfile {
        let fam = *self;
        WarpProfile::analytic(
            TDomain::Interval {
                lo: -1.0,
                hi: self.a() + 2.0 + pad.max(0.0),
            },
            move |t| warp_fc(&fam, t),
        )
    }

    /// `k_c + dθ²`.
    pub fn band_metric(&self, pad: f64) -> WarpedMetric {
        WarpedMetric::new(self.warp_profile(pad), self.constants.area, Some(self.constants.ell))
    }

    /// Hyperbolic volume of `N_{a(c)}`: the core plus the cusp up to
    /// `g_H`-depth `a/c`.
    pub fn bulk_hyperbolic_volume(&self) -> f64 {
        let k = &self.constants;
        k.vol0 + 0.5 * k.area * (1.0 - (-2.0 * self.a() / self.c).exp())
    }
}

/// `f_c(t)` with analytic first and second derivatives.
pub fn warp_fc(fam: &GluedFamily, t: f64) -> WarpJet {
    let c = fam.c;
    let p = fam.bump.jet(t - fam.a());
    let e = (-t / c).exp();
    let cusp = c * e - 1.0;
    WarpJet {
        f: p.value * cusp + 1.0,
        df: p.d1 * cusp - p.value * e,
        d2f: p.d2 * cusp - 2.0 * p.d1 * e + p.value * e / c,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandBoundReport {
    pub c: f64,
    pub min: f64,
    pub max: f64,
    pub closed_form_min: f64,
    pub closed_form_max: f64,
}

/// Range of `c·e^{−t/c}` over `[a, a+1]`, checked against `(½, 1]`.
pub fn band_bound_check(fam: &GluedFamily) -> Result<BandBoundReport, GluingError> {
    const SAMPLES: usize = 1000;
    let (c, a) = (fam.c, fam.a());
    let (min, max) = (0..=SAMPLES).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
        let t = a + i as f64 / SAMPLES as f64;
        let v = c * (-t / c).exp();
        (lo.min(v), hi.max(v))
    });
    let report = BandBoundReport {
        c,
        min,
        max,
        closed_form_min: c * (-(a + 1.0) / c).exp(),
        closed_form_max: c * (-a / c).exp(),
    };
    let tol = 1e-12;
    if !(c > c_threshold()) || !(min > 0.5) || max > 1.0 + tol {
        return Err(GluingError::BoundViolated { c, min, max });
    }
    Ok(report)
}

/// `max(|f²−1|, |(f²)′|, |(f²)″|)` at `t`.
fn flat_deviation(fam: &GluedFamily, t: f64) -> f64 {
    let j = warp_fc(fam, t);
    let f2 = j.f * j.f;
    (f2 - 1.0)
        .abs()
        .max((2.0 * j.f * j.df).abs())
        .max((2.0 * (j.df * j.df + j.f * j.d2f)).abs())
}

/// `C²` distance of `k_c` from `dt² + g_e` over the band `[a, a+1]`:
/// dense sampling followed by golden-section refinement of the maximum.
pub fn c2_distance_band(fam: &GluedFamily) -> f64 {
    const SAMPLES: usize = 2000;
    let a = fam.a();
    let h = 1.0 / SAMPLES as f64;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..=SAMPLES {
        let v = flat_deviation(fam, a + i as f64 * h);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = a + (best_i.saturating_sub(1)) as f64 * h;
    let hi = a + (best_i + 1).min(SAMPLES) as f64 * h;
    let refined = golden_max(|t| flat_deviation(fam, t), lo, hi, 60);
    best.max(refined)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Jumps of `f_c″` across `t = a` and `t = a + ½`, from one-sided linear
/// extrapolation with step `h`.
pub fn second_derivative_jumps(fam: &GluedFamily, h: f64) -> [f64; 2] {
    let d2 = |t: f64| warp_fc(fam, t).d2f;
    let jump = |t0: f64| {
        let left = 2.0 * d2(t0 - h) - d2(t0 - 2.0 * h);
        let right = 2.0 * d2(t0 + h) - d2(t0 + 2.0 * h);
        (left - right).abs()
    };
    let a = fam.a();
    [jump(a), jump(a + 0.5)]
}

/// Quadrature and curvature settings for band integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandOptions {
    /// Simpson node count over `[a, a+1]` (odd).
    pub nodes: usize,
    pub curvature: CurvatureOptions,
}

impl Default for BandOptions {
    fn default() -> Self {
        Self {
            nodes: 401,
            curvature: CurvatureOptions::default(),
        }
    }
}

/// Points of `(a, a + ½)` where `ff″ − f′²` changes sign. The Weyl tensor of
/// `dt² + f²g_e + dθ²` is proportional to that expression, so `|W|` has a
/// kink at each of them; quadrature splits there.
pub fn weyl_kinks(fam: &GluedFamily) -> Vec<f64> {
    const SCAN: usize = 4000;
    let q = |t: f64| {
        let j = warp_fc(fam, t);
        j.f * j.d2f - j.df * j.df
    };
    let a = fam.a();
    let h = 0.5 / SCAN as f64;
    let mut kinks = Vec::new();
    let mut prev = (a + h, q(a + h));
    for i in 2..SCAN {
        let t = a + i as f64 * h;
        let v = q(t);
        if v == 0.0 || (v > 0.0) != (prev.1 > 0.0) && prev.1 != 0.0 {
            let (mut lo, mut hi, qlo) = (prev.0, t, prev.1);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (q(mid) > 0.0) == (qlo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            kinks.push(0.5 * (lo + hi));
        }
        prev = (t, v);
    }
    kinks
}

/// `[lo, kinks…, hi]` restricted to the kinks strictly inside.
pub(crate) fn breakpoints(fam: &GluedFamily, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    pts.extend(weyl_kinks(fam).into_iter().filter(|&k| k > lo && k < hi));
    pts.push(hi);
    pts
}

/// `(∫ s dV, ∫ |W| dV)` of `k_c + dθ²` over `[lo, hi] × T² × S¹`, Simpson on
/// each piece between kinks of `|W|`, about `nodes` nodes in total.
pub fn band_integrals(fam: &GluedFamily, lo: f64, hi: f64, opts: &BandOptions) -> Result<(f64, f64), GluingError> {
    let band = fam.band_metric(0.0);
    let m = band.metric_field()?;
    let point = |t: f64| [t, 0.0, 0.0, 0.0];
    let (mut s, mut w) = (0.0, 0.0);
    for piece in breakpoints(fam, lo, hi).windows(2) {
        let share = (piece[1] - piece[0]) / (hi - lo);
        let panels = (((opts.nodes.max(3) - 1) as f64 * share / 2.0).ceil() as usize).max(1) * 2;
        s += band.integrate(
            |t| Ok(curvature_at(&m, &point(t), &opts.curvature)?.scalar),
            piece[0],
            piece[1],
            panels + 1,
            Execution::Sequential,
        )?;
        w += band.integrate(
            |t| Ok(curvature_at(&m, &point(t), &opts.curvature)?.weyl_norm),
            piece[0],
            piece[1],
            panels + 1,
            Execution::Sequential,
        )?;
    }
    Ok((s, w))
}

/// One row of the `F(c)` table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FRow {
    pub c: f64,
    pub a_c: f64,
    pub i_bulk_s: f64,
    pub i_band_s: f64,
    pub i_cap_s: f64,
    pub i_bulk_w: f64,
    pub i_band_w: f64,
    pub i_cap_w: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub c2_band_distance: f64,
}

impl FRow {
    pub const HEADER: [&'static str; 10] = [
        "c",
        "a_c",
        "I_bulk_s",
        "I_band_s",
        "I_cap_s",
        "I_bulk_w",
        "I_band_w",
        "I_cap_w",
        "F",
        "c2_band_distance",
    ];

    pub fn values(&self) -> [f64; 10] {
        [
            self.c,
            self.a_c,
            self.i_bulk_s,
            self.i_band_s,
            self.i_cap_s,
            self.i_bulk_w,
            self.i_band_w,
            self.i_cap_w,
            self.f,
            self.c2_band_distance,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FTable {
    pub mu: f64,
    pub rows: Vec<FRow>,
    /// Smallest `c` beyond which every tabulated `F` is negative, refined by
    /// bisection inside the grid cell where the last sign change happens.
    pub c_star: Option<f64>,
}

/// `F(g_c) = μ ∫ s dV + ∫ |W| dV`, split over bulk, band and cap.
pub fn functional_f_at(fam: &GluedFamily, mu: f64, opts: &BandOptions) -> Result<FRow, GluingError> {
    if !(mu > 0.0) {
        return Err(GluingError::InvalidParameter(format!("μ must be positive, got {mu}")));
    }
    let (c, a) = (fam.c, fam.a());
    let k = &fam.constants;
    let i_bulk_s = (-6.0 / (c * c)) * c.powi(3) * fam.bulk_hyperbolic_volume() * k.ell;
    let (i_band_s, i_band_w) = band_integrals(fam, a, a + 1.0, opts)?;
    let (i_bulk_w, i_cap_s, i_cap_w) = (0.0, k.s_cap, k.w_cap);
    Ok(FRow {
        c,
        a_c: a,
        i_bulk_s,
        i_band_s,
        i_cap_s,
        i_bulk_w,
        i_band_w,
        i_cap_w,
        f: mu * (i_bulk_s + i_band_s + i_cap_s) + i_bulk_w + i_band_w + i_cap_w,
        c2_band_distance: c2_distance_band(fam),
    })
}

/// `F` over a grid of `c` values, rows in ascending `c`.
pub fn functional_f(
    base: &GluedFamily,
    c_grid: &[f64],
    mu: f64,
    opts: &BandOptions,
    exec: Execution,
) -> Result<FTable, GluingError> {
    let mut grid = c_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let rows = try_map_indexed(exec, grid.len(), |i| functional_f_at(&base.at(grid[i])?, mu, opts))?;
    let c_star = crossing(base, &rows, mu, opts)?;
    Ok(FTable { mu, rows, c_star })
}

fn crossing(base: &GluedFamily, rows: &[FRow], mu: f64, opts: &BandOptions) -> Result<Option<f64>, GluingError> {
    let Some(last) = rows.last() else {
        return Ok(None);
    };
    if last.f >= 0.0 {
        return Ok(None);
    }
    let first_negative = rows.iter().rposition(|r| r.f >= 0.0).map_or(0, |i| i + 1);
    if first_negative == 0 {
        return Ok(Some(rows[0].c));
    }
    let (mut lo, mut hi) = (rows[first_negative - 1].c, rows[first_negative].c);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if functional_f_at(&base.at(mid)?, mu, opts)?.f < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-10 * hi {
            break;
        }
    }
    Ok(Some(hi))
}

/// `n` values from `lo` to `hi`, geometrically spaced.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let ratio = hi / lo;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo * ratio.powf(i as f64 / (n - 1) as f64) })
        .collect()
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `∫ s dV` of `c²g_H + dθ²` over the whole bulk, with the truncated cusp
/// `[0, a] × T² × S¹` integrated by the curvature engine and the core `N₀`
/// taken in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CuspScalingReport {
    pub c: f64,
    pub engine_cusp: f64,
    pub closed_form_core: f64,
    pub total: f64,
    /// `−6c·Vol(N_{a(c)}, g_H)·ℓ`.
    pub predicted: f64,
    pub relative_gap: f64,
}

pub fn cusp_scaling_check(fam: &GluedFamily, nodes: usize, opts: &CurvatureOptions) -> Result<CuspScalingReport, GluingError> {
    let (c, a) = (fam.c, fam.a());
    let k = &fam.constants;
    let cusp = WarpedMetric::new(
        WarpProfile::exp_warp(c, TDomain::Interval { lo: -1.0, hi: a + 1.0 }),
        k.area,
        Some(k.ell),
    );
    let m = cusp.metric_field()?;
    let engine_cusp = cusp.integrate(
        |t| Ok(curvature_at(&m, &[t, 0.0, 0.0, 0.0], opts)?.scalar),
        0.0,
        a,
        nodes,
        Execution::Sequential,
    )?;
    let closed_form_core = -6.0 * c * k.vol0 * k.ell;
    let total = engine_cusp + closed_form_core;
    let predicted = -6.0 * c * fam.bulk_hyperbolic_volume() * k.ell;
    Ok(CuspScalingReport {
        c,
        engine_cusp,
        closed_form_core,
        total,
        predicted,
        relative_gap: ((total - predicted) / predicted).abs(),
    })
}

/// `∫ s dV` of `dt² + f²g_e + dθ²` over a full circle in `t`, by the engine
/// and by the identity `∫ s dV = 2ℓ·Area·∫ f′² dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoGoReport {
    pub engine: f64,
    pub identity: f64,
    pub relative_gap: f64,
}

pub fn no_go_identity(
    profile: &WarpProfile,
    area: f64,
    ell: f64,
    nodes: usize,
    opts: &CurvatureOptions,
) -> Result<NoGoReport, GluingError> {
    let TDomain::Circle { period } = profile.domain() else {
        return Err(GluingError::InvalidParameter("the no-go identity needs a periodic profile".into()));
    };
    let metric = WarpedMetric::new(profile.clone(), area, Some(ell));
    let m = metric.metric_field()?;
    let engine = metric.integrate(
        |t| Ok(curvature_at(&m, &[t, 0.0, 0.0, 0.0], opts)?.scalar),
        0.0,
        period,
        nodes,
        Execution::Sequential,
    )?;
    let rule = crate::metric::integrate::periodic_rule(0.0, period, nodes)?;
    let mut terms = Vec::with_capacity(nodes);
    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
        let j = profile.jet(*t)?;
        terms.push(w * j.df * j.df);
    }
    let identity = 2.0 * ell * area * crate::metric::pairwise_sum(&terms);
    Ok(NoGoReport {
        engine,
        identity,
        relative_gap: ((engine - identity) / identity).abs(),
    })
}

/// A positive smooth warp on a circle of length 2π: mean 2 plus three
/// harmonics with coefficients uniform in `[−0.3, 0.3]`.
pub fn random_fourier_profile(seed: u64, index: u64) -> WarpProfile {
    use rand::Rng;
    let mut rng = crate::algebraic::stream_rng(seed, index);
    let cos: Vec<f64> = (0..3).map(|_| rng.random_range(-0.3..0.3)).collect();
    let sin: Vec<f64> = (0..3).map(|_| rng.random_range(-0.3..0.3)).collect();
    WarpProfile::fourier(2.0, cos, sin, 2.0 * std::f64::consts::PI)
}
