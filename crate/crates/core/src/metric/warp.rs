//! One-variable warp profiles `f(t)` and the metrics
//! `dt² + f(t)² g_e (+ dθ²)` they define, `g_e` a flat square torus.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::exec::{try_map_indexed, Execution};

use super::derivatives::StencilOrder;
use super::integrate::{pairwise_sum, periodic_rule, simpson_rule};
use super::{Axis, Chart, MetricError, MetricField, MetricFunction};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpJet {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TDomain {
    Interval { lo: f64, hi: f64 },
    Circle { period: f64 },
}

type JetFn = Arc<dyn Fn(f64) -> WarpJet + Send + Sync>;
type ValueFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Analytic(JetFn),
    FiniteDifference {
        f: ValueFn,
        step: f64,
        order: StencilOrder,
    },
}

#[derive(Clone)]
pub struct WarpProfile {
    source: Source,
    domain: TDomain,
}

impl fmt::Debug for WarpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::Analytic(_) => "analytic".to_string(),
            Source::FiniteDifference { step, order, .. } => {
                format!("finite-difference(order {}, h = {step})", order.nominal())
            }
        };
        f.debug_struct("WarpProfile")
            .field("derivatives", &kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl WarpProfile {
    pub fn analytic<F>(domain: TDomain, jet: F) -> Self
    where
        F: Fn(f64) -> WarpJet + Send + Sync + 'static,
    {
        Self {
            source: Source::Analytic(Arc::new(jet)),
            domain,
        }
    }

    /// A profile whose derivatives come from central differences of `f`.
    pub fn finite_difference<F>(domain: TDomain, f: F, step: f64, order: StencilOrder) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            source: Source::FiniteDifference {
                f: Arc::new(f),
                step,
                order,
            },
            domain,
        }
    }

    /// `c·e^{−t/c}`, the warp of the scaled cusp `c²g_H`.
    pub fn exp_warp(c: f64, domain: TDomain) -> Self {
        Self::analytic(domain, move |t| {
            let f = c * (-t / c).exp();
            WarpJet {
                f,
                df: -f / c,
                d2f: f / (c * c),
            }
        })
    }

    /// `mean + Σ a_k cos(kωt) + b_k sin(kωt)` on a circle of length `period`,
    /// `ω = 2π/period`, `k = 1, 2, …`.
    pub fn fourier(mean: f64, cos: Vec<f64>, sin: Vec<f64>, period: f64) -> Self {
        let omega = 2.0 * PI / period;
        Self::analytic(TDomain::Circle { period }, move |t| {
            let mut jet = WarpJet {
                f: mean,
                df: 0.0,
                d2f: 0.0,
            };
            for (k, (a, b)) in cos.iter().zip(sin.iter()).enumerate() {
                let w = (k + 1) as f64 * omega;
                let (s, c) = (w * t).sin_cos();
                jet.f += a * c + b * s;
                jet.df += w * (-a * s + b * c);
                jet.d2f += -w * w * (a * c + b * s);
            }
            jet
        })
    }

    pub fn domain(&self) -> TDomain {
        self.domain
    }

    /// The same profile with derivatives replaced by finite differences.
    pub fn with_finite_differences(&self, step: f64, order: StencilOrder) -> Self {
        let base = self.clone();
        Self::finite_difference(self.domain, move |t| base.raw(t).f, step, order)
    }

    fn raw(&self, t: f64) -> WarpJet {
        match &self.source {
            Source::Analytic(jet) => jet(t),
            Source::FiniteDifference { f, step, order } => {
                let h = *step;
                let (df, d2f) = match order {
                    StencilOrder::Second => (
                        (f(t + h) - f(t - h)) / (2.0 * h),
                        (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
                    ),
                    StencilOrder::Fourth => (
                        (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h),
                        (-f(t + 2.0 * h) + 16.0 * f(t + h) - 30.0 * f(t) + 16.0 * f(t - h)
                            - f(t - 2.0 * h))
                            / (12.0 * h * h),
                    ),
                };
                WarpJet { f: f(t), df, d2f }
            }
        }
    }

    /// `(f, f', f'')` at `t`; fails if `f(t) ≤ 0`.
    pub fn jet(&self, t: f64) -> Result<WarpJet, MetricError> {
        let jet = self.raw(t);
        if !(jet.f > 0.0) {
            return Err(MetricError::NonPositiveWarp { t, value: jet.f });
        }
        Ok(jet)
    }
}

/// `dt² + f(t)² g_e`, optionally `+ dθ²`, with `g_e` the flat square torus of
/// area `area` and the circle of length `circle`.
#[derive(Clone, Debug)]
pub struct WarpedMetric {
    pub profile: WarpProfile,
    pub area: f64,
    pub circle: Option<f64>,
}

impl WarpedMetric {
    pub fn new(profile: WarpProfile, area: f64, circle: Option<f64>) -> Self {
        Self {
            profile,
            area,
            circle,
        }
    }

    pub fn chart(&self) -> Chart {
        let side = self.area.sqrt();
        let mut axes = vec![
            match self.profile.domain {
                TDomain::Interval { lo, hi } => Axis::interval("t", lo, hi),
                TDomain::Circle { period } => Axis::periodic("t", period),
            },
            Axis::periodic("x", side),
            Axis::periodic("y", side),
        ];
        if let Some(ell) = self.circle {
            axes.push(Axis::periodic("theta", ell));
        }
        Chart::new(axes).expect("warped chart is 3- or 4-dimensional")
    }

    pub fn metric_field(&self) -> Result<MetricField, MetricError> {
        MetricField::analytic(self.chart(), Arc::new(self.clone()))
    }

    /// Volume of the fiber over one `t` before the warp: area × circle length.
    pub fn fiber_measure(&self) -> f64 {
        self.area * self.circle.unwrap_or(1.0)
    }

    /// `∫ φ(t) f(t)² dt · area · ℓ` over `[lo, hi]`, Simpson in `t` (or the
    /// periodic rule when the interval is a full circle).
    pub fn integrate<F>(&self, density: F, lo: f64, hi: f64, nodes: usize, exec: Execution) -> Result<f64, MetricError>
    where
        F: Fn(f64) -> Result<f64, MetricError> + Sync + Send,
    {
        let rule = match self.profile.domain {
            TDomain::Circle { period } if ((hi - lo) - period).abs() <= 1e-12 * period => {
                periodic_rule(lo, hi, nodes)?
            }
            _ => simpson_rule(lo, hi, nodes)?,
        };
        let terms = try_map_indexed(exec, rule.nodes.len(), |i| {
            let t = rule.nodes[i];
            let jet = self.profile.jet(t)?;
            Ok(rule.weights[i] * jet.f * jet.f * density(t)?)
        })?;
        Ok(self.fiber_measure() * pairwise_sum(&terms))
    }
}

impl MetricFunction for WarpedMetric {
    fn dim(&self) -> usize {
        if self.circle.is_some() {
            4
        } else {
            3
        }
    }

    fn components(&self, x: &[f64]) -> DMatrix<f64> {
        let f = self.profile.raw(x[0]).f;
        let mut d = vec![1.0, f * f, f * f];
        if self.circle.is_some() {
            d.push(1.0);
        }
        DMatrix::from_diagonal(&DVector::from_vec(d))
    }

    fn first_derivatives(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.dim();
        let j = self.profile.raw(x[0]);
        let mut out = vec![DMatrix::zeros(n, n); n];
        out[0][(1, 1)] = 2.0 * j.f * j.df;
        out[0][(2, 2)] = 2.0 * j.f * j.df;
        Some(out)
    }

    fn second_derivatives(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.dim();
        let j = self.profile.raw(x[0]);
        let mut out = vec![DMatrix::zeros(n, n); n * n];
        let v = 2.0 * (j.df * j.df + j.f * j.d2f);
        out[0][(1, 1)] = v;
        out[0][(2, 2)] = v;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn error_at(step: f64, order: StencilOrder) -> (f64, f64) {
        let exact = WarpProfile::exp_warp(2.0, TDomain::Interval { lo: -5.0, hi: 5.0 });
        let fd = exact.with_finite_differences(step, order);
        let (a, b) = (exact.jet(0.3).unwrap(), fd.jet(0.3).unwrap());
        ((a.df - b.df).abs(), (a.d2f - b.d2f).abs())
    }

    #[test]
    fn finite_difference_warp_converges_at_nominal_order() {
        for (order, steps) in [
            (StencilOrder::Second, [0.1, 0.05, 0.025]),
            (StencilOrder::Fourth, [0.4, 0.2, 0.1]),
        ] {
            let e: Vec<(f64, f64)> = steps.iter().map(|&h| error_at(h, order)).collect();
            for w in e.windows(2) {
                let slope1 = (w[0].0 / w[1].0).log2();
                let slope2 = (w[0].1 / w[1].1).log2();
                assert!(slope1 >= 0.9 * order.nominal() as f64, "{slope1}");
                assert!(slope2 >= 0.9 * order.nominal() as f64, "{slope2}");
            }
        }
    }

    #[test]
    fn non_positive_warp_is_rejected() {
        let p = WarpProfile::fourier(0.5, vec![1.0], vec![0.0], 2.0 * PI);
        assert!(matches!(p.jet(PI), Err(MetricError::NonPositiveWarp { .. })));
    }

    #[test]
    fn warped_volume_matches_closed_form() {
        let w = WarpedMetric::new(
            WarpProfile::exp_warp(1.0, TDomain::Interval { lo: 0.0, hi: 10.0 }),
            1.0,
            None,
        );
        let v = w.integrate(|_| Ok(1.0), 0.0, 3.0, 10_001, Execution::Sequential).unwrap();
        let exact = (1.0 - (-6.0f64).exp()) / 2.0;
        assert!((v - exact).abs() / exact < 1e-8);
    }

    #[test]
    fn warped_metric_components() {
        let w = WarpedMetric::new(
            WarpProfile::exp_warp(2.0, TDomain::Interval { lo: -1.0, hi: 10.0 }),
            4.0,
            Some(3.0),
        );
        let m = w.metric_field().unwrap();
        let g = m.metric_at(&[0.0, 0.5, 1.9, 2.9]).unwrap();
        assert_eq!(g, DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 4.0, 1.0])));
        assert_eq!(w.fiber_measure(), 12.0);
    }
}
