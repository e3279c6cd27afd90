//! Charts, metric fields and the pointwise machinery every curvature
//! computation is built on.
//!
//! A [`MetricField`] is either analytic (a [`MetricFunction`] that may also
//! supply exact first and second derivatives) or sampled on a regular grid.
//! Derivatives fall back to central finite differences when no analytic
//! callback exists; see [`derivatives`].

pub mod builtins;
pub mod derivatives;
pub mod frame;
pub mod integrate;
pub mod scalar;
pub mod warp;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use thiserror::Error;

pub use derivatives::{metric_derivatives, DerivativeOptions, MetricJet, StencilOrder};
pub use frame::orthonormal_frame;
pub use integrate::{integrate_density, pairwise_sum, GridAxis, GridSpec};
pub use scalar::ScalarField;
pub use warp::{WarpJet, WarpProfile, WarpedMetric};

/// Relative tolerance used when checking symmetry of metric samples.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("chart dimension must be 3 or 4, got {0}")]
    UnsupportedDimension(usize),
    #[error("axis `{axis}` is invalid: {reason}")]
    InvalidAxis { axis: String, reason: String },
    #[error("point has {found} coordinates, chart expects {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("coordinate {value} on axis `{axis}` lies outside [{lo}, {hi}]")]
    OutOfDomain {
        axis: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("finite-difference stencil leaves the domain on axis `{axis}` at {value}")]
    StencilOutOfDomain { axis: String, value: f64 },
    #[error("metric is not symmetric at {point:?}")]
    NotSymmetric { point: Vec<f64> },
    #[error("metric is not positive definite at {point:?} (smallest eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { point: Vec<f64>, min_eigenvalue: f64 },
    #[error("point {point:?} is not on a node of the sampled grid")]
    NotGridAligned { point: Vec<f64> },
    #[error("sampled metric grid is malformed: {0}")]
    MalformedGrid(String),
    #[error("warp profile is not positive at t = {t} (f = {value})")]
    NonPositiveWarp { t: f64, value: f64 },
    #[error("integration region is invalid: {0}")]
    InvalidRegion(String),
    #[error("curvature requires a 4-dimensional metric, got dimension {0}")]
    NotFourDimensional(usize),
}

/// How a single chart coordinate behaves.
#[derive(Clone, Debug, PartialEq)]
pub enum AxisKind {
    Periodic { period: f64 },
    Interval { lo: f64, hi: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub kind: AxisKind,
}

impl Axis {
    pub fn periodic(name: impl Into<String>, period: f64) -> Self {
        Self {
            name: name.into(),
            kind: AxisKind::Periodic { period },
        }
    }

    pub fn interval(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            kind: AxisKind::Interval { lo, hi },
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, AxisKind::Periodic { .. })
    }
}

/// A product coordinate chart with periodic and interval axes.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    axes: Vec<Axis>,
}

impl Chart {
    pub fn new(axes: Vec<Axis>) -> Result<Self, MetricError> {
        if !(3..=4).contains(&axes.len()) {
            return Err(MetricError::UnsupportedDimension(axes.len()));
        }
        for axis in &axes {
            let bad = |reason: &str| MetricError::InvalidAxis {
                axis: axis.name.clone(),
                reason: reason.to_string(),
            };
            match axis.kind {
                AxisKind::Periodic { period } => {
                    if !(period.is_finite() && period > 0.0) {
                        return Err(bad("period must be positive and finite"));
                    }
                }
                AxisKind::Interval { lo, hi } => {
                    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                        return Err(bad("interval must be finite and nonempty"));
                    }
                }
            }
        }
        Ok(Self { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis_names(&self) -> Vec<&str> {
        self.axes.iter().map(|a| a.name.as_str()).collect()
    }

    /// Wraps periodic coordinates into `[0, period)` and rejects points
    /// outside interval axes.
    pub fn normalize(&self, x: &[f64]) -> Result<Vec<f64>, MetricError> {
        if x.len() != self.dim() {
            return Err(MetricError::PointDimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        self.axes
            .iter()
            .zip(x)
            .map(|(axis, &v)| match axis.kind {
                AxisKind::Periodic { period } => Ok(v.rem_euclid(period)),
                AxisKind::Interval { lo, hi } => {
                    if v < lo || v > hi || !v.is_finite() {
                        Err(MetricError::OutOfDomain {
                            axis: axis.name.clone(),
                            value: v,
                            lo,
                            hi,
                        })
                    } else {
                        Ok(v)
                    }
                }
            })
            .collect()
    }
}

/// A metric given by component functions, optionally with exact derivatives.
///
/// `first` returns `∂_k g` for each axis `k`; `second` returns `∂_k ∂_l g`
/// flattened as `k * dim + l`.
pub trait MetricFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn components(&self, x: &[f64]) -> DMatrix<f64>;

    fn first_derivatives(&self, _x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        None
    }

    fn second_derivatives(&self, _x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        None
    }
}

/// Adapter turning a plain closure into a derivative-free [`MetricFunction`].
pub struct FnMetric<F> {
    dim: usize,
    f: F,
}

impl<F> FnMetric<F>
where
    F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> MetricFunction for FnMetric<F>
where
    F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn components(&self, x: &[f64]) -> DMatrix<f64> {
        (self.f)(x)
    }
}

/// Symmetric matrices on a regular grid, row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMetric {
    pub shape: Vec<usize>,
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    values: Vec<DMatrix<f64>>,
}

impl SampledMetric {
    pub fn new(
        shape: Vec<usize>,
        origin: Vec<f64>,
        spacing: Vec<f64>,
        values: Vec<DMatrix<f64>>,
    ) -> Result<Self, MetricError> {
        let dim = shape.len();
        if origin.len() != dim || spacing.len() != dim {
            return Err(MetricError::MalformedGrid(
                "shape, origin and spacing must have equal length".into(),
            ));
        }
        if spacing.iter().any(|&h| !(h > 0.0)) || shape.contains(&0) {
            return Err(MetricError::MalformedGrid(
                "spacings must be positive and shapes nonzero".into(),
            ));
        }
        let count: usize = shape.iter().product();
        if values.len() != count {
            return Err(MetricError::MalformedGrid(format!(
                "expected {count} samples, got {}",
                values.len()
            )));
        }
        for (i, g) in values.iter().enumerate() {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(MetricError::MalformedGrid(format!(
                    "sample {i} is not {dim}x{dim}"
                )));
            }
        }
        Ok(Self {
            shape,
            origin,
            spacing,
            values,
        })
    }

    /// Samples an analytic metric on a regular grid.
    pub fn from_function(
        f: &dyn MetricFunction,
        shape: Vec<usize>,
        origin: Vec<f64>,
        spacing: Vec<f64>,
    ) -> Result<Self, MetricError> {
        let count: usize = shape.iter().product();
        let mut values = Vec::with_capacity(count);
        let mut index = vec![0usize; shape.len()];
        for flat in 0..count {
            unflatten(flat, &shape, &mut index);
            let x: Vec<f64> = index
                .iter()
                .zip(origin.iter().zip(&spacing))
                .map(|(&i, (&o, &h))| o + i as f64 * h)
                .collect();
            values.push(f.components(&x));
        }
        Self::new(shape, origin, spacing, values)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn at_index(&self, index: &[usize]) -> &DMatrix<f64> {
        &self.values[flatten(index, &self.shape)]
    }

    /// Grid node position of `x` along `axis` as a real index.
    fn fractional_index(&self, axis: usize, x: f64) -> f64 {
        (x - self.origin[axis]) / self.spacing[axis]
    }
}

pub(crate) fn flatten(index: &[usize], shape: &[usize]) -> usize {
    index
        .iter()
        .zip(shape)
        .fold(0, |acc, (&i, &n)| acc * n + i)
}

pub(crate) fn unflatten(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for axis in (0..shape.len()).rev() {
        out[axis] = flat % shape[axis];
        flat /= shape[axis];
    }
}

#[derive(Clone)]
pub enum Representation {
    Analytic(Arc<dyn MetricFunction>),
    Sampled(Arc<SampledMetric>),
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Analytic(m) => write!(f, "Analytic(dim = {})", m.dim()),
            Representation::Sampled(s) => write!(f, "Sampled(shape = {:?})", s.shape),
        }
    }
}

/// A Riemannian metric on a chart.
#[derive(Clone, Debug)]
pub struct MetricField {
    chart: Chart,
    representation: Representation,
}

impl MetricField {
    pub fn analytic(chart: Chart, f: Arc<dyn MetricFunction>) -> Result<Self, MetricError> {
        if f.dim() != chart.dim() {
            return Err(MetricError::PointDimension {
                expected: chart.dim(),
                found: f.dim(),
            });
        }
        Ok(Self {
            chart,
            representation: Representation::Analytic(f),
        })
    }

    pub fn sampled(chart: Chart, samples: SampledMetric) -> Result<Self, MetricError> {
        if samples.dim() != chart.dim() {
            return Err(MetricError::PointDimension {
                expected: chart.dim(),
                found: samples.dim(),
            });
        }
        for (axis, spec) in chart.axes().iter().enumerate() {
            if let AxisKind::Periodic { period } = spec.kind {
                let covered = samples.shape[axis] as f64 * samples.spacing[axis];
                if (covered - period).abs() > 1e-9 * period {
                    return Err(MetricError::MalformedGrid(format!(
                        "periodic axis `{}` has period {period} but grid covers {covered}",
                        spec.name
                    )));
                }
            }
        }
        Ok(Self {
            chart,
            representation: Representation::Sampled(Arc::new(samples)),
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    /// Metric components at `x`, checked for symmetry and positive definiteness.
    pub fn metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>, MetricError> {
        let x = self.chart.normalize(x)?;
        let g = match &self.representation {
            Representation::Analytic(f) => f.components(&x),
            Representation::Sampled(s) => self.interpolate(s, &x)?,
        };
        check_spd(&g, &x)?;
        Ok(g)
    }

    /// Componentwise multilinear interpolation between grid nodes.
    fn interpolate(&self, s: &SampledMetric, x: &[f64]) -> Result<DMatrix<f64>, MetricError> {
        let dim = self.dim();
        let mut base = vec![0usize; dim];
        let mut frac = vec![0.0; dim];
        for axis in 0..dim {
            let n = s.shape[axis];
            let r = s.fractional_index(axis, x[axis]);
            let periodic = self.chart.axes()[axis].is_periodic();
            let (i0, t) = if periodic {
                let r = r.rem_euclid(n as f64);
                let i0 = (r.floor() as usize).min(n - 1);
                (i0, r - i0 as f64)
            } else {
                if r < -1e-9 || r > (n - 1) as f64 + 1e-9 {
                    let spec = &self.chart.axes()[axis];
                    let (lo, hi) = (s.origin[axis], s.origin[axis] + (n - 1) as f64 * s.spacing[axis]);
                    return Err(MetricError::OutOfDomain {
                        axis: spec.name.clone(),
                        value: x[axis],
                        lo,
                        hi,
                    });
                }
                let r = r.clamp(0.0, (n - 1) as f64);
                let i0 = (r.floor() as usize).min(n.saturating_sub(2));
                (i0, r - i0 as f64)
            };
            base[axis] = i0;
            frac[axis] = t;
        }
        let mut g = DMatrix::zeros(dim, dim);
        let mut index = vec![0usize; dim];
        for corner in 0..(1usize << dim) {
            let mut weight = 1.0;
            for axis in 0..dim {
                let up = (corner >> axis) & 1 == 1;
                let n = s.shape[axis];
                let mut i = base[axis] + usize::from(up);
                if i >= n {
                    i = if self.chart.axes()[axis].is_periodic() { i % n } else { n - 1 };
                }
                index[axis] = i;
                weight *= if up { frac[axis] } else { 1.0 - frac[axis] };
            }
            if weight != 0.0 {
                g += s.at_index(&index) * weight;
            }
        }
        Ok(g)
    }
}

/// Symmetry and positive-definiteness check used on every evaluated metric.
pub(crate) fn check_spd(g: &DMatrix<f64>, x: &[f64]) -> Result<(), MetricError> {
    let scale = g.amax().max(f64::MIN_POSITIVE);
    let n = g.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (g[(i, j)] - g[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(MetricError::NotSymmetric { point: x.to_vec() });
            }
        }
    }
    if g.clone().cholesky().is_none() {
        let min_eigenvalue = g.clone().symmetric_eigenvalues().min();
        return Err(MetricError::NotPositiveDefinite {
            point: x.to_vec(),
            min_eigenvalue,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_chart(dim: usize) -> Chart {
        Chart::new((0..dim).map(|i| Axis::periodic(format!("x{i}"), 1.0)).collect()).unwrap()
    }

    #[test]
    fn chart_rejects_bad_axes() {
        assert!(matches!(
            Chart::new(vec![Axis::interval("t", 0.0, 1.0); 2]),
            Err(MetricError::UnsupportedDimension(2))
        ));
        let bad = Chart::new(vec![
            Axis::interval("t", 1.0, 1.0),
            Axis::periodic("x", 1.0),
            Axis::periodic("y", 1.0),
        ]);
        assert!(matches!(bad, Err(MetricError::InvalidAxis { .. })));
        let bad = Chart::new(vec![
            Axis::periodic("t", 0.0),
            Axis::periodic("x", 1.0),
            Axis::periodic("y", 1.0),
        ]);
        assert!(matches!(bad, Err(MetricError::InvalidAxis { .. })));
    }

    #[test]
    fn normalize_wraps_periodic_and_rejects_interval() {
        let chart = Chart::new(vec![
            Axis::interval("t", 0.0, 2.0),
            Axis::periodic("x", 1.0),
            Axis::periodic("y", 1.0),
        ])
        .unwrap();
        let x = chart.normalize(&[1.0, 2.25, -0.25]).unwrap();
        assert_eq!(x, vec![1.0, 0.25, 0.75]);
        assert!(matches!(
            chart.normalize(&[2.5, 0.0, 0.0]),
            Err(MetricError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn non_pd_metric_is_reported() {
        let f = FnMetric::new(3, |_x: &[f64]| DMatrix::from_diagonal_element(3, 3, -1.0));
        let m = MetricField::analytic(flat_chart(3), Arc::new(f)).unwrap();
        assert!(matches!(
            m.metric_at(&[0.0, 0.0, 0.0]),
            Err(MetricError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn sampled_interpolation_is_multilinear() {
        // g_11 = 1 + x0 on a periodic 3-torus, linear between nodes.
        let f = FnMetric::new(3, |x: &[f64]| {
            let mut g = DMatrix::identity(3, 3);
            g[(0, 0)] = 2.0 + (2.0 * std::f64::consts::PI * x[0]).sin();
            g
        });
        let s = SampledMetric::from_function(&f, vec![8, 2, 2], vec![0.0; 3], vec![0.125, 0.5, 0.5])
            .unwrap();
        let m = MetricField::sampled(flat_chart(3), s).unwrap();
        let g0 = m.metric_at(&[0.125, 0.0, 0.0]).unwrap()[(0, 0)];
        let g1 = m.metric_at(&[0.25, 0.0, 0.0]).unwrap()[(0, 0)];
        let mid = m.metric_at(&[0.1875, 0.0, 0.0]).unwrap()[(0, 0)];
        assert!((mid - 0.5 * (g0 + g1)).abs() < 1e-14);
        // wrap-around between the last node and the first
        let last = m.metric_at(&[0.875, 0.0, 0.0]).unwrap()[(0, 0)];
        let first = m.metric_at(&[0.0, 0.0, 0.0]).unwrap()[(0, 0)];
        let wrap = m.metric_at(&[0.9375, 0.0, 0.0]).unwrap()[(0, 0)];
        assert!((wrap - 0.5 * (last + first)).abs() < 1e-14);
    }

    #[test]
    fn sampled_grid_must_cover_period() {
        let f = FnMetric::new(3, |_x: &[f64]| DMatrix::identity(3, 3));
        let s = SampledMetric::from_function(&f, vec![4, 4, 4], vec![0.0; 3], vec![0.2, 0.25, 0.25])
            .unwrap();
        assert!(matches!(
            MetricField::sampled(flat_chart(3), s),
            Err(MetricError::MalformedGrid(_))
        ));
    }
}
