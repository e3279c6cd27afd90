//! Configuration documents: metric definitions and run settings.
//!
//! Every struct rejects unknown keys. A metric document looks like
//!
//! ```json
//! {"chart": {"axes": [{"name": "x1", "periodic": 6.283185307179586}, ...]},
//!  "metric": {"kind": "analytic", "builtin": "warped_t4"}}
//! ```
//!
//! Analytic metrics come from a named builtin, a constant matrix, or a
//! diagonal of products of one-variable factors. Sampled metrics sample an
//! analytic source on a regular grid over the chart. Warped metrics are
//! `dt² + f(t)²g_e + dθ²` for a named profile.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::CurvatureOptions;
use crate::gluing::{BumpFunction, GeometryConstants, GluePosition, GluedFamily, GluingError};
use crate::metric::builtins::{self, ConstantMetric, DiagonalProductMetric, Factor};
use crate::metric::warp::{TDomain, WarpProfile, WarpedMetric};
use crate::metric::{
    Axis, AxisKind, Chart, DerivativeOptions, GridAxis, GridSpec, MetricError, MetricField, MetricFunction, SampledMetric,
    StencilOrder,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    pub axes: Vec<AxisConfig>,
}

impl ChartConfig {
    pub fn build(&self) -> Result<Chart, ConfigError> {
        let axes = self
            .axes
            .iter()
            .map(|a| match (a.periodic, a.interval) {
                (Some(p), None) => Ok(Axis::periodic(a.name.clone(), p)),
                (None, Some([lo, hi])) => Ok(Axis::interval(a.name.clone(), lo, hi)),
                _ => Err(invalid(format!(
                    "axis {} needs exactly one of `periodic` or `interval`",
                    a.name
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Chart::new(axes)?)
    }
}

/// Parameters of the named builtins that take any.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BuiltinParams {
    pub c: f64,
    pub area: f64,
    pub ell: f64,
}

impl Default for BuiltinParams {
    fn default() -> Self {
        Self {
            c: 2.0,
            area: 1.0,
            ell: 1.0,
        }
    }
}

/// Component source shared by analytic and sampled metrics: a builtin, a
/// constant symmetric matrix (row by row), or `g_ii` as products of factors.
/// Exactly one must be set.
#[derive(Default)]
struct ComponentSource {
    builtin: Option<String>,
    params: Option<BuiltinParams>,
    constant: Option<Vec<Vec<f64>>>,
    diagonal: Option<Vec<Vec<Factor>>>,
}

enum Source {
    Builtin(MetricField),
    Function(Arc<dyn MetricFunction>),
}

impl ComponentSource {
    fn resolve(&self) -> Result<Source, ConfigError> {
        match (&self.builtin, &self.constant, &self.diagonal) {
            (Some(name), None, None) => {
                let p = self.params.unwrap_or_default();
                builtins::by_name(name, p.c, p.area, p.ell)
                    .map(Source::Builtin)
                    .ok_or_else(|| {
                        invalid(format!(
                            "unknown builtin `{name}`; expected one of {}",
                            builtins::BUILTIN_NAMES.join(", ")
                        ))
                    })
            }
            (None, Some(rows), None) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(invalid("constant matrix must be square"));
                }
                let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
                if (0..n).any(|i| (0..i).any(|j| matrix[(i, j)] != matrix[(j, i)])) {
                    return Err(invalid("constant matrix must be symmetric"));
                }
                Ok(Source::Function(Arc::new(ConstantMetric { matrix })))
            }
            (None, None, Some(components)) => {
                let n = components.len();
                if components.iter().flatten().any(|f| f.axis >= n) {
                    return Err(invalid("diagonal factor refers to a missing axis"));
                }
                Ok(Source::Function(Arc::new(DiagonalProductMetric::new(components.clone()))))
            }
            _ => Err(invalid(
                "metric needs exactly one of `builtin`, `constant` or `diagonal`",
            )),
        }
    }
}

/// Named warp profiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    /// `c·e^{−t/c}` on `[lo, hi]`.
    ExpWarp { c: f64, lo: f64, hi: f64 },
    /// Truncated Fourier series on a circle.
    Fourier {
        mean: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
        period: f64,
    },
    /// The glued profile `f_c` with a flat collar of length `pad`.
    Glued {
        c: f64,
        #[serde(default)]
        position: GluePosition,
        #[serde(default)]
        bump: BumpFunction,
        #[serde(default = "one")]
        pad: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricKind {
    Analytic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        builtin: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        params: Option<BuiltinParams>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constant: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        diagonal: Option<Vec<Vec<Factor>>>,
    },
    Sampled {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        builtin: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        params: Option<BuiltinParams>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constant: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        diagonal: Option<Vec<Vec<Factor>>>,
        /// Nodes per axis. Periodic axes are covered without repeating the
        /// endpoint; interval axes include both ends.
        shape: Vec<usize>,
    },
    Warped {
        profile: ProfileConfig,
        #[serde(default = "one")]
        area: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ell: Option<f64>,
    },
}

impl MetricKind {
    fn source(&self) -> Option<ComponentSource> {
        match self {
            MetricKind::Analytic {
                builtin,
                params,
                constant,
                diagonal,
            }
            | MetricKind::Sampled {
                builtin,
                params,
                constant,
                diagonal,
                ..
            } => Some(ComponentSource {
                builtin: builtin.clone(),
                params: *params,
                constant: constant.clone(),
                diagonal: diagonal.clone(),
            }),
            MetricKind::Warped { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    /// Required unless the metric is a builtin or warped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartConfig>,
    pub metric: MetricKind,
}

impl MetricConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn builtin(name: &str) -> Self {
        Self {
            chart: None,
            metric: MetricKind::Analytic {
                builtin: Some(name.to_string()),
                params: None,
                constant: None,
                diagonal: None,
            },
        }
    }

    fn chart(&self) -> Result<Option<Chart>, ConfigError> {
        self.chart.as_ref().map(ChartConfig::build).transpose()
    }

    pub fn build(&self) -> Result<MetricField, ConfigError> {
        match &self.metric {
            MetricKind::Analytic { .. } => match (self.metric.source().expect("analytic").resolve()?, self.chart()?) {
                (Source::Builtin(m), None) => Ok(m),
                (Source::Builtin(m), Some(chart)) => Ok(match m.representation() {
                    crate::metric::Representation::Analytic(f) => MetricField::analytic(chart, f.clone())?,
                    _ => return Err(invalid("builtins are analytic")),
                }),
                (Source::Function(f), Some(chart)) => Ok(MetricField::analytic(chart, f)?),
                (Source::Function(_), None) => Err(invalid("a `chart` is required for this metric")),
            },
            MetricKind::Sampled { shape, .. } => {
                let (chart, f) = match (self.metric.source().expect("sampled").resolve()?, self.chart()?) {
                    (Source::Builtin(m), chart) => {
                        let f = match m.representation() {
                            crate::metric::Representation::Analytic(f) => f.clone(),
                            _ => return Err(invalid("builtins are analytic")),
                        };
                        (chart.unwrap_or_else(|| m.chart().clone()), f)
                    }
                    (Source::Function(f), Some(chart)) => (chart, f),
                    (Source::Function(_), None) => return Err(invalid("a `chart` is required for this metric")),
                };
                if shape.len() != chart.dim() {
                    return Err(invalid("sample shape must have one entry per chart axis"));
                }
                let (mut origin, mut spacing) = (Vec::new(), Vec::new());
                for (axis, &n) in chart.axes().iter().zip(shape) {
                    match axis.kind {
                        AxisKind::Periodic { period } => {
                            origin.push(0.0);
                            spacing.push(period / n.max(1) as f64);
                        }
                        AxisKind::Interval { lo, hi } => {
                            if n < 2 {
                                return Err(invalid("interval axes need at least 2 samples"));
                            }
                            origin.push(lo);
                            spacing.push((hi - lo) / (n - 1) as f64);
                        }
                    }
                }
                let samples = SampledMetric::from_function(f.as_ref(), shape.clone(), origin, spacing)?;
                Ok(MetricField::sampled(chart, samples)?)
            }
            MetricKind::Warped { profile, area, ell } => {
                if self.chart.is_some() {
                    return Err(invalid("warped metrics build their own chart"));
                }
                let profile = match profile {
                    ProfileConfig::ExpWarp { c, lo, hi } => {
                        WarpProfile::exp_warp(*c, TDomain::Interval { lo: *lo, hi: *hi })
                    }
                    ProfileConfig::Fourier {
                        mean,
                        cos,
                        sin,
                        period,
                    } => {
                        if cos.len() != sin.len() {
                            return Err(invalid("fourier `cos` and `sin` need equal length"));
                        }
                        WarpProfile::fourier(*mean, cos.clone(), sin.clone(), *period)
                    }
                    ProfileConfig::Glued { c, position, bump, pad } => GluedFamily::new(
                        *c,
                        GeometryConstants {
                            area: *area,
                            ell: ell.unwrap_or(1.0),
                            ..GeometryConstants::default()
                        },
                    )?
                    .with_position(*position)
                    .with_bump(*bump)
                    .warp_profile(*pad),
                };
                Ok(WarpedMetric::new(profile, *area, *ell).metric_field()?)
            }
        }
    }
}

/// Evaluation grid: the same node count on every axis, or explicit axes.
/// With `nodes`, periodic axes are covered fully and interval axes by the
/// midpoints of equal cells, so stencils stay inside the chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axes: Option<Vec<GridAxisConfig>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxisConfig {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nodes: Some(4),
            axes: None,
        }
    }
}

impl GridConfig {
    pub fn build(&self, chart: &Chart) -> Result<GridSpec, ConfigError> {
        match (&self.nodes, &self.axes) {
            (Some(n), None) => Ok(GridSpec::new(
                chart
                    .axes()
                    .iter()
                    .map(|a| match a.kind {
                        AxisKind::Periodic { period } => GridAxis::new(0.0, period, *n),
                        AxisKind::Interval { lo, hi } => {
                            let n = *n | 1;
                            let h = (hi - lo) / n as f64;
                            GridAxis::new(lo + 0.5 * h, hi - 0.5 * h, n)
                        }
                    })
                    .collect(),
            )),
            (None, Some(axes)) => Ok(GridSpec::new(
                axes.iter().map(|a| GridAxis::new(a.lo, a.hi, a.nodes)).collect(),
            )),
            _ => Err(invalid("grid needs exactly one of `nodes` or `axes`")),
        }
    }
}

/// Derivative source for curvature evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// Exact derivatives when the metric has them, order-2 otherwise.
    #[default]
    Analytic,
    Second,
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub mu: f64,
    pub stencil: Stencil,
    pub step: f64,
    pub richardson: bool,
    /// Simpson nodes for band integrals.
    pub band_nodes: usize,
    /// Cells of the one-dimensional profile model.
    pub cells: usize,
    pub pad: f64,
    /// Eigen residual tolerance.
    pub tol: f64,
    /// Random frames per isotropic search, before doubling.
    pub samples: usize,
    pub refinements: usize,
    pub max_doublings: usize,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu: 1.0 / 6.0,
            stencil: Stencil::Analytic,
            step: 1e-3,
            richardson: false,
            band_nodes: 401,
            cells: 256,
            pad: 1.0,
            tol: 1e-10,
            samples: 512,
            refinements: 64,
            max_doublings: 4,
            parallel: true,
        }
    }
}

impl SolverConfig {
    pub fn curvature_options(&self) -> CurvatureOptions {
        let derivatives = match self.stencil {
            Stencil::Analytic => DerivativeOptions {
                step: self.step,
                richardson: self.richardson,
                ..DerivativeOptions::default()
            },
            Stencil::Second | Stencil::Fourth => DerivativeOptions {
                richardson: self.richardson,
                ..DerivativeOptions::finite_difference(
                    if self.stencil == Stencil::Second {
                        StencilOrder::Second
                    } else {
                        StencilOrder::Fourth
                    },
                    self.step,
                )
            },
        };
        CurvatureOptions {
            derivatives,
            flip_sign: false,
        }
    }

    pub fn execution(&self) -> crate::Execution {
        if self.parallel {
            crate::Execution::Parallel
        } else {
            crate::Execution::Sequential
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(invalid("solver.mu must be positive"));
        }
        if !(self.step > 0.0) || !(self.tol > 0.0) || !(self.pad >= 0.0) {
            return Err(invalid("solver.step and solver.tol must be positive, solver.pad non-negative"));
        }
        if self.band_nodes < 3 || self.samples == 0 || self.refinements == 0 {
            return Err(invalid("solver.band_nodes ≥ 3 and a nonzero search budget are required"));
        }
        Ok(())
    }
}

/// The glued family and its sweep range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GlueConfig {
    pub vol0: f64,
    pub area: f64,
    pub ell: f64,
    pub s_cap: f64,
    pub w_cap: f64,
    pub cap_volume: f64,
    pub position: GluePosition,
    pub bump: BumpFunction,
    pub c_min: f64,
    pub c_max: f64,
    pub c_steps: usize,
    /// Parameter for single-family commands.
    pub c: f64,
}

impl Default for GlueConfig {
    fn default() -> Self {
        let k = GeometryConstants::default();
        Self {
            vol0: k.vol0,
            area: k.area,
            ell: k.ell,
            s_cap: k.s_cap,
            w_cap: k.w_cap,
            cap_volume: k.cap_volume,
            position: GluePosition::default(),
            bump: BumpFunction::default(),
            c_min: 2.0,
            c_max: 512.0,
            c_steps: 17,
            c: 16.0,
        }
    }
}

impl GlueConfig {
    pub fn constants(&self) -> GeometryConstants {
        GeometryConstants {
            vol0: self.vol0,
            area: self.area,
            ell: self.ell,
            s_cap: self.s_cap,
            w_cap: self.w_cap,
            cap_volume: self.cap_volume,
        }
    }

    pub fn family(&self, c: f64) -> Result<GluedFamily, ConfigError> {
        Ok(GluedFamily::new(c, self.constants())?
            .with_position(self.position)
            .with_bump(self.bump))
    }

    pub fn grid(&self) -> Result<Vec<f64>, ConfigError> {
        if !(self.c_min > 0.0 && self.c_max >= self.c_min) || self.c_steps == 0 {
            return Err(invalid("glue sweep needs 0 < c_min ≤ c_max and c_steps ≥ 1"));
        }
        Ok(crate::gluing::geometric_grid(self.c_min, self.c_max, self.c_steps))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Standard output when absent.
    pub path: Option<String>,
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CurvatureReport,
    IsotropicCheck,
    GlueSweep,
    ConformalSolve,
    Verify,
    Pipeline,
}

/// A complete run description. Every section is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub chart: Option<ChartConfig>,
    pub metric: Option<MetricKind>,
    pub grid: GridConfig,
    pub glue: GlueConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.solver.validate()?;
        cfg.glue.constants().validate()?;
        Ok(cfg)
    }

    /// The metric section, if any.
    pub fn metric_config(&self) -> Option<MetricConfig> {
        self.metric.as_ref().map(|metric| MetricConfig {
            chart: self.chart.clone(),
            metric: metric.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_document_builds() {
        let cfg = MetricConfig::from_json(r#"{"metric": {"kind": "analytic", "builtin": "round_s4"}}"#).unwrap();
        let m = cfg.build().unwrap();
        assert_eq!(m.dim(), 4);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(MetricConfig::from_json(r#"{"metric": {"kind": "analytic", "builtin": "round_s4", "typo": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"seeds": 3}"#).is_err());
        assert!(RunConfig::from_json(r#"{"solver": {"mu": 1.0, "nodes": 3}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"glue": {"vol0": 2.0, "volume": 3}}"#).is_err());
        assert!(MetricConfig::from_json(
            r#"{"metric": {"kind": "warped", "profile": {"type": "glued", "c": 4, "cc": 1}}}"#
        )
        .is_err());
        assert!(MetricConfig::from_json(
            r#"{"chart": {"axes": []}, "metric": {"kind": "analytic", "diagonal": [[{"axis": 0, "fn": "sin_squared", "x": 1}]]}}"#
        )
        .is_err());
    }

    #[test]
    fn unknown_builtin_lists_names() {
        let cfg = MetricConfig::from_json(r#"{"metric": {"kind": "analytic", "builtin": "klein"}}"#).unwrap();
        let err = cfg.build().unwrap_err().to_string();
        assert!(err.contains("round_s4"), "{err}");
    }

    #[test]
    fn diagonal_and_constant_need_a_chart() {
        let diag = r#"{"chart": {"axes": [
            {"name": "t", "interval": [-1, 1]}, {"name": "x", "periodic": 1},
            {"name": "y", "periodic": 1}, {"name": "z", "periodic": 1}]},
          "metric": {"kind": "analytic", "diagonal": [[], [{"axis": 0, "fn": "exp", "scale": 1, "rate": -2}],
            [{"axis": 0, "fn": "exp", "scale": 1, "rate": -2}], []]}}"#;
        let m = MetricConfig::from_json(diag).unwrap().build().unwrap();
        let g = m.metric_at(&[0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!((g[(1, 1)] - (-1.0f64).exp()).abs() < 1e-15);

        let no_chart = r#"{"metric": {"kind": "analytic", "constant": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}}"#;
        assert!(MetricConfig::from_json(no_chart).unwrap().build().is_err());
    }

    #[test]
    fn sampled_and_warped_documents_build() {
        let sampled = r#"{"metric": {"kind": "sampled", "builtin": "warped_t4", "shape": [8, 8, 4, 4]}}"#;
        let m = MetricConfig::from_json(sampled).unwrap().build().unwrap();
        assert!(matches!(m.representation(), crate::metric::Representation::Sampled(_)));

        let warped = r#"{"metric": {"kind": "warped", "profile": {"type": "glued", "c": 4.0}, "ell": 1.0}}"#;
        let m = MetricConfig::from_json(warped).unwrap().build().unwrap();
        assert_eq!(m.dim(), 4);

        let fourier = r#"{"metric": {"kind": "warped", "profile": {"type": "fourier", "mean": 2, "cos": [0.1], "sin": [0.2], "period": 1}}}"#;
        assert_eq!(MetricConfig::from_json(fourier).unwrap().build().unwrap().dim(), 3);
    }

    #[test]
    fn run_config_round_trips() {
        let text = r#"{"command": "glue-sweep", "metric": {"kind": "analytic", "builtin": "flat_t4"},
            "glue": {"vol0": 2.0, "c_min": 4, "c_max": 64, "c_steps": 5}, "solver": {"mu": 1.0}, "seed": 7}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.command, Some(Command::GlueSweep));
        assert_eq!(cfg.glue.constants().vol0, 2.0);
        assert_eq!(cfg.glue.grid().unwrap().len(), 5);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn invalid_solver_values_fail() {
        assert!(RunConfig::from_json(r#"{"solver": {"mu": -1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"glue": {"area": 0}}"#).is_err());
    }
}
