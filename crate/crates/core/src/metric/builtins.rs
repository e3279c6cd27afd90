//! Named analytic metrics assembled from one-variable factors.
//!
//! A diagonal component `g_ii` is a product of factors, each a function of a
//! single coordinate, so exact first and second derivatives follow from the
//! product rule.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Axis, Chart, MetricField, MetricFunction};

/// A one-variable factor with its first two derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorKind {
    Constant { value: f64 },
    /// `c² e^{−2x/c}`, the squared warp of the scaled cusp.
    ExpWarp { c: f64 },
    /// `scale · e^{rate·x}`.
    Exp { scale: f64, rate: f64 },
    SinSquared {},
    /// `(mean + amplitude·sin(frequency·x + phase))²`.
    AffineSinSquared {
        mean: f64,
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
}

impl FactorKind {
    pub fn jet(&self, x: f64) -> (f64, f64, f64) {
        match *self {
            FactorKind::Constant { value } => (value, 0.0, 0.0),
            FactorKind::ExpWarp { c } => {
                let v = c * c * (-2.0 * x / c).exp();
                (v, -2.0 / c * v, 4.0 / (c * c) * v)
            }
            FactorKind::Exp { scale, rate } => {
                let v = scale * (rate * x).exp();
                (v, rate * v, rate * rate * v)
            }
            FactorKind::SinSquared {} => {
                let (s, c) = x.sin_cos();
                (s * s, 2.0 * s * c, 2.0 * (c * c - s * s))
            }
            FactorKind::AffineSinSquared {
                mean,
                amplitude,
                frequency,
                phase,
            } => {
                let (s, c) = (frequency * x + phase).sin_cos();
                let p = mean + amplitude * s;
                let dp = amplitude * frequency * c;
                let ddp = -amplitude * frequency * frequency * s;
                (p * p, 2.0 * p * dp, 2.0 * (dp * dp + p * ddp))
            }
        }
    }
}

/// Serialized as the [`FactorKind`] object plus an `axis` key.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "serde_json::Map<String, serde_json::Value>")]
pub struct Factor {
    pub axis: usize,
    #[serde(flatten)]
    pub kind: FactorKind,
}

impl TryFrom<serde_json::Map<String, serde_json::Value>> for Factor {
    type Error = String;

    fn try_from(mut map: serde_json::Map<String, serde_json::Value>) -> Result<Self, String> {
        let axis = map
            .remove("axis")
            .and_then(|v| v.as_u64())
            .ok_or("factor needs a non-negative integer `axis`")?;
        let kind = serde_json::from_value(serde_json::Value::Object(map)).map_err(|e| e.to_string())?;
        Ok(Self {
            axis: axis as usize,
            kind,
        })
    }
}

impl Factor {
    pub fn new(axis: usize, kind: FactorKind) -> Self {
        Self { axis, kind }
    }
}

/// Diagonal metric whose entries are products of one-variable factors.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalProductMetric {
    dim: usize,
    components: Vec<Vec<Factor>>,
}

impl DiagonalProductMetric {
    pub fn new(components: Vec<Vec<Factor>>) -> Self {
        Self {
            dim: components.len(),
            components,
        }
    }

    /// Per-axis jets `(P, P', P'')` of the separable product for entry `i`.
    fn axis_jets(&self, i: usize, x: &[f64]) -> Vec<(f64, f64, f64)> {
        let mut jets = vec![(1.0, 0.0, 0.0); self.dim];
        for factor in &self.components[i] {
            let (u, du, ddu) = jets[factor.axis];
            let (v, dv, ddv) = factor.kind.jet(x[factor.axis]);
            jets[factor.axis] = (u * v, du * v + u * dv, ddu * v + 2.0 * du * dv + u * ddv);
        }
        jets
    }

    fn product_except(jets: &[(f64, f64, f64)], skip: &[usize]) -> f64 {
        jets.iter()
            .enumerate()
            .filter(|(a, _)| !skip.contains(a))
            .map(|(_, j)| j.0)
            .product()
    }
}

impl MetricFunction for DiagonalProductMetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn components(&self, x: &[f64]) -> DMatrix<f64> {
        let diag: Vec<f64> = (0..self.dim)
            .map(|i| self.axis_jets(i, x).iter().map(|j| j.0).product())
            .collect();
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }

    fn first_derivatives(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.dim;
        let mut out = vec![DMatrix::zeros(n, n); n];
        for i in 0..n {
            let jets = self.axis_jets(i, x);
            for (k, d) in out.iter_mut().enumerate() {
                d[(i, i)] = jets[k].1 * Self::product_except(&jets, &[k]);
            }
        }
        Some(out)
    }

    fn second_derivatives(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.dim;
        let mut out = vec![DMatrix::zeros(n, n); n * n];
        for i in 0..n {
            let jets = self.axis_jets(i, x);
            for k in 0..n {
                for l in 0..n {
                    out[k * n + l][(i, i)] = if k == l {
                        jets[k].2 * Self::product_except(&jets, &[k])
                    } else {
                        jets[k].1 * jets[l].1 * Self::product_except(&jets, &[k, l])
                    };
                }
            }
        }
        Some(out)
    }
}

/// A constant symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantMetric {
    pub matrix: DMatrix<f64>,
}

impl MetricFunction for ConstantMetric {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn components(&self, _x: &[f64]) -> DMatrix<f64> {
        self.matrix.clone()
    }

    fn first_derivatives(&self, _x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.dim();
        Some(vec![DMatrix::zeros(n, n); n])
    }

    fn second_derivatives(&self, _x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.dim();
        Some(vec![DMatrix::zeros(n, n); n * n])
    }
}

fn diagonal(chart: Chart, components: Vec<Vec<Factor>>) -> MetricField {
    MetricField::analytic(chart, Arc::new(DiagonalProductMetric::new(components)))
        .expect("builtin chart and metric dimensions agree")
}

fn chart(axes: Vec<Axis>) -> Chart {
    Chart::new(axes).expect("builtin charts are valid")
}

/// The flat torus with equal periods.
pub fn flat_torus(dim: usize, period: f64) -> MetricField {
    let names = ["x1", "x2", "x3", "x4"];
    let c = chart(names[..dim].iter().map(|n| Axis::periodic(*n, period)).collect());
    MetricField::analytic(
        c,
        Arc::new(ConstantMetric {
            matrix: DMatrix::identity(dim, dim),
        }),
    )
    .expect("dimensions agree")
}

/// The unit round 4-sphere in polar coordinates `(r, θ₁, θ₂, ϕ)`, restricted
/// away from the coordinate singularities.
pub fn round_s4() -> MetricField {
    let eps = 0.05;
    let c = chart(vec![
        Axis::interval("r", eps, PI - eps),
        Axis::interval("theta1", eps, PI - eps),
        Axis::interval("theta2", eps, PI - eps),
        Axis::periodic("phi", 2.0 * PI),
    ]);
    let s = |axis| Factor::new(axis, FactorKind::SinSquared {});
    diagonal(c, vec![vec![], vec![s(0)], vec![s(0), s(1)], vec![s(0), s(1), s(2)]])
}

/// Unit hyperbolic 3-space in horospherical coordinates times a circle:
/// `dt² + e^{−2t}(dx² + dy²) + dθ²`.
pub fn hyperbolic3_x_circle(ell: f64) -> MetricField {
    let c = chart(vec![
        Axis::interval("t", -20.0, 20.0),
        Axis::periodic("x", 1.0),
        Axis::periodic("y", 1.0),
        Axis::periodic("theta", ell),
    ]);
    let e = |axis| Factor::new(axis, FactorKind::Exp { scale: 1.0, rate: -2.0 });
    diagonal(c, vec![vec![], vec![e(0)], vec![e(0)], vec![]])
}

/// Product of two unit hyperbolic planes, a Kähler metric:
/// `dt₁² + e^{−2t₁}dx₁² + dt₂² + e^{−2t₂}dx₂²`.
pub fn kahler_h2_x_h2() -> MetricField {
    let c = chart(vec![
        Axis::interval("t1", -20.0, 20.0),
        Axis::periodic("x1", 1.0),
        Axis::interval("t2", -20.0, 20.0),
        Axis::periodic("x2", 1.0),
    ]);
    let e = |axis| Factor::new(axis, FactorKind::Exp { scale: 1.0, rate: -2.0 });
    diagonal(c, vec![vec![], vec![e(0)], vec![], vec![e(2)]])
}

/// The cusp end of `c²g_H`: `dt² + c²e^{−2t/c} g_e` on a 3-dimensional chart,
/// `g_e` the flat square torus of the given area.
pub fn cusp(c: f64, area: f64) -> MetricField {
    let side = area.sqrt();
    let ch = chart(vec![
        Axis::interval("t", -10.0 * c, 100.0 * c),
        Axis::periodic("x", side),
        Axis::periodic("y", side),
    ]);
    let w = |axis| Factor::new(axis, FactorKind::ExpWarp { c });
    diagonal(ch, vec![vec![], vec![w(0)], vec![w(0)]])
}

/// `c²g_H + dθ²` on the cusp end, with an `S¹` factor of length `ell`.
pub fn cusp_x_circle(c: f64, area: f64, ell: f64) -> MetricField {
    let side = area.sqrt();
    let ch = chart(vec![
        Axis::interval("t", -10.0 * c, 100.0 * c),
        Axis::periodic("x", side),
        Axis::periodic("y", side),
        Axis::periodic("theta", ell),
    ]);
    let w = |axis| Factor::new(axis, FactorKind::ExpWarp { c });
    diagonal(ch, vec![vec![], vec![w(0)], vec![w(0)], vec![]])
}

/// A warped metric on `T⁴` (period 2π) that is not conformally flat.
pub fn warped_t4() -> MetricField {
    let ch = chart(
        ["x1", "x2", "x3", "x4"]
            .iter()
            .map(|n| Axis::periodic(*n, 2.0 * PI))
            .collect(),
    );
    let a = |axis, mean, amplitude, phase| {
        Factor::new(
            axis,
            FactorKind::AffineSinSquared {
                mean,
                amplitude,
                frequency: 1.0,
                phase,
            },
        )
    };
    diagonal(
        ch,
        vec![
            vec![],
            vec![a(0, 2.0, 1.0, 0.0)],
            vec![a(0, 2.0, 1.0, 0.5 * PI)],
            vec![a(1, 1.5, 0.5, 0.0)],
        ],
    )
}

/// Looks up a builtin metric by name, as used by configuration documents.
pub fn by_name(name: &str, c: f64, area: f64, ell: f64) -> Option<MetricField> {
    Some(match name {
        "flat_t4" => flat_torus(4, 1.0),
        "round_s4" => round_s4(),
        "h3_x_s1" => hyperbolic3_x_circle(ell),
        "kahler_h2_x_h2" => kahler_h2_x_h2(),
        "cusp" => cusp(c, area),
        "cusp_x_s1" => cusp_x_circle(c, area, ell),
        "warped_t4" => warped_t4(),
        _ => return None,
    })
}

pub const BUILTIN_NAMES: &[&str] = &[
    "flat_t4",
    "round_s4",
    "h3_x_s1",
    "kahler_h2_x_h2",
    "cusp",
    "cusp_x_s1",
    "warped_t4",
];
