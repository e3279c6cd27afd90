//! First and second coordinate derivatives of metric components.
//!
//! Analytic callbacks win when present. Otherwise central differences of
//! order 2 or 4 are taken directly on `g` (mixed second derivatives as tensor
//! products of first-derivative stencils), optionally Richardson-extrapolated.

use nalgebra::DMatrix;

use super::{check_spd, AxisKind, MetricError, MetricField, Representation, SampledMetric};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StencilOrder {
    #[default]
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn nominal(self) -> i32 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }

    /// Weights `w_o` of `Σ_o w_o (g(o) − g(−o)) / h` over positive offsets.
    fn first(self) -> &'static [(isize, f64)] {
        match self {
            StencilOrder::Second => &[(1, 0.5)],
            StencilOrder::Fourth => &[(1, 8.0 / 12.0), (2, -1.0 / 12.0)],
        }
    }

    /// Weights `w_o` of `Σ_o w_o (g(o) − 2g(0) + g(−o)) / h²`.
    fn second(self) -> &'static [(isize, f64)] {
        match self {
            StencilOrder::Second => &[(1, 1.0)],
            StencilOrder::Fourth => &[(1, 16.0 / 12.0), (2, -1.0 / 12.0)],
        }
    }

    fn reach(self) -> isize {
        match self {
            StencilOrder::Second => 1,
            StencilOrder::Fourth => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeOptions {
    pub order: StencilOrder,
    /// Step for analytic metrics; sampled metrics always use the grid spacing.
    pub step: f64,
    pub richardson: bool,
    /// Use analytic derivative callbacks when the metric provides them.
    pub prefer_analytic: bool,
}

impl Default for DerivativeOptions {
    fn default() -> Self {
        Self {
            order: StencilOrder::Second,
            step: 1e-3,
            richardson: false,
            prefer_analytic: true,
        }
    }
}

impl DerivativeOptions {
    /// Order-4 stencils at `h = 1e-3`.
    pub fn fourth_order() -> Self {
        Self {
            order: StencilOrder::Fourth,
            ..Self::default()
        }
    }

    pub fn finite_difference(order: StencilOrder, step: f64) -> Self {
        Self {
            order,
            step,
            richardson: false,
            prefer_analytic: false,
        }
    }
}

/// Metric components with first and second derivatives at one point.
///
/// `dg[k]` is `∂_k g`; `ddg[k * dim + l]` is `∂_k ∂_l g`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricJet {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
    pub ddg: Vec<DMatrix<f64>>,
}

impl MetricJet {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn second(&self, k: usize, l: usize) -> &DMatrix<f64> {
        &self.ddg[k * self.dim() + l]
    }
}

pub fn metric_derivatives(
    m: &MetricField,
    x: &[f64],
    opts: &DerivativeOptions,
) -> Result<MetricJet, MetricError> {
    let x = m.chart().normalize(x)?;
    let jet = match m.representation() {
        Representation::Analytic(f) => {
            let analytic_first = if opts.prefer_analytic {
                f.first_derivatives(&x)
            } else {
                None
            };
            let analytic_second = if opts.prefer_analytic {
                f.second_derivatives(&x)
            } else {
                None
            };
            match (analytic_first, analytic_second) {
                (Some(dg), Some(ddg)) => MetricJet {
                    g: f.components(&x),
                    dg,
                    ddg,
                },
                (first, _) => {
                    let mut jet = analytic_fd(m, &x, opts)?;
                    if let Some(dg) = first {
                        jet.dg = dg;
                    }
                    jet
                }
            }
        }
        Representation::Sampled(s) => sampled_fd(m, s, &x, opts)?,
    };
    check_spd(&jet.g, &x)?;
    Ok(jet)
}

fn analytic_fd(m: &MetricField, x: &[f64], opts: &DerivativeOptions) -> Result<MetricJet, MetricError> {
    let Representation::Analytic(f) = m.representation() else {
        unreachable!("analytic_fd called on a sampled metric")
    };
    let dim = m.dim();
    let reach = opts.order.reach() as f64;
    for (axis, spec) in m.chart().axes().iter().enumerate() {
        if let AxisKind::Interval { lo, hi } = spec.kind {
            if x[axis] - reach * opts.step < lo || x[axis] + reach * opts.step > hi {
                return Err(MetricError::StencilOutOfDomain {
                    axis: spec.name.clone(),
                    value: x[axis],
                });
            }
        }
    }
    let at_step = |h: f64| {
        let steps = vec![h; dim];
        stencil_jet(dim, opts.order, &steps, |offsets: &[isize]| {
            let p: Vec<f64> = x
                .iter()
                .zip(offsets)
                .map(|(&xi, &o)| xi + o as f64 * h)
                .collect();
            Ok(f.components(&p))
        })
    };
    if opts.richardson {
        let coarse = at_step(opts.step)?;
        let fine = at_step(0.5 * opts.step)?;
        Ok(richardson(coarse, fine, opts.order))
    } else {
        at_step(opts.step)
    }
}

fn sampled_fd(
    m: &MetricField,
    s: &SampledMetric,
    x: &[f64],
    opts: &DerivativeOptions,
) -> Result<MetricJet, MetricError> {
    let dim = m.dim();
    let mut base = vec![0isize; dim];
    for axis in 0..dim {
        let r = s.fractional_index(axis, x[axis]);
        let n = s.shape[axis] as f64;
        let r = if m.chart().axes()[axis].is_periodic() {
            r.rem_euclid(n)
        } else {
            r
        };
        let rounded = r.round();
        if (r - rounded).abs() > 1e-8 {
            return Err(MetricError::NotGridAligned { point: x.to_vec() });
        }
        base[axis] = rounded as isize % s.shape[axis] as isize;
    }
    let at_stride = |stride: isize| {
        let steps: Vec<f64> = s.spacing.iter().map(|h| h * stride as f64).collect();
        stencil_jet(dim, opts.order, &steps, |offsets: &[isize]| {
            let mut index = vec![0usize; dim];
            for axis in 0..dim {
                let n = s.shape[axis] as isize;
                let i = base[axis] + offsets[axis] * stride;
                index[axis] = if m.chart().axes()[axis].is_periodic() {
                    i.rem_euclid(n) as usize
                } else if (0..n).contains(&i) {
                    i as usize
                } else {
                    return Err(MetricError::StencilOutOfDomain {
                        axis: m.chart().axes()[axis].name.clone(),
                        value: x[axis],
                    });
                };
            }
            Ok(s.at_index(&index).clone())
        })
    };
    if opts.richardson {
        let coarse = at_stride(2)?;
        let fine = at_stride(1)?;
        Ok(richardson(coarse, fine, opts.order))
    } else {
        at_stride(1)
    }
}

/// Central-difference jet from evaluations at integer offsets of `steps`.
fn stencil_jet<E>(dim: usize, order: StencilOrder, steps: &[f64], eval: E) -> Result<MetricJet, MetricError>
where
    E: Fn(&[isize]) -> Result<DMatrix<f64>, MetricError>,
{
    let mut offsets = vec![0isize; dim];
    let g = eval(&offsets)?;
    // Differences are formed before weighting so a constant metric gives
    // exactly zero derivatives.
    let mut dg = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut acc = DMatrix::zeros(dim, dim);
        for &(o, w) in order.first() {
            offsets[k] = o;
            let plus = eval(&offsets)?;
            offsets[k] = -o;
            acc += (plus - eval(&offsets)?) * w;
        }
        offsets[k] = 0;
        dg.push(acc / steps[k]);
    }
    let mut ddg = vec![DMatrix::zeros(dim, dim); dim * dim];
    for k in 0..dim {
        let mut acc = DMatrix::zeros(dim, dim);
        for &(o, w) in order.second() {
            offsets[k] = o;
            let plus = eval(&offsets)? - &g;
            offsets[k] = -o;
            acc += (plus + (eval(&offsets)? - &g)) * w;
        }
        offsets[k] = 0;
        ddg[k * dim + k] = acc / (steps[k] * steps[k]);
        for l in (k + 1)..dim {
            let mut acc = DMatrix::zeros(dim, dim);
            for &(ok, wk) in order.first() {
                for &(ol, wl) in order.first() {
                    let mut at = |a: isize, b: isize| {
                        offsets[k] = a;
                        offsets[l] = b;
                        eval(&offsets)
                    };
                    let cross = (at(ok, ol)? - at(ok, -ol)?) - (at(-ok, ol)? - at(-ok, -ol)?);
                    acc += cross * (wk * wl);
                }
            }
            offsets[k] = 0;
            offsets[l] = 0;
            let mixed = acc / (steps[k] * steps[l]);
            ddg[l * dim + k] = mixed.clone();
            ddg[k * dim + l] = mixed;
        }
    }
    Ok(MetricJet { g, dg, ddg })
}

fn richardson(coarse: MetricJet, fine: MetricJet, order: StencilOrder) -> MetricJet {
    let factor = 2f64.powi(order.nominal());
    let combine = |c: &DMatrix<f64>, f: &DMatrix<f64>| (f * factor - c) / (factor - 1.0);
    MetricJet {
        g: fine.g.clone(),
        dg: coarse.dg.iter().zip(&fine.dg).map(|(c, f)| combine(c, f)).collect(),
        ddg: coarse.ddg.iter().zip(&fine.ddg).map(|(c, f)| combine(c, f)).collect(),
    }
}
