//! Quadrature of scalar densities against the Riemannian volume form.
//!
//! Interval axes use composite Simpson; full periodic axes use the periodic
//! trapezoid rule. Node contributions are computed in index order and summed
//! pairwise, so results do not depend on how evaluation is partitioned.

use crate::exec::{try_map_indexed, Execution};

use super::{unflatten, AxisKind, Chart, MetricError, MetricField};

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Nodes along one axis of an integration region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, nodes: usize) -> Self {
        Self { lo, hi, nodes }
    }
}

/// A product region with a node count per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub axes: Vec<GridAxis>,
}

/// Node positions and quadrature weights along one axis.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GridSpec {
    pub fn new(axes: Vec<GridAxis>) -> Self {
        Self { axes }
    }

    /// Covers every periodic axis of `chart` fully with `nodes` points.
    pub fn full_periodic(chart: &Chart, nodes: usize) -> Self {
        Self::new(
            chart
                .axes()
                .iter()
                .map(|a| match a.kind {
                    AxisKind::Periodic { period } => GridAxis::new(0.0, period, nodes),
                    AxisKind::Interval { lo, hi } => GridAxis::new(lo, hi, nodes | 1),
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.nodes).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rules(&self, chart: &Chart) -> Result<Vec<AxisRule>, MetricError> {
        if self.axes.len() != chart.dim() {
            return Err(MetricError::InvalidRegion(format!(
                "region has {} axes, chart has {}",
                self.axes.len(),
                chart.dim()
            )));
        }
        self.axes
            .iter()
            .zip(chart.axes())
            .map(|(g, axis)| {
                let full_period = match axis.kind {
                    AxisKind::Periodic { period } => {
                        ((g.hi - g.lo) - period).abs() <= 1e-12 * period
                    }
                    AxisKind::Interval { .. } => false,
                };
                if full_period {
                    periodic_rule(g.lo, g.hi, g.nodes)
                } else {
                    simpson_rule(g.lo, g.hi, g.nodes)
                }
            })
            .collect()
    }

    /// All node coordinates, last axis fastest. These are the nodes of
    /// [`rules`](Self::rules), but any node count is accepted: a single node
    /// sits at `lo`, and full periods do not repeat their endpoint.
    pub fn points(&self, chart: &Chart) -> Result<Vec<Vec<f64>>, MetricError> {
        if self.axes.len() != chart.dim() {
            return Err(MetricError::InvalidRegion(format!(
                "region has {} axes, chart has {}",
                self.axes.len(),
                chart.dim()
            )));
        }
        let nodes: Vec<Vec<f64>> = self
            .axes
            .iter()
            .zip(chart.axes())
            .map(|(g, axis)| {
                if g.nodes == 0 || !(g.hi >= g.lo) {
                    return Err(MetricError::InvalidRegion(format!(
                        "axis {} needs nodes over a nonempty range",
                        axis.name
                    )));
                }
                let full_period = matches!(axis.kind, AxisKind::Periodic { period }
                    if ((g.hi - g.lo) - period).abs() <= 1e-12 * period);
                Ok(if full_period {
                    periodic_rule(g.lo, g.hi, g.nodes)?.nodes
                } else if g.nodes == 1 {
                    vec![g.lo]
                } else {
                    let h = (g.hi - g.lo) / (g.nodes - 1) as f64;
                    (0..g.nodes).map(|i| g.lo + i as f64 * h).collect()
                })
            })
            .collect::<Result<_, _>>()?;
        let shape: Vec<usize> = nodes.iter().map(Vec::len).collect();
        let mut index = vec![0; shape.len()];
        Ok((0..self.len())
            .map(|flat| {
                unflatten(flat, &shape, &mut index);
                index.iter().zip(&nodes).map(|(&i, r)| r[i]).collect()
            })
            .collect())
    }
}

pub fn simpson_rule(lo: f64, hi: f64, nodes: usize) -> Result<AxisRule, MetricError> {
    if nodes < 3 || nodes.is_multiple_of(2) {
        return Err(MetricError::InvalidRegion(format!(
            "Simpson needs an odd node count >= 3, got {nodes}"
        )));
    }
    if !(hi > lo) {
        return Err(MetricError::InvalidRegion(format!("empty interval [{lo}, {hi}]")));
    }
    let panels = nodes - 1;
    let h = (hi - lo) / panels as f64;
    let nodes_v = (0..nodes).map(|i| lo + i as f64 * h).collect();
    let weights = (0..nodes)
        .map(|i| {
            let w = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect();
    Ok(AxisRule {
        nodes: nodes_v,
        weights,
    })
}

pub fn periodic_rule(lo: f64, hi: f64, nodes: usize) -> Result<AxisRule, MetricError> {
    if nodes == 0 || !(hi > lo) {
        return Err(MetricError::InvalidRegion("empty periodic axis".into()));
    }
    let h = (hi - lo) / nodes as f64;
    Ok(AxisRule {
        nodes: (0..nodes).map(|i| lo + i as f64 * h).collect(),
        weights: vec![h; nodes],
    })
}

/// Composite Simpson integral of a one-variable function.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, nodes: usize) -> Result<f64, MetricError> {
    let rule = simpson_rule(lo, hi, nodes)?;
    let terms: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| w * f(t))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `∫ φ √det g dx` over `region`.
pub fn integrate_density<F>(
    m: &MetricField,
    density: F,
    region: &GridSpec,
    exec: Execution,
) -> Result<f64, MetricError>
where
    F: Fn(&[f64]) -> Result<f64, MetricError> + Sync + Send,
{
    let rules = region.rules(m.chart())?;
    let shape: Vec<usize> = rules.iter().map(|r| r.nodes.len()).collect();
    let terms = try_map_indexed(exec, region.len(), |flat| {
        let mut index = vec![0; shape.len()];
        unflatten(flat, &shape, &mut index);
        let mut weight = 1.0;
        let x: Vec<f64> = index
            .iter()
            .zip(&rules)
            .map(|(&i, r)| {
                weight *= r.weights[i];
                r.nodes[i]
            })
            .collect();
        let g = m.metric_at(&x)?;
        let volume = g.determinant().sqrt();
        Ok(weight * volume * density(&x)?)
    })?;
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::builtins;

    #[test]
    fn unit_flat_torus_has_unit_volume() {
        let m = builtins::flat_torus(4, 1.0);
        let region = GridSpec::full_periodic(m.chart(), 3);
        let v = integrate_density(&m, |_| Ok(1.0), &region, Execution::Parallel).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cusp_volume_closed_form() {
        let m = builtins::cusp(1.0, 1.0);
        let t_max = 3.0;
        let region = GridSpec::new(vec![
            GridAxis::new(0.0, t_max, 2001),
            GridAxis::new(0.0, 1.0, 1),
            GridAxis::new(0.0, 1.0, 1),
        ]);
        let v = integrate_density(&m, |_| Ok(1.0), &region, Execution::Sequential).unwrap();
        let exact = (1.0 - (-2.0 * t_max).exp()) / 2.0;
        assert!((v - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn simpson_rejects_even_node_counts() {
        assert!(simpson(|t| t, 0.0, 1.0, 4).is_err());
        assert!((simpson(|t| t * t * t, 0.0, 2.0, 3).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn pairwise_sum_is_partition_independent() {
        let v: Vec<f64> = (0..10_000).map(|i| ((i as f64) * 0.37).sin()).collect();
        let sequential = pairwise_sum(&v);
        let chunked = crate::exec::map_indexed(Execution::Parallel, v.len(), |i| v[i]);
        assert_eq!(sequential.to_bits(), pairwise_sum(&chunked).to_bits());
    }

    #[test]
    fn region_must_match_chart() {
        let m = builtins::flat_torus(4, 1.0);
        let region = GridSpec::new(vec![GridAxis::new(0.0, 1.0, 3); 3]);
        assert!(matches!(
            integrate_density(&m, |_| Ok(1.0), &region, Execution::Sequential),
            Err(MetricError::InvalidRegion(_))
        ));
    }
}
