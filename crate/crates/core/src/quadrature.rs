//! Composite Gauss-Legendre quadrature with a panel-doubling error estimate.
//!
//! An integral over `[lo, hi]` is split into segments at the supplied
//! breakpoints, each segment is cut into equal panels, and a fixed-order
//! Gauss-Legendre rule is applied on every panel. The error estimate is the
//! difference between the composite sums with `n` and `2n` panels per
//! segment; the panel count keeps doubling until the estimate drops below
//! `abs_tol` or `refine_limit` doublings have been spent.
//!
//! Gauss nodes are strictly interior to each panel, so functions with a jump
//! at a breakpoint are only ever sampled from one side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Interval;

/// Knobs for [`integrate_panelized`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub panels_per_segment: usize,
    pub nodes_per_panel: usize,
    pub refine_limit: usize,
    pub abs_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            panels_per_segment: 16,
            nodes_per_panel: 8,
            refine_limit: 12,
            abs_tol: 1e-9,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels_per_segment == 0 {
            return Err(Error::invalid("panels_per_segment must be positive"));
        }
        if self.nodes_per_panel == 0 || self.nodes_per_panel > 64 {
            return Err(Error::invalid("nodes_per_panel must lie in 1..=64"));
        }
        if self.refine_limit == 0 {
            return Err(Error::invalid("refine_limit must be at least 1"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol must be a positive finite number"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending in the node.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the three-term
    /// Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess for the i-th largest root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Returns the breakpoints that lie strictly inside `interval`, sorted and
/// deduplicated.
pub fn interior_breakpoints(interval: Interval, breakpoints: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|t| t.is_finite() && *t > interval.lo() && *t < interval.hi())
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

struct CompositeSum {
    value: f64,
    magnitude: f64,
}

fn composite<F>(f: &F, edges: &[f64], panels: usize, rule: &GaussLegendre) -> Result<CompositeSum>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut value = 0.0;
    let mut magnitude = 0.0;
    for seg in edges.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let width = (hi - lo) / panels as f64;
        for p in 0..panels {
            let a = lo + width * p as f64;
            let b = if p + 1 == panels { hi } else { a + width };
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut panel = 0.0;
            for (node, weight) in rule.nodes().iter().zip(rule.weights()) {
                let x = mid + half * node;
                let y = f(x)?;
                if !y.is_finite() {
                    return Err(Error::Domain {
                        point: x,
                        reason: format!("non-finite integrand value {y}"),
                    });
                }
                panel += weight * y;
                magnitude += (weight * y).abs() * half;
            }
            value += half * panel;
        }
    }
    Ok(CompositeSum { value, magnitude })
}

/// Integrates `f` over `interval`, never letting a panel straddle one of
/// `breakpoints`.
///
/// Convergence is declared when `|I(2n) - I(n)| <= abs_tol`, or when the
/// difference is already at the rounding floor of the sum itself (a few ulps
/// of `sum |w f|`), which happens for integrands of large magnitude.
pub fn integrate_panelized<F>(
    f: F,
    interval: Interval,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    let rule = GaussLegendre::new(cfg.nodes_per_panel);
    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(interval.lo());
    edges.extend(interior_breakpoints(interval, breakpoints));
    edges.push(interval.hi());
    let segments = edges.len() - 1;

    let mut panels = cfg.panels_per_segment;
    let mut coarse = composite(&f, &edges, panels, &rule)?;
    let mut estimate = f64::INFINITY;
    for _ in 0..cfg.refine_limit {
        let fine = composite(&f, &edges, 2 * panels, &rule)?;
        panels *= 2;
        estimate = (fine.value - coarse.value).abs();
        let rounding_floor = 64.0 * f64::EPSILON * fine.magnitude;
        if estimate <= cfg.abs_tol || estimate <= rounding_floor {
            return Ok(QuadratureResult {
                value: fine.value,
                error_estimate: estimate,
                panels_used: panels * segments,
            });
        }
        coarse = fine;
    }
    Err(Error::NonConvergence {
        value: coarse.value,
        estimate,
    })
}
