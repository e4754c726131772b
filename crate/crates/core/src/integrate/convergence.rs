use crate::geometry::{CurveJet, Metric};

use super::{IntegrateError, Integrator, IntegratorConfig, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Conclusive,
    /// Differences did not shrink monotonically with `h`.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Step sizes, coarsest first.
    pub steps: Vec<f64>,
    /// Endpoint state `(x, u, w)` for each step size.
    pub endpoints: Vec<[f64; 6]>,
    /// `‖y(h_i) − y(h_finest)‖∞` for every non-finest step.
    pub errors: Vec<f64>,
    /// `log₂(‖y₄ₕ − y₂ₕ‖ / ‖y₂ₕ − yₕ‖)` for each consecutive halving triple.
    pub orders: Vec<f64>,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    /// The order estimate from the finest triple.
    pub fn observed_order(&self) -> Option<f64> {
        self.orders.last().copied()
    }
}

fn dist(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Integrates the scenario with rk4 at every listed step and estimates the order.
///
/// Steps are sorted coarsest first and should halve; at least three are needed
/// for an order estimate.
pub fn convergence_probe(
    metric: &Metric,
    initial: &CurveJet,
    config: &IntegratorConfig,
    steps: &[f64],
) -> Result<ConvergenceReport, IntegrateError> {
    let mut steps = steps.to_vec();
    steps.sort_by(|a, b| b.total_cmp(a));
    let mut endpoints = Vec::with_capacity(steps.len());
    for &h in &steps {
        let cfg = IntegratorConfig { method: Method::Rk4, h, stride: usize::MAX, ..config.clone() };
        let tr = Integrator::new(metric.clone(), cfg)?.run(initial);
        if let Some(e) = tr.failure {
            return Err(e);
        }
        let s = tr.last().expect("at least the initial sample");
        endpoints.push([s.x[0], s.x[1], s.u[0], s.u[1], s.w[0], s.w[1]]);
    }
    let finest = *endpoints.last().unwrap_or(&[0.0; 6]);
    let errors: Vec<f64> = endpoints[..endpoints.len().saturating_sub(1)].iter().map(|e| dist(e, &finest)).collect();
    let diffs: Vec<f64> = endpoints.windows(2).map(|w| dist(&w[0], &w[1])).collect();
    let orders: Vec<f64> = diffs.windows(2).map(|d| (d[0] / d[1]).log2()).collect();
    let monotone = diffs.windows(2).all(|d| d[1] < d[0]) && errors.windows(2).all(|e| e[1] < e[0]);
    let verdict = if monotone && !orders.is_empty() && orders.iter().all(|p| p.is_finite()) {
        Verdict::Conclusive
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvergenceReport { steps, endpoints, errors, orders, verdict })
}
