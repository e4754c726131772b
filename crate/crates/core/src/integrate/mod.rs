//! Geodesic circles as a first-order system in `(x, u, w)`:
//! `ẋ = u`, `u̇ = w − Γ(u, u)`, `ẇ = w′ − Γ(u, w)` with `w′` from the chosen
//! third-order equation. Nothing is projected back onto constraints, so the
//! drift of the diagnostics is a direct measure of accuracy.

mod convergence;
mod solver;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{CurveJet, Geometry, Metric};
use crate::mechanics::{geodesic_circle_accel, Formulation, Lagrangian, MechanicsError, VariationalSystem};

pub use convergence::{convergence_probe, ConvergenceReport, Verdict};
pub use solver::{rk4_step, rkf45_step, State, STATE_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Rkf45,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for rk4, initial step for rkf45.
    pub h: f64,
    pub atol: f64,
    pub rtol: f64,
    pub t_span: [f64; 2],
    /// Record every `stride`-th step (the final state is always recorded).
    pub stride: usize,
    pub formulation: Formulation,
    pub m: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            h: 1e-3,
            atol: 1e-12,
            rtol: 1e-10,
            t_span: [0.0, 10.0],
            stride: 10,
            formulation: Formulation::EulerPoisson,
            m: 1.0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), IntegrateError> {
        let bad = |msg: &str| Err(IntegrateError::InvalidConfig(msg.to_string()));
        if !(self.h > 0.0 && self.h.is_finite()) {
            return bad("h must be positive and finite");
        }
        if !(self.t_span[0].is_finite() && self.t_span[1].is_finite()) || self.t_span[1] < self.t_span[0] {
            return bad("t_span must be finite and increasing");
        }
        if !(self.atol > 0.0 && self.rtol > 0.0) {
            return bad("atol and rtol must be positive");
        }
        if self.stride == 0 {
            return bad("stride must be at least 1");
        }
        if !self.m.is_finite() || self.m < 0.0 {
            return bad("m must be finite and non-negative");
        }
        if self.formulation == Formulation::EulerPoisson && self.m == 0.0 {
            return bad("the euler_poisson formulation needs m > 0");
        }
        Ok(())
    }
}

/// One recorded state with diagnostics computed from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: [f64; 2],
    pub u: [f64; 2],
    pub w: [f64; 2],
    pub speed: f64,
    pub k: f64,
    /// Hamilton function of `k − m ‖u‖`.
    pub hamilton: f64,
    pub s01: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error("at t = {t}: {source}")]
    Guard { t: f64, source: MechanicsError },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
}

/// Samples up to the end or up to the first failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub failure: Option<IntegrateError>,
    pub steps: usize,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    /// `max |k(t) − k(0)|`.
    pub fn k_drift(&self) -> f64 {
        let k0 = self.samples.first().map_or(0.0, |s| s.k);
        self.samples.iter().map(|s| (s.k - k0).abs()).fold(0.0, f64::max)
    }

    /// `max |H(t) + k(0)|`.
    pub fn hamilton_drift(&self) -> f64 {
        let k0 = self.samples.first().map_or(0.0, |s| s.k);
        self.samples.iter().map(|s| (s.hamilton + k0).abs()).fold(0.0, f64::max)
    }

    /// `max |H(t) + k(t)|`, a pointwise identity along any state.
    pub fn hamilton_identity_error(&self) -> f64 {
        self.samples.iter().map(|s| (s.hamilton + s.k).abs()).fold(0.0, f64::max)
    }

    pub fn speed_drift(&self) -> f64 {
        let s0 = self.samples.first().map_or(0.0, |s| s.speed);
        self.samples.iter().map(|s| (s.speed - s0).abs()).fold(0.0, f64::max)
    }
}

/// Geometry, equation and diagnostics for one metric.
#[derive(Debug, Clone)]
pub struct Integrator {
    geometry: Geometry,
    system: VariationalSystem,
    config: IntegratorConfig,
}

fn pack(s: &CurveJet) -> State {
    [s.x[0], s.x[1], s.u[0], s.u[1], s.w[0], s.w[1]]
}

fn unpack(y: &State) -> CurveJet {
    CurveJet { x: [y[0], y[1]], u: [y[2], y[3]], w: [y[4], y[5]], w_prime: None }
}

impl Integrator {
    pub fn new(metric: Metric, config: IntegratorConfig) -> Result<Integrator, IntegrateError> {
        config.validate()?;
        let lagrangian = Lagrangian::geodesic_circle(&metric, config.m);
        let system = VariationalSystem::new(metric.clone(), lagrangian)
            .map_err(|e| IntegrateError::Guard { t: config.t_span[0], source: e })?;
        Ok(Integrator { geometry: Geometry::new(metric), system, config })
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// `w′` for the configured formulation.
    pub fn acceleration(&self, state: &CurveJet) -> Result<[f64; 2], MechanicsError> {
        let p = self.geometry.at(state.x)?;
        geodesic_circle_accel(&p, state, self.config.formulation, self.config.m)
    }

    /// The coordinate-time vector field of the first-order system.
    pub fn vector_field(&self, y: &State) -> Result<State, MechanicsError> {
        let state = unpack(y);
        let p = self.geometry.at(state.x)?;
        let wp = geodesic_circle_accel(&p, &state, self.config.formulation, self.config.m)?;
        let guu = p.gamma_contract(state.u, state.u);
        let guw = p.gamma_contract(state.u, state.w);
        Ok([state.u[0], state.u[1], state.w[0] - guu[0], state.w[1] - guu[1], wp[0] - guw[0], wp[1] - guw[1]])
    }

    pub fn sample(&self, t: f64, y: &State) -> Result<TrajectorySample, MechanicsError> {
        let state = unpack(y);
        let p = self.geometry.at(state.x)?;
        let speed = state.speed(&p)?;
        let k = state.frenet_curvature(&p)?;
        let wp = geodesic_circle_accel(&p, &state, self.config.formulation, self.config.m)?;
        let flat = state.with_w_prime(wp).to_flat(&p, 3);
        let hamilton = self.system.hamilton(&flat)?;
        Ok(TrajectorySample { t, x: state.x, u: state.u, w: state.w, speed, k, hamilton, s01: state.spin() })
    }

    /// Integrates from `initial` over the configured span.
    pub fn run(&self, initial: &CurveJet) -> Trajectory {
        let [t0, t1] = self.config.t_span;
        let mut samples = Vec::new();
        let mut y = pack(initial);
        let guard = |t: f64, e: MechanicsError| IntegrateError::Guard { t, source: e };
        match self.sample(t0, &y) {
            Ok(s) => samples.push(s),
            Err(e) => return Trajectory { samples, failure: Some(guard(t0, e)), steps: 0 },
        }
        let mut f = |_t: f64, y: &State| self.vector_field(y);
        let mut steps = 0;
        let failure = match self.config.method {
            Method::Rk4 => {
                let n = (((t1 - t0) / self.config.h) - 1e-9).ceil().max(0.0) as usize;
                let h = if n > 0 { (t1 - t0) / n as f64 } else { 0.0 };
                let mut failure = None;
                for i in 0..n {
                    let t = t0 + i as f64 * h;
                    let t_next = t0 + (i + 1) as f64 * h;
                    match rk4_step(&mut f, t, &y, h) {
                        Ok(next) if next.iter().all(|v| v.is_finite()) => y = next,
                        Ok(_) => {
                            failure = Some(IntegrateError::NonFinite(t_next));
                            break;
                        }
                        Err(e) => {
                            failure = Some(guard(t, e));
                            break;
                        }
                    }
                    steps += 1;
                    if steps % self.config.stride == 0 || i + 1 == n {
                        match self.sample(t_next, &y) {
                            Ok(s) => samples.push(s),
                            Err(e) => {
                                failure = Some(guard(t_next, e));
                                break;
                            }
                        }
                    }
                }
                failure
            }
            Method::Rkf45 => self.run_adaptive(&mut f, &mut y, &mut samples, &mut steps),
        };
        Trajectory { samples, failure, steps }
    }

    fn run_adaptive(
        &self,
        f: &mut impl FnMut(f64, &State) -> Result<State, MechanicsError>,
        y: &mut State,
        samples: &mut Vec<TrajectorySample>,
        steps: &mut usize,
    ) -> Option<IntegrateError> {
        let [t0, t1] = self.config.t_span;
        let (atol, rtol) = (self.config.atol, self.config.rtol);
        let mut t = t0;
        let mut h = self.config.h.min(t1 - t0);
        while t < t1 {
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            if h <= 1e-14 * t.abs().max(1.0) {
                return Some(IntegrateError::StepUnderflow { t, h });
            }
            let (next, err) = match rkf45_step(f, t, y, h) {
                Ok(r) => r,
                Err(e) => {
                    // a guard hit inside a trial step may just mean the step was too long
                    h *= 0.25;
                    if h <= 1e-14 * t.abs().max(1.0) {
                        return Some(IntegrateError::Guard { t, source: e });
                    }
                    continue;
                }
            };
            let mut norm: f64 = 0.0;
            for i in 0..STATE_DIM {
                let sc = atol + rtol * y[i].abs().max(next[i].abs());
                norm = norm.max(err[i].abs() / sc);
            }
            if !norm.is_finite() {
                h *= 0.25;
                continue;
            }
            if norm <= 1.0 {
                t = if last { t1 } else { t + h };
                *y = next;
                *steps += 1;
                if (*steps).is_multiple_of(self.config.stride) || t >= t1 {
                    match self.sample(t, y) {
                        Ok(s) => samples.push(s),
                        Err(e) => return Some(IntegrateError::Guard { t, source: e }),
                    }
                }
            }
            let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        }
        None
    }
}

/// Integrates one scenario in a single call.
pub fn integrate(metric: Metric, initial: &CurveJet, config: IntegratorConfig) -> Result<Trajectory, IntegrateError> {
    Ok(Integrator::new(metric, config)?.run(initial))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::default().validate().is_ok());
        let bad = IntegratorConfig { h: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig { m: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let ok = IntegratorConfig { m: 0.0, formulation: Formulation::Concircular, ..Default::default() };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn straight_line_keeps_zero_curvature() {
        let cfg = IntegratorConfig {
            formulation: Formulation::Concircular,
            m: 0.0,
            t_span: [0.0, 2.0],
            ..Default::default()
        };
        let tr = integrate(Metric::flat(), &CurveJet::new([0.0, 0.0], [0.6, 0.8], [0.0, 0.0]), cfg).unwrap();
        assert!(tr.is_complete());
        assert!(tr.samples.iter().all(|s| s.k.abs() < 1e-12));
        let end = tr.last().unwrap();
        assert!((end.x[0] - 1.2).abs() < 1e-12 && (end.x[1] - 1.6).abs() < 1e-12);
    }

    #[test]
    fn partial_trajectory_on_guard_violation() {
        // the metric is undefined for x0 < 0, reached at t = 0.5
        let metric = Metric::from_strings("1", "0", "sqrt(x0)", crate::geometry::Signature::Riemannian).unwrap();
        let cfg = IntegratorConfig { formulation: Formulation::Concircular, m: 0.0, ..Default::default() };
        let tr = integrate(metric, &CurveJet::new([0.5, 0.0], [-1.0, 0.0], [0.0, 0.0]), cfg).unwrap();
        assert!(matches!(tr.failure, Some(IntegrateError::Guard { .. })));
        let last = tr.last().unwrap();
        assert!(last.t < 0.5 && last.t > 0.4);
    }
}
