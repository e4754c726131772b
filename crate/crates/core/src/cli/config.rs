use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::expr::parse;
use crate::geometry::{CurveJet, Metric, Signature};
use crate::integrate::{IntegratorConfig, Method};
use crate::jet::Tolerance;
use crate::mechanics::Formulation;

use super::CliError;

/// A whole run: metric, Lagrangian, integration, verification and output.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub metric: MetricConfig,
    #[serde(default)]
    pub lagrangian: LagrangianConfig,
    #[serde(default)]
    pub integration: IntegrationConfig,
    #[serde(default)]
    pub verification: VerificationConfig,
    #[serde(default)]
    pub convergence: ConvergenceConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Either `builtin = "sphere(2)"` or explicit component strings; the flat
/// plane when neither is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g00: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g01: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g10: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g11: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<Signature>,
    pub orientation: i8,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { builtin: None, g00: None, g01: None, g10: None, g11: None, signature: None, orientation: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LagrangianConfig {
    pub m: f64,
}

impl Default for LagrangianConfig {
    fn default() -> Self {
        LagrangianConfig { m: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegrationConfig {
    pub method: Method,
    pub h: f64,
    pub atol: f64,
    pub rtol: f64,
    pub t_span: [f64; 2],
    pub stride: usize,
    pub formulation: Formulation,
    /// Bound on `max |k(t) − k(0)|`, `max |H(t) + k(0)|` and, when checked,
    /// speed drift and closure.
    pub drift_tolerance: f64,
    /// Bound on `max |H(t) + k(t)|`.
    pub hamilton_tolerance: f64,
    pub check_speed: bool,
    pub check_closure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConfig>,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        IntegrationConfig {
            method: d.method,
            h: d.h,
            atol: d.atol,
            rtol: d.rtol,
            t_span: d.t_span,
            stride: d.stride,
            formulation: d.formulation,
            drift_tolerance: 1e-6,
            hamilton_tolerance: 1e-8,
            check_speed: false,
            check_closure: false,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerificationConfig {
    pub samples: usize,
    pub seed: u64,
    pub atol: f64,
    pub rtol: f64,
    /// Swap the source form under test for `E_i = ü_i`, which is not variational.
    pub corrupt_source: bool,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        let t = Tolerance::default();
        VerificationConfig { samples: 100, seed: 42, atol: t.atol, rtol: t.rtol, corrupt_source: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub steps: Vec<f64>,
    pub expected_order: f64,
    pub order_tolerance: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig { steps: vec![4e-3, 2e-3, 1e-3], expected_order: 4.0, order_tolerance: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out") }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<ScenarioConfig, CliError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| config_err(e.to_string().trim_end().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        ScenarioConfig::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks everything that can be checked without running a command.
    pub fn validate(&self) -> Result<(), CliError> {
        self.metric()?;
        let v = &self.verification;
        if v.samples == 0 {
            return Err(config_err("verification.samples must be at least 1"));
        }
        if !(v.atol >= 0.0 && v.rtol >= 0.0 && v.atol + v.rtol > 0.0) {
            return Err(config_err("verification.atol and verification.rtol must be non-negative, not both zero"));
        }
        if !self.lagrangian.m.is_finite() || self.lagrangian.m < 0.0 {
            return Err(config_err("lagrangian.m must be finite and non-negative"));
        }
        self.integrator()?;
        if let Some(init) = &self.integration.initial {
            for (name, v) in [("x", init.x), ("u", init.u), ("w", init.w)] {
                if let Some(v) = v {
                    if !v.iter().all(|c| c.is_finite()) {
                        return Err(config_err(format!("integration.initial.{name} must be finite")));
                    }
                }
            }
        }
        let c = &self.convergence;
        if c.steps.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(config_err("convergence.steps must be positive"));
        }
        Ok(())
    }

    pub fn metric(&self) -> Result<Metric, CliError> {
        let m = &self.metric;
        let orientation = match m.orientation {
            1 => 1.0,
            -1 => -1.0,
            o => return Err(config_err(format!("metric.orientation must be 1 or -1, got {o}"))),
        };
        let explicit = m.g00.is_some() || m.g01.is_some() || m.g10.is_some() || m.g11.is_some();
        let metric = match (&m.builtin, explicit) {
            (Some(_), true) => return Err(config_err("metric: give either builtin or g00/g01/g11, not both")),
            (Some(name), false) => {
                let metric = Metric::builtin(name).map_err(|e| config_err(format!("metric.builtin: {e}")))?;
                if let Some(sig) = m.signature {
                    if sig != metric.signature() {
                        return Err(config_err(format!(
                            "metric.signature: {sig} does not match builtin `{name}` ({})",
                            metric.signature()
                        )));
                    }
                }
                metric
            }
            (None, false) => Metric::flat(),
            (None, true) => {
                let field = |name: &str, v: &Option<String>| {
                    v.clone().ok_or_else(|| config_err(format!("metric.{name} is required for an explicit metric")))
                };
                let g00 = field("g00", &m.g00)?;
                let g01 = field("g01", &m.g01)?;
                let g11 = field("g11", &m.g11)?;
                let parsed =
                    |name: &str, text: &str| parse(text).map_err(|e| config_err(format!("metric.{name}: {e}")));
                let (e00, e01, e11) = (parsed("g00", &g00)?, parsed("g01", &g01)?, parsed("g11", &g11)?);
                if let Some(g10) = &m.g10 {
                    let e10 = parsed("g10", g10)?;
                    if e10.to_string() != e01.to_string() {
                        return Err(config_err("metric.g10 must equal metric.g01 (the metric is symmetric)"));
                    }
                }
                Metric::new(e00, e01, e11, m.signature.unwrap_or(Signature::Riemannian)).named("explicit")
            }
        };
        Ok(metric.with_orientation(orientation))
    }

    pub fn integrator(&self) -> Result<IntegratorConfig, CliError> {
        let i = &self.integration;
        let cfg = IntegratorConfig {
            method: i.method,
            h: i.h,
            atol: i.atol,
            rtol: i.rtol,
            t_span: i.t_span,
            stride: i.stride,
            formulation: i.formulation,
            m: self.lagrangian.m,
        };
        cfg.validate().map_err(|e| config_err(format!("integration: {e}")))?;
        Ok(cfg)
    }

    /// The initial curve jet; every component must be present.
    pub fn initial(&self) -> Result<CurveJet, CliError> {
        let init = self.integration.initial.as_ref().ok_or_else(|| config_err("missing table integration.initial"))?;
        let get = |name: &str, v: Option<[f64; 2]>| {
            v.ok_or_else(|| config_err(format!("missing field integration.initial.{name}")))
        };
        Ok(CurveJet::new(get("x", init.x)?, get("u", init.u)?, get("w", init.w)?))
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.verification.atol, self.verification.rtol)
    }
}
