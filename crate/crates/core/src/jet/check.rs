//! Probabilistic zero testing on random jet points.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Expr, Tape};

use super::{zeta1, zeta2, Form1, JetError, JetSpace, JetVar, DIM};

/// Numeric values of every jet coordinate up to some order.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPoint {
    values: Vec<[f64; DIM]>,
}

impl JetPoint {
    /// `orders[k][i]` is the value of `x_(k)^i`.
    pub fn new(orders: Vec<[f64; DIM]>) -> JetPoint {
        assert!(orders.iter().flatten().all(|v| v.is_finite()), "jet point entries must be finite");
        JetPoint { values: orders }
    }

    /// Each component uniform on `[-2, -0.5] ∪ [0.5, 2]`.
    pub fn random<R: Rng>(rng: &mut R, max_order: usize) -> JetPoint {
        let values = (0..=max_order)
            .map(|_| {
                let mut pair = [0.0; DIM];
                for v in &mut pair {
                    let mag = rng.gen_range(0.5..=2.0);
                    *v = if rng.gen_bool(0.5) { mag } else { -mag };
                }
                pair
            })
            .collect();
        JetPoint { values }
    }

    pub fn max_order(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, var: JetVar) -> Option<f64> {
        self.values.get(var.order).map(|p| p[var.index])
    }

    pub fn order(&self, k: usize) -> [f64; DIM] {
        self.values[k]
    }

    pub fn set(&mut self, var: JetVar, value: f64) {
        if self.values.len() <= var.order {
            self.values.resize(var.order + 1, [0.0; DIM]);
        }
        self.values[var.order][var.index] = value;
    }

    /// Resolves a variable name; `None` for non-jet names and missing orders.
    pub fn lookup(&self, name: &str) -> Option<f64> {
        JetVar::from_name(name).and_then(|v| self.get(v))
    }
}

/// `count` seeded random jet points.
pub fn sample_jets(count: usize, seed: u64, max_order: usize) -> Vec<JetPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| JetPoint::random(&mut rng, max_order)).collect()
}

/// A value counts as zero when `|value| ≤ atol + rtol · scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { atol: 1e-9, rtol: 1e-7 }
    }
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> Tolerance {
        Tolerance { atol, rtol }
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualEntry {
    pub point: usize,
    pub label: String,
    pub value: f64,
    /// Cancellation-free magnitude of the terms summed into `value`.
    pub scale: f64,
}

/// Pointwise values of expressions that ought to vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
    pub tolerance: Tolerance,
}

impl ResidualReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.value.abs() <= self.tolerance.bound(e.scale))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.value.abs()).fold(0.0, f64::max)
    }

    /// Largest `|value| / scale` (absolute value where the scale vanishes).
    pub fn max_relative(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| if e.scale > 0.0 { e.value.abs() / e.scale } else { e.value.abs() })
            .fold(0.0, f64::max)
    }

    /// Largest ratio of residual to its admissible bound; `≤ 1` means pass.
    pub fn worst_ratio(&self) -> f64 {
        self.entries.iter().map(|e| e.value.abs() / self.tolerance.bound(e.scale)).fold(0.0, f64::max)
    }

    /// CSV with columns `point,coefficient,value`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["point", "coefficient", "value"])?;
        for e in &self.entries {
            w.write_record([e.point.to_string(), e.label.clone(), format!("{:.16e}", e.value)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evaluates labelled expressions at every point and records the residuals.
pub fn zero_check(
    exprs: &[(String, Expr)],
    points: &[JetPoint],
    tolerance: Tolerance,
) -> Result<ResidualReport, JetError> {
    let tape = Tape::compile(&exprs.iter().map(|(_, e)| e.clone()).collect::<Vec<_>>());
    let mut entries = Vec::with_capacity(points.len() * exprs.len());
    for (p, point) in points.iter().enumerate() {
        let vars = tape.bind(|n| point.lookup(n))?;
        let vals = tape.eval_with_scale(&vars)?;
        for ((label, _), (value, scale)) in exprs.iter().zip(vals) {
            entries.push(ResidualEntry { point: p, label: label.clone(), value, scale });
        }
    }
    Ok(ResidualReport { entries, tolerance })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalityReport {
    pub passed: bool,
    pub max_residual: f64,
    pub residuals: ResidualReport,
}

/// Tests `δε = 0` for a source form `ε = E_i dx^i` at the given points.
pub fn variationality_check(
    jet: &JetSpace,
    source: &Form1,
    points: &[JetPoint],
    tolerance: Tolerance,
) -> Result<VariationalityReport, JetError> {
    if let Some((v, _)) = source.terms().find(|(v, _)| v.order != 0) {
        return Err(JetError::NotSourceForm(v.differential_label()));
    }
    let helmholtz = jet.lagrange_derivative1(source)?;
    let residuals = zero_check(&helmholtz.labelled(), points, tolerance)?;
    Ok(VariationalityReport { passed: residuals.passes(), max_residual: residuals.max_abs(), residuals })
}

/// Residuals `(ζ₁L − L, ζ₂L)` of the homogeneity conditions for parameter-invariant actions.
pub fn zermelo_check(
    lagrangian: &Expr,
    points: &[JetPoint],
    tolerance: Tolerance,
) -> Result<(ResidualReport, ResidualReport), JetError> {
    let first = zeta1(lagrangian) - lagrangian;
    let second = zeta2(lagrangian);
    Ok((
        zero_check(&[("zeta1 L - L".into(), first)], points, tolerance)?,
        zero_check(&[("zeta2 L".into(), second)], points, tolerance)?,
    ))
}

/// Residuals `(ζ₁f, ζ₂f)`; both vanish iff `f` is parameter independent.
pub fn param_independence_check(
    f: &Expr,
    points: &[JetPoint],
    tolerance: Tolerance,
) -> Result<(ResidualReport, ResidualReport), JetError> {
    Ok((
        zero_check(&[("zeta1 f".into(), zeta1(f))], points, tolerance)?,
        zero_check(&[("zeta2 f".into(), zeta2(f))], points, tolerance)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn samples_are_deterministic_and_bounded() {
        let a = sample_jets(10, 42, 7);
        let b = sample_jets(10, 42, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_jets(10, 43, 7));
        for p in &a {
            for k in 0..=7 {
                for v in p.order(k) {
                    assert!((0.5..=2.0).contains(&v.abs()));
                }
            }
        }
    }

    #[test]
    fn residual_csv_layout() {
        let pts = sample_jets(2, 1, 7);
        let r = zero_check(&[("c".into(), parse("x0 - x0").unwrap())], &pts, Tolerance::default()).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("point,coefficient,value"));
        assert_eq!(text.lines().count(), 3);
        assert!(r.passes());
    }

    #[test]
    fn unbound_order_is_an_error() {
        let p = JetPoint::new(vec![[1.0, 1.0]]);
        let r = zero_check(&[("c".into(), parse("x0_1").unwrap())], &[p], Tolerance::default());
        assert!(matches!(r, Err(JetError::Eval(_))));
    }
}
