//! Calculus on the higher-order velocity spaces of curves in a 2-manifold.
//!
//! A point of the order-`K` velocity space has coordinates `x_(k)^i` for
//! `i ∈ {0, 1}` and `k ∈ 0..=K`, where `x_(0) = x` is the position,
//! `x_(1) = u` the velocity, `x_(2) = u̇` and so on. Each coordinate is an
//! [`Expr`] variable named by [`JetVar::name`]; any other variable name in an
//! expression is treated as a constant parameter.

mod check;
mod forms;

use std::sync::Arc;

use thiserror::Error;

use crate::expr::{EvalError, Expr};

pub use check::{
    param_independence_check, sample_jets, variationality_check, zermelo_check, zero_check, JetPoint, ResidualEntry,
    ResidualReport, Tolerance, VariationalityReport,
};
pub use forms::{Form1, Form2, JetForm};

/// Base dimension; everything in this crate lives on surfaces.
pub const DIM: usize = 2;

/// Default highest jet order. δ of a third-order source form needs `d_T³`
/// of third-order coefficients, which reaches order 6.
pub const DEFAULT_MAX_ORDER: usize = 7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jet order overflow: `{var}` would be differentiated past order {max_order}")]
    OrderOverflow { var: String, max_order: usize },
    #[error("maximal jet order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("not a source form: coefficient on `{0}`")]
    NotSourceForm(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The coordinate `x_(order)^index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub order: usize,
    pub index: usize,
}

impl JetVar {
    pub fn new(index: usize, order: usize) -> JetVar {
        assert!(index < DIM, "jet index {index} out of range");
        JetVar { order, index }
    }

    /// Order 0 is the base coordinate `x{i}`, shared with metric expressions;
    /// higher orders are `x{i}_{k}`.
    pub fn name(&self) -> String {
        if self.order == 0 {
            format!("x{}", self.index)
        } else {
            format!("x{}_{}", self.index, self.order)
        }
    }

    pub fn from_name(name: &str) -> Option<JetVar> {
        let rest = name.strip_prefix('x')?;
        let (idx, order) = match rest.split_once('_') {
            Some((i, k)) => (i, k.parse::<usize>().ok()?),
            None => (rest, 0),
        };
        let index = match idx {
            "0" => 0,
            "1" => 1,
            _ => return None,
        };
        // reject non-canonical spellings such as "x0_0" or "x0_01"
        let v = JetVar { order, index };
        (v.name() == name).then_some(v)
    }

    pub fn expr(&self) -> Expr {
        Expr::var(self.name())
    }

    pub fn raised(&self, by: usize) -> JetVar {
        JetVar { order: self.order + by, index: self.index }
    }

    /// Label of the basis covector `dx_(k)^i`.
    pub fn differential_label(&self) -> String {
        format!("d{}", self.name())
    }
}

/// `x_(k)^i` as an expression.
pub fn coord(index: usize, order: usize) -> Expr {
    JetVar::new(index, order).expr()
}

pub fn x(i: usize) -> Expr {
    coord(i, 0)
}

pub fn u(i: usize) -> Expr {
    coord(i, 1)
}

/// `u̇^i = x_(2)^i`.
pub fn udot(i: usize) -> Expr {
    coord(i, 2)
}

/// `ü^i = x_(3)^i`.
pub fn uddot(i: usize) -> Expr {
    coord(i, 3)
}

/// Velocity space of a fixed maximal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetSpace {
    max_order: usize,
}

impl Default for JetSpace {
    fn default() -> Self {
        JetSpace { max_order: DEFAULT_MAX_ORDER }
    }
}

impl JetSpace {
    pub fn new(max_order: usize) -> Result<JetSpace, JetError> {
        if max_order < DEFAULT_MAX_ORDER {
            return Err(JetError::OrderTooSmall { min: DEFAULT_MAX_ORDER, got: max_order });
        }
        Ok(JetSpace { max_order })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// All coordinates of the space, ordered by (order, index).
    pub fn coordinates(&self) -> impl Iterator<Item = JetVar> {
        let k = self.max_order;
        (0..=k).flat_map(|order| (0..DIM).map(move |index| JetVar { order, index }))
    }

    /// Jet coordinates an expression depends on.
    pub fn jet_variables(e: &Expr) -> Vec<JetVar> {
        e.variables().iter().filter_map(|v| JetVar::from_name(v)).collect()
    }

    /// The total derivative `d_T f = Σ x_(k+1)^i ∂f/∂x_(k)^i`.
    pub fn total_derivative(&self, e: &Expr) -> Result<Expr, JetError> {
        let mut overflow = None;
        let out = e.push_forward(&mut |name: &Arc<str>| {
            let v = JetVar::from_name(name)?;
            if v.order >= self.max_order {
                overflow.get_or_insert_with(|| v.name());
                return None;
            }
            Some(v.raised(1).expr())
        });
        match overflow {
            Some(var) => Err(JetError::OrderOverflow { var, max_order: self.max_order }),
            None => Ok(out),
        }
    }

    /// `d_T` applied `n` times.
    pub fn total_derivative_n(&self, e: &Expr, n: usize) -> Result<Expr, JetError> {
        let mut out = e.clone();
        for _ in 0..n {
            out = self.total_derivative(&out)?;
        }
        Ok(out)
    }

    /// The Lagrange derivative of a function: its Euler–Poisson source form.
    pub fn lagrange_derivative(&self, f: &Expr) -> Result<Form1, JetError> {
        self.lagrange_derivative_of(Form1::exact(f))
    }

    /// The Lagrange derivative of a 1-form; zero exactly for locally variational forms.
    pub fn lagrange_derivative1(&self, form: &Form1) -> Result<Form2, JetError> {
        self.lagrange_derivative_of(form.exterior_d())
    }

    /// `(ι₀ − d_T ι₁ + d_T² ι₂ / 2! − …)` applied to an already differentiated form.
    ///
    /// The series stops at the highest basis order present, past which every
    /// `ι_r` vanishes.
    pub fn lagrange_derivative_of<F: JetForm>(&self, dform: F) -> Result<F, JetError> {
        let top = dform.max_basis_order();
        let mut acc = dform.iota(0);
        let mut factorial = 1.0;
        for r in 1..=top {
            factorial *= r as f64;
            let mut term = dform.iota(r);
            for _ in 0..r {
                term = term.total_derivative(self)?;
            }
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            acc = acc.plus(&term.scaled(sign / factorial));
        }
        Ok(acc)
    }
}

/// The first fundamental field `ζ₁ = u^i ∂/∂u^i + 2 u̇^i ∂/∂u̇^i`.
pub fn zeta1(f: &Expr) -> Expr {
    f.push_forward(&mut |name: &Arc<str>| match JetVar::from_name(name)? {
        JetVar { order: 1, index } => Some(u(index)),
        JetVar { order: 2, index } => Some(2.0 * udot(index)),
        _ => None,
    })
}

/// The second fundamental field `ζ₂ = u^i ∂/∂u̇^i`.
pub fn zeta2(f: &Expr) -> Expr {
    f.push_forward(&mut |name: &Arc<str>| match JetVar::from_name(name)? {
        JetVar { order: 2, index } => Some(u(index)),
        _ => None,
    })
}

/// Applies `ζ₁` (`which = 1`) or `ζ₂` (`which = 2`).
pub fn zeta_apply(which: u8, f: &Expr) -> Expr {
    match which {
        1 => zeta1(f),
        2 => zeta2(f),
        _ => panic!("fundamental field index must be 1 or 2, got {which}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Env};

    #[test]
    fn names_round_trip() {
        for v in JetSpace::default().coordinates() {
            assert_eq!(JetVar::from_name(&v.name()), Some(v));
        }
        assert_eq!(JetVar::new(1, 0).name(), "x1");
        assert_eq!(JetVar::new(0, 3).name(), "x0_3");
        assert_eq!(JetVar::from_name("x0_0"), None);
        assert_eq!(JetVar::from_name("x2"), None);
        assert_eq!(JetVar::from_name("w0"), None);
    }

    #[test]
    fn total_derivative_of_position_is_velocity() {
        let jet = JetSpace::default();
        assert_eq!(jet.total_derivative(&x(0)).unwrap(), u(0));
    }

    #[test]
    fn total_derivative_leibniz() {
        let jet = JetSpace::default();
        let d = jet.total_derivative(&(u(0) * u(1))).unwrap();
        let expected = udot(0) * u(1) + u(0) * udot(1);
        let env = Env::from_pairs([("x0_1", 0.7), ("x1_1", -1.3), ("x0_2", 2.0), ("x1_2", 0.4)]);
        assert_eq!(d.eval(&env).unwrap(), expected.eval(&env).unwrap());
    }

    #[test]
    fn total_derivative_overflow() {
        let jet = JetSpace::default();
        let top = coord(1, DEFAULT_MAX_ORDER);
        assert!(matches!(jet.total_derivative(&(top * u(0))), Err(JetError::OrderOverflow { .. })));
        // parameters are constants
        assert!(jet.total_derivative(&Expr::var("m")).unwrap().is_zero());
    }

    #[test]
    fn space_order_floor() {
        assert!(JetSpace::new(6).is_err());
        assert_eq!(JetSpace::new(9).unwrap().max_order(), 9);
    }

    #[test]
    fn zeta_on_homogeneous_functions() {
        // ζ₁ counts u with weight 1 and u̇ with weight 2
        let f = parse("x0_1^2 * x1_2").unwrap();
        let env = Env::from_pairs([("x0_1", 1.5), ("x1_2", -0.5), ("x1_1", 0.8)]);
        assert!((zeta1(&f).eval(&env).unwrap() - 4.0 * f.eval(&env).unwrap()).abs() < 1e-14);
        // ζ₂ = u^i ∂/∂u̇^i
        assert!((zeta2(&f).eval(&env).unwrap() - 1.5f64.powi(2) * 0.8).abs() < 1e-14);
    }
}
