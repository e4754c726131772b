use std::collections::HashMap;
use std::sync::Arc;

use crate::expr::Expr;
use crate::geometry::{covariant_acceleration, ChristoffelField, Metric};
use crate::jet::{coord, u, Form1};

/// Names of the covariant acceleration coordinates `w^i = u′^i`.
pub const W_NAMES: [&str; 2] = ["w0", "w1"];

/// `w^i` as expressions.
pub fn w(i: usize) -> Expr {
    Expr::var(W_NAMES[i])
}

/// A second-order Lagrange function written in the covariant coordinates
/// `(x^i, u^i, w^i)` with `w = u′`.
#[derive(Debug, Clone)]
pub struct Lagrangian {
    expr: Expr,
    m: f64,
    name: String,
}

impl Lagrangian {
    /// Any expression over `x0, x1, x0_1, x1_1, w0, w1`.
    pub fn covariant(expr: Expr, name: impl Into<String>) -> Lagrangian {
        Lagrangian { expr, m: 0.0, name: name.into() }
    }

    /// Frenet curvature `k = ‖u ∧ w‖ / ‖u‖³`.
    pub fn frenet_curvature(metric: &Metric) -> Lagrangian {
        let uu = [u(0), u(1)];
        let ww = [w(0), w(1)];
        let expr = metric.wedge(&uu, &ww) / metric.norm(&uu).powi(3);
        Lagrangian { expr, m: 0.0, name: "k".into() }
    }

    /// `−m ‖u‖`.
    pub fn length(metric: &Metric, m: f64) -> Lagrangian {
        let expr = -(m * metric.norm(&[u(0), u(1)]));
        Lagrangian { expr, m, name: format!("-{m}|u|") }
    }

    /// `½ g(u, u)`.
    pub fn kinetic(metric: &Metric) -> Lagrangian {
        let uu = [u(0), u(1)];
        Lagrangian { expr: 0.5 * metric.inner(&uu, &uu), m: 0.0, name: "|u|^2/2".into() }
    }

    /// `k − m ‖u‖`, whose extremals are geodesic circles.
    pub fn geodesic_circle(metric: &Metric, m: f64) -> Lagrangian {
        let k = Lagrangian::frenet_curvature(metric);
        let len = Lagrangian::length(metric, m);
        Lagrangian { expr: k.expr + len.expr, m, name: format!("k-{m}|u|") }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The same function in flat jet coordinates, `w ↦ u̇ + Γ(u, u)`.
    pub fn flat_view(&self, gamma: &ChristoffelField) -> Expr {
        to_flat(&self.expr, gamma)
    }
}

/// Rewrites `w^i` in terms of `(x, u, u̇)`.
pub fn to_flat(e: &Expr, gamma: &ChristoffelField) -> Expr {
    let acc = covariant_acceleration(gamma);
    let map: HashMap<Arc<str>, Expr> = W_NAMES.iter().zip(acc).map(|(n, a)| (Arc::<str>::from(*n), a)).collect();
    e.substitute(&map)
}

/// The Euclidean Lagrangian `e_ij u^i u̇^j / ‖u‖³ − m ‖u‖` in flat jet coordinates.
pub fn flat_circle_lagrangian(m: f64) -> Expr {
    let (u0, u1) = (coord(0, 1), coord(1, 1));
    let (a0, a1) = (coord(0, 2), coord(1, 2));
    let n = (&u0 * &u0 + &u1 * &u1).sqrt();
    (&u0 * &a1 - &u1 * &a0) / n.powi(3) - m * n
}

/// The third-order source form characterised by Euclidean symmetry, straight
/// lines among its solutions and constant curvature along them:
///
/// `E_i = e_ij ü^j / ‖u‖³ − 3 (u̇·u) e_ij u̇^j / ‖u‖⁵ + m (‖u‖² u̇_i − (u̇·u) u_i) / ‖u‖³`.
pub fn planar_source_form(m: f64) -> Form1 {
    let uu = [coord(0, 1), coord(1, 1)];
    let a = [coord(0, 2), coord(1, 2)];
    let b = [coord(0, 3), coord(1, 3)];
    let n2 = &uu[0] * &uu[0] + &uu[1] * &uu[1];
    let n = n2.sqrt();
    let dot = &a[0] * &uu[0] + &a[1] * &uu[1];
    // e_0j v^j = v^1, e_1j v^j = −v^0
    let rot = |v: &[Expr; 2], i: usize| if i == 0 { v[1].clone() } else { -v[0].clone() };
    let comp = |i: usize| {
        rot(&b, i) / n.powi(3) - 3.0 * &dot * rot(&a, i) / n.powi(5) + m * (&n2 * &a[i] - &dot * &uu[i]) / n.powi(3)
    };
    Form1::source([comp(0), comp(1)])
}
