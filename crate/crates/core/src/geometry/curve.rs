use crate::expr::Expr;
use crate::jet::{u, JetError, JetPoint, JetSpace, JetVar};

use super::{ChristoffelField, GeometryError, PointGeometry};

/// Curve data in covariant form: position, velocity `u`, covariant
/// acceleration `w = u′` and optionally `w′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub x: [f64; 2],
    pub u: [f64; 2],
    pub w: [f64; 2],
    pub w_prime: Option<[f64; 2]>,
}

impl CurveJet {
    pub fn new(x: [f64; 2], u: [f64; 2], w: [f64; 2]) -> CurveJet {
        let jet = CurveJet { x, u, w, w_prime: None };
        assert!(jet.is_finite(), "curve jet entries must be finite");
        jet
    }

    pub fn with_w_prime(mut self, w_prime: [f64; 2]) -> CurveJet {
        assert!(w_prime.iter().all(|v| v.is_finite()), "curve jet entries must be finite");
        self.w_prime = Some(w_prime);
        self
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.u).chain(&self.w).chain(self.w_prime.iter().flatten()).all(|v| v.is_finite())
    }

    /// Reads `x, u, u̇` (and `ü` when present) from a flat jet point.
    ///
    /// `w = u̇ + Γ(u, u)` and `w′ = ü + ∂Γ(u; u, u) + 2Γ(u̇, u) + Γ(u, w)`.
    pub fn from_flat(point: &JetPoint, geo: &PointGeometry) -> CurveJet {
        let x = point.order(0);
        let u = point.order(1);
        let udot = point.order(2);
        let w = add(udot, geo.gamma_contract(u, u));
        let w_prime = (point.max_order() >= 3).then(|| {
            let uddot = point.order(3);
            let mut out = add(uddot, geo.dgamma_contract(u, u, u));
            out = add(out, scale(2.0, geo.gamma_contract(udot, u)));
            add(out, geo.gamma_contract(u, w))
        });
        CurveJet { x, u, w, w_prime }
    }

    /// The flat jet point with orders up to `max_order`; orders beyond the
    /// available curve data are zero.
    pub fn to_flat(&self, geo: &PointGeometry, max_order: usize) -> JetPoint {
        let udot = sub(self.w, geo.gamma_contract(self.u, self.u));
        let mut orders = vec![[0.0; 2]; max_order.max(2) + 1];
        orders[0] = self.x;
        orders[1] = self.u;
        orders[2] = udot;
        if let (Some(wp), true) = (self.w_prime, max_order >= 3) {
            let mut uddot = sub(wp, geo.dgamma_contract(self.u, self.u, self.u));
            uddot = sub(uddot, scale(2.0, geo.gamma_contract(udot, self.u)));
            orders[3] = sub(uddot, geo.gamma_contract(self.u, self.w));
        }
        JetPoint::new(orders)
    }

    /// `‖u‖`, rejecting null or vanishing velocities.
    pub fn speed(&self, geo: &PointGeometry) -> Result<f64, GeometryError> {
        geo.norm(self.u)
    }

    /// Frenet curvature `k = ‖u ∧ u′‖ / ‖u‖³`.
    pub fn frenet_curvature(&self, geo: &PointGeometry) -> Result<f64, GeometryError> {
        let n = self.speed(geo)?;
        Ok(geo.wedge_norm(self.u, self.w) / (n * n * n))
    }

    /// The single independent component `S⁰¹ = u⁰w¹ − u¹w⁰` of the spin tensor.
    pub fn spin(&self) -> f64 {
        self.u[0] * self.w[1] - self.u[1] * self.w[0]
    }
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale(c: f64, a: [f64; 2]) -> [f64; 2] {
    [c * a[0], c * a[1]]
}

/// Velocity `u^i` as jet expressions.
pub(crate) fn velocity() -> [Expr; 2] {
    [u(0), u(1)]
}

/// `ξ′^i = d_T ξ^i + Γ^i_{lj} u^l ξ^j` for components given over jet variables.
pub fn covariant_prime_vector(xi: &[Expr; 2], gamma: &ChristoffelField, jet: &JetSpace) -> Result<[Expr; 2], JetError> {
    let conn = gamma.contract(&velocity(), xi);
    Ok([jet.total_derivative(&xi[0])? + &conn[0], jet.total_derivative(&xi[1])? + &conn[1]])
}

/// `σ′_i = d_T σ_i − Γ^l_{ji} u^j σ_l`.
pub fn covariant_prime_covector(
    sigma: &[Expr; 2],
    gamma: &ChristoffelField,
    jet: &JetSpace,
) -> Result<[Expr; 2], JetError> {
    let uu = velocity();
    let mut out = [jet.total_derivative(&sigma[0])?, jet.total_derivative(&sigma[1])?];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut corr = Expr::zero();
        for l in 0..2 {
            for j in 0..2 {
                corr = corr + gamma.get(l, j, i) * &uu[j] * &sigma[l];
            }
        }
        *slot = &*slot - corr;
    }
    Ok(out)
}

/// Covariant acceleration `w^i = u̇^i + Γ^i_{lj} u^l u^j` over jet variables.
pub fn covariant_acceleration(gamma: &ChristoffelField) -> [Expr; 2] {
    let uu = velocity();
    let conn = gamma.contract(&uu, &uu);
    let udot = |i| JetVar::new(i, 2).expr();
    [udot(0) + &conn[0], udot(1) + &conn[1]]
}
