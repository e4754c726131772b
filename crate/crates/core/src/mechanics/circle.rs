use serde::{Deserialize, Serialize};

use crate::geometry::{CurveJet, PointGeometry};

use super::MechanicsError;

/// Which third-order equation drives `w′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// `w′ = −ν g(w, w) u / ‖u‖²`, the geodesic circle equation at constant
    /// speed; with `‖u‖ = 1` it is the familiar `w′ = −g(w, w) u`. Initial
    /// data should have `g(u, w) = 0`.
    Concircular,
    /// The Euler–Poisson equation of `k − m ‖u‖`.
    EulerPoisson,
}

/// Relative threshold on the determinant of the `w′ ↦ *w′` solve.
pub const SOLVE_GUARD: f64 = 1e-12;

/// Antisymmetric `S^{qi} = u^q w^i − u^i w^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinTensor {
    pub s01: f64,
}

impl SpinTensor {
    pub fn new(u: [f64; 2], w: [f64; 2]) -> SpinTensor {
        SpinTensor { s01: u[0] * w[1] - u[1] * w[0] }
    }

    pub fn component(&self, q: usize, i: usize) -> f64 {
        match (q, i) {
            (0, 1) => self.s01,
            (1, 0) => -self.s01,
            _ => 0.0,
        }
    }
}

pub fn spin_tensor(state: &CurveJet) -> SpinTensor {
    SpinTensor::new(state.u, state.w)
}

/// `π1_i R_{ljq}{}^i u^j u^q` with `π1 = *u / ‖u‖³`, the momentum of `k`.
pub fn spin_force(geo: &PointGeometry, state: &CurveJet) -> Result<[f64; 2], MechanicsError> {
    let n = geo.norm(state.u)?;
    let star_u = geo.hodge_star_covector(state.u);
    let pi1 = [star_u[0] / n.powi(3), star_u[1] / n.powi(3)];
    Ok(geo.riemann_contract(pi1, state.u, state.u))
}

/// The spin force through the spin tensor, `R_{ljqi} u^j S^{qi} / (‖u‖ ‖u ∧ u′‖)`,
/// with `S^{qi}` contracted over independent pairs `q < i` only.
pub fn spin_force_rewritten(geo: &PointGeometry, state: &CurveJet) -> Result<[f64; 2], MechanicsError> {
    let n = geo.norm(state.u)?;
    let area = geo.wedge_norm(state.u, state.w);
    let scale = geo.det.abs().sqrt() * ((state.u[0] * state.w[1]).abs() + (state.u[1] * state.w[0]).abs());
    if area.abs() <= 1e-12 * scale || area == 0.0 {
        return Err(MechanicsError::DegenerateSpin(area));
    }
    let s = spin_tensor(state);
    Ok(std::array::from_fn(|l| {
        let mut acc = 0.0;
        for j in 0..2 {
            acc += geo.riemann_lowered(l, j, 0, 1) * state.u[j] * s.component(0, 1);
        }
        acc / (n * area)
    }))
}

/// Difference of the two forms of the spin force.
pub fn spin_rewrite_residual(geo: &PointGeometry, state: &CurveJet) -> Result<[f64; 2], MechanicsError> {
    let a = spin_force(geo, state)?;
    let b = spin_force_rewritten(geo, state)?;
    Ok([a[0] - b[0], a[1] - b[1]])
}

/// `w′` solving the chosen equation at the state `(x, u, w)`.
///
/// For the Euler–Poisson form, with `N = ‖u‖`, `ν = sign g(u, u)`,
/// `*w′ = N³ (3ν (*w)(u·w)/N⁵ + m (ν N² w − (u·w) u)/N³ − F)`
/// where `F` is the spin force; `*` is then inverted explicitly.
pub fn geodesic_circle_accel(
    geo: &PointGeometry,
    state: &CurveJet,
    formulation: Formulation,
    m: f64,
) -> Result<[f64; 2], MechanicsError> {
    let n = geo.norm(state.u)?;
    let nu = geo.causal_sign(state.u);
    match formulation {
        Formulation::Concircular => {
            let c = nu * geo.inner(state.w, state.w) / (n * n);
            Ok([-c * state.u[0], -c * state.u[1]])
        }
        Formulation::EulerPoisson => {
            if m == 0.0 {
                return Err(MechanicsError::ZeroMass);
            }
            let uw = geo.inner(state.u, state.w);
            let star_w = geo.hodge_star_covector(state.w);
            let w_low = geo.lower(state.w);
            let u_low = geo.lower(state.u);
            let f = spin_force(geo, state)?;
            let n3 = n * n * n;
            let rhs: [f64; 2] = std::array::from_fn(|l| {
                3.0 * nu * star_w[l] * uw / (n * n) + m * (nu * n * n * w_low[l] - uw * u_low[l]) - n3 * f[l]
            });
            // *v = (−e v¹, e v⁰) has determinant e²
            let e = geo.area_element();
            let scale = geo.g.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
            if e * e <= SOLVE_GUARD * scale * scale {
                return Err(MechanicsError::SingularSolve { determinant: e * e, condition: scale * scale / (e * e) });
            }
            Ok(geo.hodge_star_inverse(rhs))
        }
    }
}
