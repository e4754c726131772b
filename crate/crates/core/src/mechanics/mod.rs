//! Momenta, Hamilton function and the covariant Euler–Poisson equation of
//! second-order Lagrangians, specialised to `L = k − m ‖u‖`.
//!
//! Momenta are lower-index covectors. The Euler–Poisson expression is reported
//! as left side minus right side of
//! `π′_l + π1_i R_{ljq}{}^i u^j u^q = ∂L/∂x^l − ∂L/∂u^i Γ^i_{lj} u^j − ∂L/∂u′^i Γ^i_{lj} u′^j`,
//! which equals `−δL` in any chart.

mod circle;
mod lagrangian;
mod system;

use thiserror::Error;

use crate::expr::EvalError;
use crate::geometry::GeometryError;
use crate::jet::JetError;

pub use circle::{
    geodesic_circle_accel, spin_force, spin_force_rewritten, spin_rewrite_residual, spin_tensor, Formulation,
    SpinTensor, SOLVE_GUARD,
};
pub use lagrangian::{flat_circle_lagrangian, planar_source_form, to_flat, w, Lagrangian, W_NAMES};
pub use system::{Frame, Momenta, Symbols, Values, VariationalSystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MechanicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("curve jet lacks w′, needed for third-order quantities")]
    MissingThirdOrder,
    #[error("Hamilton function forms disagree: {legendre} vs {zeta}")]
    HamiltonMismatch { legendre: f64, zeta: f64 },
    #[error("singular w′ solve (determinant {determinant:e}, condition {condition:e})")]
    SingularSolve { determinant: f64, condition: f64 },
    #[error("the Euler–Poisson formulation needs m ≠ 0")]
    ZeroMass,
    #[error("u ∧ u′ is degenerate ({0:e})")]
    DegenerateSpin(f64),
}
