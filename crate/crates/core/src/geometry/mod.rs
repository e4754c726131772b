//! Metric geometry of a surface: Levi-Civita connection, curvature, area form
//! and the covariant calculus along curves.
//!
//! # Index conventions
//!
//! * `Γ^i_{lj}` is stored as `gamma[i][l][j]`.
//! * The Riemann tensor `R_{ljq}{}^i` is stored as `riemann[l][j][q][i]` and is
//!   fixed by requiring the commutator of covariant differentiation along a
//!   curve to read `(Du)′ = D(u′) + R_{ljq}{}^i u^j u^q dx^l`:
//!
//!   `R_{ljq}{}^i = ∂_j Γ^i_{lq} − ∂_l Γ^i_{jq} + Γ^i_{jm} Γ^m_{lq} − Γ^i_{lm} Γ^m_{jq}`.
//!
//!   This is the negative of the textbook-looking candidate
//!   `∂_l Γ^i_{jq} − ∂_j Γ^i_{lq} + …`, which [`RiemannConvention::Candidate`]
//!   keeps around so the commutator check can demonstrate the difference.
//!   With this choice `R_{ljqi} = K (g_{lq} g_{ji} − g_{li} g_{jq})`, so the unit
//!   sphere has `K = +1`.
//! * The area form is `e_ij = σ √|det g| ε_ij` with `ε_01 = 1`, the Hodge star
//!   of a vector is the covector `(*v)_i = v^j e_ji`, and
//!   `‖a ∧ b‖ = e_ij a^i b^j = ⟨*a, b⟩`. In the Euclidean plane with `σ = +1`,
//!   `*` rotates by +90°.

mod commutator;
mod curve;
mod fields;
mod metric;

use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::jet::JetError;

pub use commutator::{
    commutator_check, commutator_residual_forms, first_order_commutator_check, first_order_commutator_forms, VectorForm,
};
pub use curve::{covariant_acceleration, covariant_prime_covector, covariant_prime_vector, CurveJet};
pub use fields::{ChristoffelField, Geometry, PointGeometry, RiemannConvention, RiemannField};
pub use metric::{base_coords, Metric, Signature};

/// Velocity floor below which norms are not divided by.
pub const VELOCITY_FLOOR: f64 = 1e-9;

/// Relative threshold for `|g(v, v)|` below which a vector counts as null.
pub const NULL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate metric at ({0}, {1})")]
    Degenerate(f64, f64),
    #[error("metric signature at ({x0}, {x1}) does not match declared {declared}")]
    SignatureMismatch { x0: f64, x1: f64, declared: Signature },
    #[error("velocity is null or below the floor (|g(u,u)| = {0:e})")]
    NullVelocity(f64),
    #[error("unknown builtin metric `{0}`")]
    UnknownBuiltin(String),
    #[error("metric component: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
}
