use crate::expr::Expr;
use crate::jet::{zero_check, Form1, JetForm, JetPoint, JetSpace, JetVar, ResidualReport, Tolerance};

use super::curve::{covariant_acceleration, velocity};
use super::{ChristoffelField, GeometryError, Metric, RiemannConvention, RiemannField};

/// A vector-valued form `Ω^i`, one [`Form1`] per component.
pub type VectorForm = [Form1; 2];

fn dx(i: usize) -> JetVar {
    JetVar::new(i, 0)
}

/// `Ω′^i = d_T Ω^i + Γ^i_{lj} u^l Ω^j`.
fn prime(omega: &VectorForm, gamma: &ChristoffelField, jet: &JetSpace) -> Result<VectorForm, GeometryError> {
    let uu = velocity();
    let mut out = [omega[0].total_derivative(jet)?, omega[1].total_derivative(jet)?];
    for (i, slot) in out.iter_mut().enumerate() {
        for l in 0..2 {
            for j in 0..2 {
                let c = gamma.get(i, l, j) * &uu[l];
                if !c.is_zero() {
                    *slot = slot.plus(&omega[j].times(&c));
                }
            }
        }
    }
    Ok(out)
}

/// `Dξ^i = dξ^i + Γ^i_{lj} ξ^j dx^l`.
fn covariant_differential(xi: &[Expr; 2], gamma: &ChristoffelField) -> VectorForm {
    std::array::from_fn(|i| {
        let mut f = Form1::exact(&xi[i]);
        for l in 0..2 {
            let mut c = Expr::zero();
            for j in 0..2 {
                c = c + gamma.get(i, l, j) * &xi[j];
            }
            f.add_term(dx(l), c);
        }
        f
    })
}

fn labelled(form: &VectorForm) -> Vec<(String, Expr)> {
    let mut out = Vec::new();
    for (i, f) in form.iter().enumerate() {
        for (label, c) in f.labelled() {
            out.push((format!("{i}:{label}"), c));
        }
    }
    out
}

/// Components of `(Du)′ − D(u′) − R_{ljq}{}^i u^j u^q dx^l`.
pub fn commutator_residual_forms(
    metric: &Metric,
    convention: RiemannConvention,
    jet: &JetSpace,
) -> Result<VectorForm, GeometryError> {
    let gamma = ChristoffelField::levi_civita(metric);
    let riemann = RiemannField::new(metric, &gamma, convention);
    let uu = velocity();
    let lhs = prime(&covariant_differential(&uu, &gamma), &gamma, jet)?;
    let rhs = covariant_differential(&covariant_acceleration(&gamma), &gamma);
    Ok(std::array::from_fn(|i| {
        let mut curvature = Form1::new();
        for l in 0..2 {
            let mut c = Expr::zero();
            for j in 0..2 {
                for q in 0..2 {
                    c = c + riemann.get(l, j, q, i) * &uu[j] * &uu[q];
                }
            }
            curvature.add_term(dx(l), c);
        }
        lhs[i].minus(&rhs[i]).minus(&curvature)
    }))
}

/// Components of `(dx)′ − Du`.
pub fn first_order_commutator_forms(metric: &Metric, jet: &JetSpace) -> Result<VectorForm, GeometryError> {
    let gamma = ChristoffelField::levi_civita(metric);
    let base: VectorForm = [Form1::from_terms([(dx(0), Expr::one())]), Form1::from_terms([(dx(1), Expr::one())])];
    let lhs = prime(&base, &gamma, jet)?;
    let rhs = covariant_differential(&velocity(), &gamma);
    Ok([lhs[0].minus(&rhs[0]), lhs[1].minus(&rhs[1])])
}

/// Evaluates the curvature commutator residual at the given jet points.
///
/// Only [`RiemannConvention::Pinned`] passes on curved metrics.
pub fn commutator_check(
    metric: &Metric,
    convention: RiemannConvention,
    points: &[JetPoint],
    tolerance: Tolerance,
) -> Result<ResidualReport, GeometryError> {
    let forms = commutator_residual_forms(metric, convention, &JetSpace::default())?;
    Ok(zero_check(&labelled(&forms), points, tolerance)?)
}

/// Evaluates `(dx)′ − Du` at the given jet points.
pub fn first_order_commutator_check(
    metric: &Metric,
    points: &[JetPoint],
    tolerance: Tolerance,
) -> Result<ResidualReport, GeometryError> {
    let forms = first_order_commutator_forms(metric, &JetSpace::default())?;
    Ok(zero_check(&labelled(&forms), points, tolerance)?)
}
