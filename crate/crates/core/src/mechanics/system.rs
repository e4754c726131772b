use crate::expr::{Expr, Tape};
use crate::geometry::{covariant_prime_covector, CurveJet, Geometry, Metric};
use crate::jet::{coord, zeta1, zeta2, Form1, JetForm, JetPoint, JetSpace, JetVar};

use super::lagrangian::{to_flat, W_NAMES};
use super::{Lagrangian, MechanicsError};

/// Which construction produced a pair of momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `p1 = ∂L/∂u̇`, `p = ∂L/∂u − d_T p1`.
    Flat,
    /// `π1 = ∂L/∂u′`, `π = ∂L/∂u − π1′`.
    Covariant,
}

/// Generalized momenta as lower-index covectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momenta {
    pub p1: [f64; 2],
    pub p: [f64; 2],
    pub frame: Frame,
}

/// Symbolic pieces of the variational calculus of one Lagrangian, all over
/// flat jet coordinates.
#[derive(Debug, Clone)]
pub struct Symbols {
    pub flat_lagrangian: Expr,
    /// Coefficients of `dx^i` in `δL`.
    pub delta: [Expr; 2],
    pub p1: [Expr; 2],
    pub p: [Expr; 2],
    pub pi1: [Expr; 2],
    pub pi: [Expr; 2],
    /// `π1_i R_{ljq}{}^i u^j u^q`.
    pub spin_force: [Expr; 2],
    /// `∂L/∂x^l − ∂L/∂u^i Γ^i_{lj} u^j − ∂L/∂u′^i Γ^i_{lj} u′^j`.
    pub covariant_gradient: [Expr; 2],
    /// Covariant Euler–Poisson expression, left side minus right side.
    pub euler_poisson: [Expr; 2],
    /// `p1 · u̇ + p · u − L`.
    pub hamilton_legendre: Expr,
    /// `ζ₁L − d_T ζ₂L − L`.
    pub hamilton_zeta: Expr,
}

/// Numeric values of every [`Symbols`] entry at one jet point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Values {
    pub lagrangian: f64,
    pub delta: [f64; 2],
    pub p1: [f64; 2],
    pub p: [f64; 2],
    pub pi1: [f64; 2],
    pub pi: [f64; 2],
    pub spin_force: [f64; 2],
    pub covariant_gradient: [f64; 2],
    pub euler_poisson: [f64; 2],
    pub hamilton_legendre: f64,
    pub hamilton_zeta: f64,
}

/// A Lagrangian on a metric, differentiated once and compiled for evaluation.
#[derive(Debug, Clone)]
pub struct VariationalSystem {
    geometry: Geometry,
    lagrangian: Lagrangian,
    jet: JetSpace,
    symbols: Symbols,
    tape: Tape,
    hamilton_tape: Tape,
}

fn pair<F: FnMut(usize) -> Result<Expr, MechanicsError>>(mut f: F) -> Result<[Expr; 2], MechanicsError> {
    Ok([f(0)?, f(1)?])
}

impl VariationalSystem {
    pub fn new(metric: Metric, lagrangian: Lagrangian) -> Result<VariationalSystem, MechanicsError> {
        let geometry = Geometry::new(metric);
        let jet = JetSpace::default();
        let gamma = geometry.christoffel().clone();
        let riemann = geometry.riemann().clone();
        let cov = lagrangian.expr();
        let flat = lagrangian.flat_view(&gamma);

        let delta_form = jet.lagrange_derivative(&flat)?;
        let delta = [delta_form.coeff(JetVar::new(0, 0)), delta_form.coeff(JetVar::new(1, 0))];

        let p1 = [flat.diff(&JetVar::new(0, 2).name()), flat.diff(&JetVar::new(1, 2).name())];
        let p = pair(|i| Ok(flat.diff(&JetVar::new(i, 1).name()) - jet.total_derivative(&p1[i])?))?;

        let pi1 = [to_flat(&cov.diff(W_NAMES[0]), &gamma), to_flat(&cov.diff(W_NAMES[1]), &gamma)];
        let du = [
            to_flat(&cov.diff(&JetVar::new(0, 1).name()), &gamma),
            to_flat(&cov.diff(&JetVar::new(1, 1).name()), &gamma),
        ];
        let pi1_prime = covariant_prime_covector(&pi1, &gamma, &jet)?;
        let pi = [&du[0] - &pi1_prime[0], &du[1] - &pi1_prime[1]];
        let pi_prime = covariant_prime_covector(&pi, &gamma, &jet)?;

        let uu = [coord(0, 1), coord(1, 1)];
        let ww = crate::geometry::covariant_acceleration(&gamma);
        let spin_force: [Expr; 2] = std::array::from_fn(|l| {
            let mut acc = Expr::zero();
            for j in 0..2 {
                for q in 0..2 {
                    for i in 0..2 {
                        acc = acc + &pi1[i] * riemann.get(l, j, q, i) * &uu[j] * &uu[q];
                    }
                }
            }
            acc
        });
        let covariant_gradient: [Expr; 2] = std::array::from_fn(|l| {
            let mut acc = to_flat(&cov.diff(&JetVar::new(l, 0).name()), &gamma);
            for i in 0..2 {
                for j in 0..2 {
                    let g = gamma.get(i, l, j);
                    acc = acc - &du[i] * g * &uu[j] - &pi1[i] * g * &ww[j];
                }
            }
            acc
        });
        let euler_poisson: [Expr; 2] = std::array::from_fn(|l| &pi_prime[l] + &spin_force[l] - &covariant_gradient[l]);

        let udot = [coord(0, 2), coord(1, 2)];
        let hamilton_legendre = &p1[0] * &udot[0] + &p1[1] * &udot[1] + &p[0] * &uu[0] + &p[1] * &uu[1] - &flat;
        let hamilton_zeta = zeta1(&flat) - jet.total_derivative(&zeta2(&flat))? - &flat;

        let symbols = Symbols {
            flat_lagrangian: flat,
            delta,
            p1,
            p,
            pi1,
            pi,
            spin_force,
            covariant_gradient,
            euler_poisson,
            hamilton_legendre,
            hamilton_zeta,
        };
        let tape = Tape::compile(&symbols.outputs());
        let hamilton_tape = Tape::compile(&[symbols.hamilton_legendre.clone(), symbols.hamilton_zeta.clone()]);
        Ok(VariationalSystem { geometry, lagrangian, jet, symbols, tape, hamilton_tape })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn lagrangian(&self) -> &Lagrangian {
        &self.lagrangian
    }

    pub fn jet_space(&self) -> &JetSpace {
        &self.jet
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    /// Evaluates every symbolic piece at a flat jet point of order ≥ 4.
    /// Orders missing from the point are read as zero.
    pub fn evaluate(&self, point: &JetPoint) -> Result<Values, MechanicsError> {
        let vars = self.tape.bind(|n| point.lookup(n).or_else(|| JetVar::from_name(n).map(|_| 0.0)))?;
        let v = self.tape.eval_bound(&vars)?;
        let mut it = v.into_iter();
        let mut one = || it.next().expect("tape layout");
        let mut two = || [one(), one()];
        Ok(Values {
            lagrangian: two()[0],
            delta: two(),
            p1: two(),
            p: two(),
            pi1: two(),
            pi: two(),
            spin_force: two(),
            covariant_gradient: two(),
            euler_poisson: two(),
            hamilton_legendre: two()[0],
            hamilton_zeta: two()[0],
        })
    }

    /// The flat jet point of a curve jet carrying `w′`.
    pub fn flat_point(&self, state: &CurveJet) -> Result<JetPoint, MechanicsError> {
        if state.w_prime.is_none() {
            return Err(MechanicsError::MissingThirdOrder);
        }
        let pg = self.geometry.at(state.x)?;
        Ok(state.to_flat(&pg, 4))
    }

    pub fn momenta_flat(&self, point: &JetPoint) -> Result<Momenta, MechanicsError> {
        let v = self.evaluate(point)?;
        Ok(Momenta { p1: v.p1, p: v.p, frame: Frame::Flat })
    }

    pub fn momenta_covariant(&self, state: &CurveJet) -> Result<Momenta, MechanicsError> {
        let v = self.evaluate(&self.flat_point(state)?)?;
        Ok(Momenta { p1: v.pi1, p: v.pi, frame: Frame::Covariant })
    }

    /// The Hamilton function; the Legendre form and the fundamental-field form
    /// must agree to `1e-10` relative to their size.
    pub fn hamilton(&self, point: &JetPoint) -> Result<f64, MechanicsError> {
        let vars = self.hamilton_tape.bind(|n| point.lookup(n).or_else(|| JetVar::from_name(n).map(|_| 0.0)))?;
        let v = self.hamilton_tape.eval_bound(&vars)?;
        let (legendre, zeta) = (v[0], v[1]);
        if (legendre - zeta).abs() > 1e-10 * legendre.abs().max(1.0) {
            return Err(MechanicsError::HamiltonMismatch { legendre, zeta });
        }
        Ok(legendre)
    }

    /// Covariant Euler–Poisson covector, left side minus right side.
    pub fn euler_poisson_covariant(&self, state: &CurveJet) -> Result<[f64; 2], MechanicsError> {
        let pg = self.geometry.at(state.x)?;
        pg.norm(state.u)?;
        Ok(self.evaluate(&self.flat_point(state)?)?.euler_poisson)
    }

    /// `p1 du + p dx − (ι₁dL − ½ d_T ι₂dL)`.
    pub fn momenta_relation_flat(&self) -> Result<Form1, MechanicsError> {
        let s = &self.symbols;
        let lhs = Form1::from_terms([
            (JetVar::new(0, 1), s.p1[0].clone()),
            (JetVar::new(1, 1), s.p1[1].clone()),
            (JetVar::new(0, 0), s.p[0].clone()),
            (JetVar::new(1, 0), s.p[1].clone()),
        ]);
        Ok(lhs.minus(&self.momenta_relation_rhs()?))
    }

    /// `π1 Du + π dx − (ι₁dL − ½ (ι₂dL)′)`.
    pub fn momenta_relation_covariant(&self) -> Result<Form1, MechanicsError> {
        let s = &self.symbols;
        let gamma = self.geometry.christoffel();
        let mut lhs = Form1::new();
        for i in 0..2 {
            lhs.add_term(JetVar::new(i, 1), s.pi1[i].clone());
            lhs.add_term(JetVar::new(i, 0), s.pi[i].clone());
            // Du^i = du^i + Γ^i_{lj} u^j dx^l
            for l in 0..2 {
                for j in 0..2 {
                    lhs.add_term(JetVar::new(l, 0), &s.pi1[i] * gamma.get(i, l, j) * coord(j, 1));
                }
            }
        }
        Ok(lhs.minus(&self.momenta_relation_rhs()?))
    }

    fn momenta_relation_rhs(&self) -> Result<Form1, MechanicsError> {
        let dl = Form1::exact(&self.symbols.flat_lagrangian);
        let half_prime = dl.iota(2).total_derivative(&self.jet)?.scaled(0.5);
        Ok(dl.iota(1).minus(&half_prime))
    }
}

impl Symbols {
    fn outputs(&self) -> Vec<Expr> {
        let mut out = vec![self.flat_lagrangian.clone(), Expr::zero()];
        for v in [
            &self.delta,
            &self.p1,
            &self.p,
            &self.pi1,
            &self.pi,
            &self.spin_force,
            &self.covariant_gradient,
            &self.euler_poisson,
        ] {
            out.extend(v.iter().cloned());
        }
        out.extend([self.hamilton_legendre.clone(), Expr::zero(), self.hamilton_zeta.clone(), Expr::zero()]);
        out
    }
}
