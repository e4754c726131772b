use crate::expr::{Env, Expr, Tape};

use super::{GeometryError, Metric, Signature, NULL_THRESHOLD, VELOCITY_FLOOR};

const COORDS: [&str; 2] = ["x0", "x1"];

/// Symbolic `Γ^i_{lj}` as `gamma[i][l][j]`.
#[derive(Debug, Clone)]
pub struct ChristoffelField {
    pub gamma: [[[Expr; 2]; 2]; 2],
}

impl ChristoffelField {
    /// Levi-Civita: `Γ^i_{lj} = ½ g^{im} (∂_l g_{mj} + ∂_j g_{ml} − ∂_m g_{lj})`.
    pub fn levi_civita(metric: &Metric) -> ChristoffelField {
        let g = metric.components();
        let ginv = metric.inverse();
        let dg: Vec<[[Expr; 2]; 2]> =
            COORDS.iter().map(|c| [[g[0][0].diff(c), g[0][1].diff(c)], [g[1][0].diff(c), g[1][1].diff(c)]]).collect();
        let gamma = std::array::from_fn(|i| {
            std::array::from_fn(|l| {
                std::array::from_fn(|j| {
                    let mut acc = Expr::zero();
                    for m in 0..2 {
                        let bracket = &dg[l][m][j] + &dg[j][m][l] - &dg[m][l][j];
                        acc = acc + &ginv[i][m] * bracket;
                    }
                    0.5 * acc
                })
            })
        });
        ChristoffelField { gamma }
    }

    pub fn get(&self, i: usize, l: usize, j: usize) -> &Expr {
        &self.gamma[i][l][j]
    }

    /// `Γ^i_{lj} a^l b^j` for symbolic vectors.
    pub fn contract(&self, a: &[Expr; 2], b: &[Expr; 2]) -> [Expr; 2] {
        std::array::from_fn(|i| {
            let mut acc = Expr::zero();
            for l in 0..2 {
                for j in 0..2 {
                    acc = acc + &self.gamma[i][l][j] * &a[l] * &b[j];
                }
            }
            acc
        })
    }
}

/// Which sign convention to assemble the curvature tensor with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiemannConvention {
    /// `∂_j Γ^i_{lq} − ∂_l Γ^i_{jq} + Γ^i_{jm} Γ^m_{lq} − Γ^i_{lm} Γ^m_{jq}`,
    /// the one consistent with the curve commutator. Used everywhere.
    Pinned,
    /// The opposite overall sign. Only kept to show the commutator check fails.
    Candidate,
}

/// Symbolic `R_{ljq}{}^i` as `r[l][j][q][i]` and Gaussian curvature.
#[derive(Debug, Clone)]
pub struct RiemannField {
    pub r: [[[[Expr; 2]; 2]; 2]; 2],
    pub gaussian: Expr,
}

impl RiemannField {
    pub fn new(metric: &Metric, gamma: &ChristoffelField, convention: RiemannConvention) -> RiemannField {
        let sign = match convention {
            RiemannConvention::Pinned => 1.0,
            RiemannConvention::Candidate => -1.0,
        };
        let gm = &gamma.gamma;
        let r: [[[[Expr; 2]; 2]; 2]; 2] = std::array::from_fn(|l| {
            std::array::from_fn(|j| {
                std::array::from_fn(|q| {
                    std::array::from_fn(|i| {
                        let mut acc = gm[i][l][q].diff(COORDS[j]) - gm[i][j][q].diff(COORDS[l]);
                        for m in 0..2 {
                            acc = acc + &gm[i][j][m] * &gm[m][l][q] - &gm[i][l][m] * &gm[m][j][q];
                        }
                        sign * acc
                    })
                })
            })
        });
        // R_{0101} with the last index lowered equals K det g
        let g = metric.components();
        let lowered = &g[1][0] * &r[0][1][0][0] + &g[1][1] * &r[0][1][0][1];
        let gaussian = lowered / metric.determinant();
        RiemannField { r, gaussian }
    }

    pub fn get(&self, l: usize, j: usize, q: usize, i: usize) -> &Expr {
        &self.r[l][j][q][i]
    }
}

/// Metric and its derived fields, compiled for repeated numeric evaluation.
#[derive(Debug, Clone)]
pub struct Geometry {
    metric: Metric,
    christoffel: ChristoffelField,
    riemann: RiemannField,
    tape: Tape,
}

/// Numeric values of every derived field at one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointGeometry {
    pub x: [f64; 2],
    pub g: [[f64; 2]; 2],
    pub ginv: [[f64; 2]; 2],
    pub det: f64,
    /// `Γ^i_{lj}` as `gamma[i][l][j]`.
    pub gamma: [[[f64; 2]; 2]; 2],
    /// `∂_q Γ^i_{lj}` as `dgamma[q][i][l][j]`.
    pub dgamma: [[[[f64; 2]; 2]; 2]; 2],
    /// `R_{ljq}{}^i` as `riemann[l][j][q][i]`.
    pub riemann: [[[[f64; 2]; 2]; 2]; 2],
    pub gaussian: f64,
    pub signature: Signature,
    pub orientation: f64,
}

impl Geometry {
    pub fn new(metric: Metric) -> Geometry {
        Geometry::with_convention(metric, RiemannConvention::Pinned)
    }

    pub fn with_convention(metric: Metric, convention: RiemannConvention) -> Geometry {
        let christoffel = ChristoffelField::levi_civita(&metric);
        let riemann = RiemannField::new(&metric, &christoffel, convention);
        let mut outputs =
            vec![metric.component(0, 0).clone(), metric.component(0, 1).clone(), metric.component(1, 1).clone()];
        for i in 0..2 {
            for l in 0..2 {
                for j in 0..2 {
                    outputs.push(christoffel.gamma[i][l][j].clone());
                }
            }
        }
        for q in COORDS {
            for i in 0..2 {
                for l in 0..2 {
                    for j in 0..2 {
                        outputs.push(christoffel.gamma[i][l][j].diff(q));
                    }
                }
            }
        }
        for l in 0..2 {
            for j in 0..2 {
                for q in 0..2 {
                    for i in 0..2 {
                        outputs.push(riemann.r[l][j][q][i].clone());
                    }
                }
            }
        }
        outputs.push(riemann.gaussian.clone());
        let tape = Tape::compile(&outputs);
        Geometry { metric, christoffel, riemann, tape }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn christoffel(&self) -> &ChristoffelField {
        &self.christoffel
    }

    pub fn riemann(&self) -> &RiemannField {
        &self.riemann
    }

    /// Evaluates every field at `x`; fails where `det g` vanishes.
    pub fn at(&self, x: [f64; 2]) -> Result<PointGeometry, GeometryError> {
        let env = Env::from_pairs([("x0", x[0]), ("x1", x[1])]);
        let v = self.tape.eval(&env).map_err(|e| match e {
            crate::expr::EvalError::Domain(_) => GeometryError::Degenerate(x[0], x[1]),
            other => GeometryError::Eval(other),
        })?;
        let g = [[v[0], v[1]], [v[1], v[2]]];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let scale = (g[0][0] * g[1][1]).abs() + (g[0][1] * g[1][0]).abs();
        if !det.is_finite() || det.abs() <= 1e-14 * scale || scale == 0.0 {
            return Err(GeometryError::Degenerate(x[0], x[1]));
        }
        let ginv = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
        let mut it = v[3..].iter().copied();
        let mut next = || it.next().expect("tape layout");
        let gamma: [[[f64; 2]; 2]; 2] =
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| next())));
        let dgamma: [[[[f64; 2]; 2]; 2]; 2] =
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| next()))));
        let riemann: [[[[f64; 2]; 2]; 2]; 2] =
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| next()))));
        let gaussian = next();
        Ok(PointGeometry {
            x,
            g,
            ginv,
            det,
            gamma,
            dgamma,
            riemann,
            gaussian,
            signature: self.metric.signature(),
            orientation: self.metric.orientation(),
        })
    }

    /// Christoffel symbols at `x`.
    pub fn christoffel_at(&self, x: [f64; 2]) -> Result<[[[f64; 2]; 2]; 2], GeometryError> {
        Ok(self.at(x)?.gamma)
    }

    pub fn riemann_at(&self, x: [f64; 2]) -> Result<[[[[f64; 2]; 2]; 2]; 2], GeometryError> {
        Ok(self.at(x)?.riemann)
    }

    pub fn gaussian_curvature(&self, x: [f64; 2]) -> Result<f64, GeometryError> {
        Ok(self.at(x)?.gaussian)
    }

    /// Checks that the eigenvalue signs of `g(x)` match the declared signature.
    pub fn check_signature(&self, x: [f64; 2]) -> Result<(), GeometryError> {
        let p = self.at(x)?;
        let ok = match self.metric.signature() {
            Signature::Riemannian => p.det > 0.0 && p.g[0][0] > 0.0,
            Signature::Lorentzian => p.det < 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(GeometryError::SignatureMismatch { x0: x[0], x1: x[1], declared: self.metric.signature() })
        }
    }
}

impl PointGeometry {
    pub fn inner(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += self.g[i][j] * a[i] * b[j];
            }
        }
        acc
    }

    pub fn lower(&self, v: [f64; 2]) -> [f64; 2] {
        [self.g[0][0] * v[0] + self.g[0][1] * v[1], self.g[1][0] * v[0] + self.g[1][1] * v[1]]
    }

    pub fn raise(&self, c: [f64; 2]) -> [f64; 2] {
        [self.ginv[0][0] * c[0] + self.ginv[0][1] * c[1], self.ginv[1][0] * c[0] + self.ginv[1][1] * c[1]]
    }

    /// `√|g(v, v)|`, rejecting null vectors and vectors under the velocity floor.
    pub fn norm(&self, v: [f64; 2]) -> Result<f64, GeometryError> {
        let q = self.inner(v, v);
        let mut scale = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                scale += (self.g[i][j] * v[i] * v[j]).abs();
            }
        }
        let n = q.abs().sqrt();
        if q.abs() <= NULL_THRESHOLD * scale || n <= VELOCITY_FLOOR {
            return Err(GeometryError::NullVelocity(q.abs()));
        }
        Ok(n)
    }

    /// Sign of `g(v, v)`, the signature channel reported next to the norm.
    pub fn causal_sign(&self, v: [f64; 2]) -> f64 {
        self.inner(v, v).signum()
    }

    /// `σ √|det g|`.
    pub fn area_element(&self) -> f64 {
        self.orientation * self.det.abs().sqrt()
    }

    /// Signed area `‖a ∧ b‖`.
    pub fn wedge_norm(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        self.area_element() * (a[0] * b[1] - a[1] * b[0])
    }

    /// `(*v)_i = v^j e_ji`.
    pub fn hodge_star_covector(&self, v: [f64; 2]) -> [f64; 2] {
        let e = self.area_element();
        [-e * v[1], e * v[0]]
    }

    /// `*v` with its index raised by `g`.
    pub fn hodge_star(&self, v: [f64; 2]) -> [f64; 2] {
        self.raise(self.hodge_star_covector(v))
    }

    /// Solves `*v = c` for the vector `v`.
    pub fn hodge_star_inverse(&self, c: [f64; 2]) -> [f64; 2] {
        let e = self.area_element();
        [c[1] / e, -c[0] / e]
    }

    /// `Γ^i_{lj} a^l b^j`.
    pub fn gamma_contract(&self, a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
        std::array::from_fn(|i| {
            let mut acc = 0.0;
            for l in 0..2 {
                for j in 0..2 {
                    acc += self.gamma[i][l][j] * a[l] * b[j];
                }
            }
            acc
        })
    }

    /// `∂_q Γ^i_{lj} c^q a^l b^j`.
    pub fn dgamma_contract(&self, c: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
        std::array::from_fn(|i| {
            let mut acc = 0.0;
            for q in 0..2 {
                for l in 0..2 {
                    for j in 0..2 {
                        acc += self.dgamma[q][i][l][j] * c[q] * a[l] * b[j];
                    }
                }
            }
            acc
        })
    }

    /// The covector `σ_i R_{ljq}{}^i a^j b^q` (free index `l`).
    pub fn riemann_contract(&self, sigma: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
        std::array::from_fn(|l| {
            let mut acc = 0.0;
            for j in 0..2 {
                for q in 0..2 {
                    for i in 0..2 {
                        acc += sigma[i] * self.riemann[l][j][q][i] * a[j] * b[q];
                    }
                }
            }
            acc
        })
    }

    /// `R_{ljqi}`, last index lowered.
    pub fn riemann_lowered(&self, l: usize, j: usize, q: usize, i: usize) -> f64 {
        (0..2).map(|m| self.g[i][m] * self.riemann[l][j][q][m]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn flat_has_no_connection() {
        let geo = Geometry::new(Metric::flat());
        let p = geo.at([0.3, -1.2]).unwrap();
        assert!(p.gamma.iter().flatten().flatten().all(|&v| v == 0.0));
        assert!(p.riemann.iter().flatten().flatten().flatten().all(|&v| v == 0.0));
        assert_eq!(p.gaussian, 0.0);
    }

    #[test]
    fn unit_sphere_christoffels() {
        let p = Geometry::new(Metric::sphere(1.0)).at([FRAC_PI_4, 0.3]).unwrap();
        assert!((p.gamma[0][1][1] + 0.5).abs() < 1e-15);
        assert!((p.gamma[1][0][1] - 1.0).abs() < 1e-15);
        assert!((p.gamma[1][1][0] - 1.0).abs() < 1e-15);
        assert_eq!(p.gamma[0][0][0], 0.0);
    }

    #[test]
    fn polar_christoffels() {
        let p = Geometry::new(Metric::polar_flat()).at([2.0, 0.7]).unwrap();
        assert_eq!(p.gamma[0][1][1], -2.0);
        assert_eq!(p.gamma[1][0][1], 0.5);
        assert!(p.gaussian.abs() < 1e-15);
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let geo = Geometry::new(Metric::sphere(1.0));
        assert!(matches!(geo.at([0.0, 1.0]), Err(GeometryError::Degenerate(..))));
        let hyp = Geometry::new(Metric::hyperbolic());
        assert!(matches!(hyp.at([0.0, 0.0]), Err(GeometryError::Degenerate(..))));
    }

    #[test]
    fn signature_checks() {
        assert!(Geometry::new(Metric::flat()).check_signature([0.0, 0.0]).is_ok());
        assert!(Geometry::new(Metric::lorentz_flat()).check_signature([0.0, 0.0]).is_ok());
        let wrong = Metric::new(Expr::constant(-1.0), Expr::zero(), Expr::one(), Signature::Riemannian);
        assert!(matches!(
            Geometry::new(wrong).check_signature([0.0, 0.0]),
            Err(GeometryError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn builtins_resolve() {
        for name in ["flat", "polar-flat", "sphere", "sphere(2.5)", "hyperbolic", "lorentz-flat"] {
            assert!(Metric::builtin(name).is_ok(), "{name}");
        }
        assert!(Metric::builtin("torus").is_err());
        assert!(Metric::builtin("sphere(-1)").is_err());
        let k = Geometry::new(Metric::builtin("sphere(2)").unwrap()).gaussian_curvature([1.0, 0.0]).unwrap();
        assert!((k - 0.25).abs() < 1e-14);
    }

    #[test]
    fn flat_star_and_wedge() {
        let p = Geometry::new(Metric::flat()).at([0.0, 0.0]).unwrap();
        assert_eq!(p.wedge_norm([1.0, 0.0], [0.0, 1.0]), 1.0);
        assert_eq!(p.hodge_star([1.0, 0.0]), [0.0, 1.0]);
        let flipped = Geometry::new(Metric::flat().with_orientation(-1.0)).at([0.0, 0.0]).unwrap();
        assert_eq!(flipped.hodge_star([1.0, 0.0]), [0.0, -1.0]);
    }

    #[test]
    fn null_vectors_rejected() {
        let p = Geometry::new(Metric::lorentz_flat()).at([0.0, 0.0]).unwrap();
        assert!(p.norm([1.0, 1.0]).is_err());
        assert_eq!(p.norm([0.0, 2.0]).unwrap(), 2.0);
        assert_eq!(p.causal_sign([1.0, 0.0]), -1.0);
        let f = Geometry::new(Metric::flat()).at([0.0, 0.0]).unwrap();
        assert!(f.norm([1e-12, 0.0]).is_err());
    }
}
