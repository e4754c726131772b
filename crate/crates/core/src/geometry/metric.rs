use std::fmt;

use crate::expr::{parse, Expr};

use super::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Riemannian,
    Lorentzian,
}

impl Signature {
    /// Sign of `det g` for this signature.
    pub fn det_sign(self) -> f64 {
        match self {
            Signature::Riemannian => 1.0,
            Signature::Lorentzian => -1.0,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::Riemannian => "riemannian",
            Signature::Lorentzian => "lorentzian",
        })
    }
}

/// A symmetric 2×2 metric `g_ij(x0, x1)` with signature and orientation.
#[derive(Debug, Clone)]
pub struct Metric {
    g: [[Expr; 2]; 2],
    signature: Signature,
    orientation: f64,
    name: String,
}

/// Coordinate expressions `x0`, `x1`.
pub fn base_coords() -> [Expr; 2] {
    [Expr::var("x0"), Expr::var("x1")]
}

impl Metric {
    /// Symmetric by construction: `g01` fills both off-diagonal slots.
    pub fn new(g00: Expr, g01: Expr, g11: Expr, signature: Signature) -> Metric {
        Metric { g: [[g00, g01.clone()], [g01, g11]], signature, orientation: 1.0, name: "explicit".into() }
    }

    pub fn from_strings(g00: &str, g01: &str, g11: &str, signature: Signature) -> Result<Metric, GeometryError> {
        Ok(Metric::new(parse(g00)?, parse(g01)?, parse(g11)?, signature))
    }

    pub fn with_orientation(mut self, orientation: f64) -> Metric {
        assert!(orientation == 1.0 || orientation == -1.0, "orientation must be ±1");
        self.orientation = orientation;
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Metric {
        self.name = name.into();
        self
    }

    pub fn flat() -> Metric {
        Metric::new(Expr::one(), Expr::zero(), Expr::one(), Signature::Riemannian).named("flat")
    }

    /// Euclidean plane in polar coordinates `(r, φ)`.
    pub fn polar_flat() -> Metric {
        let r = Expr::var("x0");
        Metric::new(Expr::one(), Expr::zero(), r.powi(2), Signature::Riemannian).named("polar-flat")
    }

    /// Round sphere of radius `r`; `x0` is the polar angle, `x1` the azimuth.
    pub fn sphere(radius: f64) -> Metric {
        let r2 = radius * radius;
        let th = Expr::var("x0");
        Metric::new(Expr::constant(r2), Expr::zero(), r2 * th.sin().powi(2), Signature::Riemannian)
            .named(format!("sphere({radius})"))
    }

    /// Poincaré half-plane, curvature −1 for `x1 > 0`.
    pub fn hyperbolic() -> Metric {
        let c = 1.0 / Expr::var("x1").powi(2);
        Metric::new(c.clone(), Expr::zero(), c, Signature::Riemannian).named("hyperbolic")
    }

    /// Minkowski plane `diag(-1, 1)`, `x0` timelike.
    pub fn lorentz_flat() -> Metric {
        Metric::new(Expr::constant(-1.0), Expr::zero(), Expr::one(), Signature::Lorentzian).named("lorentz-flat")
    }

    /// `flat`, `polar-flat`, `sphere`, `sphere(r)`, `hyperbolic`, `lorentz-flat`.
    pub fn builtin(name: &str) -> Result<Metric, GeometryError> {
        let trimmed = name.trim();
        match trimmed {
            "flat" => return Ok(Metric::flat()),
            "polar-flat" => return Ok(Metric::polar_flat()),
            "sphere" => return Ok(Metric::sphere(1.0)),
            "hyperbolic" => return Ok(Metric::hyperbolic()),
            "lorentz-flat" => return Ok(Metric::lorentz_flat()),
            _ => {}
        }
        if let Some(arg) = trimmed.strip_prefix("sphere(").and_then(|s| s.strip_suffix(')')) {
            if let Ok(r) = arg.trim().parse::<f64>() {
                if r > 0.0 && r.is_finite() {
                    return Ok(Metric::sphere(r));
                }
            }
        }
        Err(GeometryError::UnknownBuiltin(name.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.g[i][j]
    }

    pub fn components(&self) -> &[[Expr; 2]; 2] {
        &self.g
    }

    pub fn determinant(&self) -> Expr {
        &self.g[0][0] * &self.g[1][1] - &self.g[0][1] * &self.g[1][0]
    }

    /// `g^{ij}` as explicit cofactor expressions.
    pub fn inverse(&self) -> [[Expr; 2]; 2] {
        let det = self.determinant();
        [[&self.g[1][1] / &det, -(&self.g[0][1] / &det)], [-(&self.g[1][0] / &det), &self.g[0][0] / &det]]
    }

    /// `σ √|det g|`, the coefficient of the area form `e_01`.
    pub fn area_element(&self) -> Expr {
        self.orientation * (self.signature.det_sign() * self.determinant()).sqrt()
    }

    /// `g(a, b)` for vectors given by component expressions.
    pub fn inner(&self, a: &[Expr; 2], b: &[Expr; 2]) -> Expr {
        let mut acc = Expr::zero();
        for i in 0..2 {
            for j in 0..2 {
                acc = acc + &self.g[i][j] * &a[i] * &b[j];
            }
        }
        acc
    }

    /// `‖v‖ = √|g(v, v)|`; the absolute value is only taken for lorentzian metrics.
    pub fn norm(&self, v: &[Expr; 2]) -> Expr {
        let q = self.inner(v, v);
        match self.signature {
            Signature::Riemannian => q.sqrt(),
            Signature::Lorentzian => q.abs().sqrt(),
        }
    }

    /// Signed area `‖a ∧ b‖ = σ √|det g| (a⁰b¹ − a¹b⁰)`.
    pub fn wedge(&self, a: &[Expr; 2], b: &[Expr; 2]) -> Expr {
        self.area_element() * (&a[0] * &b[1] - &a[1] * &b[0])
    }

    /// `g_ij v^j`.
    pub fn lower(&self, v: &[Expr; 2]) -> [Expr; 2] {
        [&self.g[0][0] * &v[0] + &self.g[0][1] * &v[1], &self.g[1][0] * &v[0] + &self.g[1][1] * &v[1]]
    }

    /// The covector `(*v)_i = v^j e_ji`.
    pub fn star_covector(&self, v: &[Expr; 2]) -> [Expr; 2] {
        let e = self.area_element();
        // e_10 = -e, e_01 = e
        [-(&e * &v[1]), &e * &v[0]]
    }
}
