use std::collections::BTreeMap;

use crate::expr::Expr;

use super::{JetError, JetSpace, JetVar};

/// Operations shared by 1- and 2-forms, enough to run the Lagrange derivative.
pub trait JetForm: Sized {
    /// The insertion derivation `ι_r`.
    fn iota(&self, r: usize) -> Self;
    /// The total derivative, acting on coefficients and basis covectors.
    fn total_derivative(&self, jet: &JetSpace) -> Result<Self, JetError>;
    fn scaled(&self, factor: f64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    /// Highest `k` among the basis covectors `dx_(k)` carrying a coefficient.
    fn max_basis_order(&self) -> usize;
}

/// `ι_r(dx_(k)) = k!/(k−r)! dx_(k−r)`, zero when `r > k`.
fn iota_basis(r: usize, v: JetVar) -> Option<(f64, JetVar)> {
    if r > v.order {
        return None;
    }
    let factor: f64 = ((v.order - r + 1)..=v.order).map(|j| j as f64).product();
    Some((factor, JetVar { order: v.order - r, index: v.index }))
}

/// A 1-form `Σ c_(i,k) dx_(k)^i`.
#[derive(Debug, Clone, Default)]
pub struct Form1 {
    coeffs: BTreeMap<JetVar, Expr>,
}

impl Form1 {
    pub fn new() -> Form1 {
        Form1::default()
    }

    /// Accumulates `coeff · dx_(k)^i`.
    pub fn add_term(&mut self, var: JetVar, coeff: Expr) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(var).or_insert_with(Expr::zero);
        *slot = &*slot + coeff;
    }

    pub fn from_terms<I: IntoIterator<Item = (JetVar, Expr)>>(terms: I) -> Form1 {
        let mut f = Form1::new();
        for (v, c) in terms {
            f.add_term(v, c);
        }
        f
    }

    /// A semibasic form `Σ E_i dx^i`.
    pub fn source(components: [Expr; 2]) -> Form1 {
        let [e0, e1] = components;
        Form1::from_terms([(JetVar::new(0, 0), e0), (JetVar::new(1, 0), e1)])
    }

    pub fn coeff(&self, var: JetVar) -> Expr {
        self.coeffs.get(&var).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetVar, &Expr)> {
        self.coeffs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The exterior derivative of a function.
    pub fn exact(f: &Expr) -> Form1 {
        Form1::from_terms(JetSpace::jet_variables(f).into_iter().map(|v| (v, f.diff(&v.name()))))
    }

    /// `d(Σ c_a dy^a) = Σ_a Σ_b ∂c_a/∂y^b dy^b ∧ dy^a`.
    pub fn exterior_d(&self) -> Form2 {
        let mut out = Form2::new();
        for (&a, c) in &self.coeffs {
            for b in JetSpace::jet_variables(c) {
                out.add_wedge(b, a, c.diff(&b.name()));
            }
        }
        out
    }

    /// The part along the base covectors `dx^i`.
    pub fn semibasic(&self) -> Form1 {
        Form1::from_terms(self.coeffs.iter().filter(|(v, _)| v.order == 0).map(|(&v, c)| (v, c.clone())))
    }

    /// True when only `dx^i` (order 0) covectors appear.
    pub fn is_source_form(&self) -> bool {
        self.coeffs.keys().all(|v| v.order == 0)
    }

    /// Labelled coefficients, `dx0_1` style.
    pub fn labelled(&self) -> Vec<(String, Expr)> {
        self.coeffs.iter().map(|(v, c)| (v.differential_label(), c.clone())).collect()
    }

    /// Multiplies every coefficient by a function.
    pub fn times(&self, f: &Expr) -> Form1 {
        Form1::from_terms(self.coeffs.iter().map(|(&v, c)| (v, c * f)))
    }

    pub fn minus(&self, other: &Form1) -> Form1 {
        self.plus(&other.scaled(-1.0))
    }
}

impl JetForm for Form1 {
    fn iota(&self, r: usize) -> Form1 {
        let mut out = Form1::new();
        for (&v, c) in &self.coeffs {
            if let Some((factor, lower)) = iota_basis(r, v) {
                out.add_term(lower, factor * c);
            }
        }
        out
    }

    fn total_derivative(&self, jet: &JetSpace) -> Result<Form1, JetError> {
        let mut out = Form1::new();
        for (&v, c) in &self.coeffs {
            out.add_term(v, jet.total_derivative(c)?);
            if v.order >= jet.max_order() {
                return Err(JetError::OrderOverflow { var: v.differential_label(), max_order: jet.max_order() });
            }
            out.add_term(v.raised(1), c.clone());
        }
        Ok(out)
    }

    fn scaled(&self, factor: f64) -> Form1 {
        Form1::from_terms(self.coeffs.iter().map(|(&v, c)| (v, factor * c)))
    }

    fn plus(&self, other: &Form1) -> Form1 {
        let mut out = self.clone();
        for (&v, c) in &other.coeffs {
            out.add_term(v, c.clone());
        }
        out
    }

    fn max_basis_order(&self) -> usize {
        self.coeffs.keys().map(|v| v.order).max().unwrap_or(0)
    }
}

/// A 2-form stored on ordered pairs `a < b` of basis covectors.
#[derive(Debug, Clone, Default)]
pub struct Form2 {
    coeffs: BTreeMap<(JetVar, JetVar), Expr>,
}

impl Form2 {
    pub fn new() -> Form2 {
        Form2::default()
    }

    /// Accumulates `coeff · dy^a ∧ dy^b`.
    pub fn add_wedge(&mut self, a: JetVar, b: JetVar, coeff: Expr) {
        if a == b || coeff.is_zero() {
            return;
        }
        let (key, c) = if a < b { ((a, b), coeff) } else { ((b, a), -coeff) };
        let slot = self.coeffs.entry(key).or_insert_with(Expr::zero);
        *slot = &*slot + c;
    }

    /// Coefficient of `dy^a ∧ dy^b`, antisymmetric in the arguments.
    pub fn coeff(&self, a: JetVar, b: JetVar) -> Expr {
        if a == b {
            return Expr::zero();
        }
        if a < b {
            self.coeffs.get(&(a, b)).cloned().unwrap_or_else(Expr::zero)
        } else {
            -self.coeffs.get(&(b, a)).cloned().unwrap_or_else(Expr::zero)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(JetVar, JetVar), &Expr)> {
        self.coeffs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn labelled(&self) -> Vec<(String, Expr)> {
        self.coeffs
            .iter()
            .map(|((a, b), c)| (format!("{}^{}", a.differential_label(), b.differential_label()), c.clone()))
            .collect()
    }
}

impl JetForm for Form2 {
    // ι_r is a derivation of degree zero: it acts on each wedge slot in turn
    fn iota(&self, r: usize) -> Form2 {
        let mut out = Form2::new();
        for (&(a, b), c) in &self.coeffs {
            if let Some((f, a2)) = iota_basis(r, a) {
                out.add_wedge(a2, b, f * c);
            }
            if let Some((f, b2)) = iota_basis(r, b) {
                out.add_wedge(a, b2, f * c);
            }
        }
        out
    }

    fn total_derivative(&self, jet: &JetSpace) -> Result<Form2, JetError> {
        let mut out = Form2::new();
        for (&(a, b), c) in &self.coeffs {
            let top = a.order.max(b.order);
            if top >= jet.max_order() {
                return Err(JetError::OrderOverflow {
                    var: format!("{}^{}", a.differential_label(), b.differential_label()),
                    max_order: jet.max_order(),
                });
            }
            out.add_wedge(a, b, jet.total_derivative(c)?);
            out.add_wedge(a.raised(1), b, c.clone());
            out.add_wedge(a, b.raised(1), c.clone());
        }
        Ok(out)
    }

    fn scaled(&self, factor: f64) -> Form2 {
        let mut out = Form2::new();
        for (&(a, b), c) in &self.coeffs {
            out.add_wedge(a, b, factor * c);
        }
        out
    }

    fn plus(&self, other: &Form2) -> Form2 {
        let mut out = self.clone();
        for (&(a, b), c) in &other.coeffs {
            out.add_wedge(a, b, c.clone());
        }
        out
    }

    fn max_basis_order(&self) -> usize {
        self.coeffs.keys().map(|(a, b)| a.order.max(b.order)).max().unwrap_or(0)
    }
}
