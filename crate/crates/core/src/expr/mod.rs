//! Symbolic scalar expressions over named real variables.
//!
//! Expressions are immutable DAGs: subtrees are reference counted and shared,
//! so derivatives and substitutions reuse the nodes they do not touch. The only
//! rewriting performed at construction time is constant folding: literal
//! arithmetic, the neutral elements `0` and `1`, and `a·X ± b·X → (a±b)·X` when
//! both sides are the very same node. Equality of two expressions is decided by
//! sampling, not by simplification.

mod diff;
mod display;
mod eval;
mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;

pub use eval::{Env, EvalError, Tape};
pub use parse::{parse, ParseError};

/// Unary functions and negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Neg => "-",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(Arc<str>),
    Unary(Func, Expr),
    Binary(BinOp, Expr, Expr),
    /// Power with a constant rational exponent.
    Pow(Expr, Rational64),
}

/// A shared, immutable expression node.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn constant(value: f64) -> Expr {
        Expr::from_node(Node::Const(value))
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn one() -> Expr {
        Expr::constant(1.0)
    }

    pub fn var(name: impl Into<Arc<str>>) -> Expr {
        Expr::from_node(Node::Var(name.into()))
    }

    pub fn as_const(&self) -> Option<f64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    pub fn apply(func: Func, arg: Expr) -> Expr {
        if let Some(c) = arg.as_const() {
            if let Some(v) = fold_unary(func, c) {
                return Expr::constant(v);
            }
        }
        if func == Func::Neg {
            if let Node::Unary(Func::Neg, inner) = arg.node() {
                return inner.clone();
            }
        }
        Expr::from_node(Node::Unary(func, arg))
    }

    /// Splits `c * X` (or `-X`) into `(c, X)`; anything else is `(1, self)`.
    fn split_coefficient(&self) -> (f64, Expr) {
        match self.node() {
            Node::Binary(BinOp::Mul, c, x) => match c.as_const() {
                Some(c) => (c, x.clone()),
                None => (1.0, self.clone()),
            },
            Node::Unary(Func::Neg, x) => {
                let (c, base) = x.split_coefficient();
                (-c, base)
            }
            _ => (1.0, self.clone()),
        }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        let (a, b) = (lhs.as_const(), rhs.as_const());
        if a.is_none() && b.is_none() {
            if let Some(folded) = fold_like_terms(op, &lhs, &rhs) {
                return folded;
            }
        }
        match op {
            BinOp::Add => {
                if let (Some(x), Some(y)) = (a, b) {
                    return Expr::constant(x + y);
                }
                if a == Some(0.0) {
                    return rhs;
                }
                if b == Some(0.0) {
                    return lhs;
                }
            }
            BinOp::Sub => {
                if let (Some(x), Some(y)) = (a, b) {
                    return Expr::constant(x - y);
                }
                if b == Some(0.0) {
                    return lhs;
                }
                if a == Some(0.0) {
                    return Expr::apply(Func::Neg, rhs);
                }
            }
            BinOp::Mul => {
                if let (Some(x), Some(y)) = (a, b) {
                    return Expr::constant(x * y);
                }
                if a == Some(0.0) || b == Some(0.0) {
                    return Expr::zero();
                }
                if a == Some(1.0) {
                    return rhs;
                }
                if b == Some(1.0) {
                    return lhs;
                }
                if a == Some(-1.0) {
                    return Expr::apply(Func::Neg, rhs);
                }
                if b == Some(-1.0) {
                    return Expr::apply(Func::Neg, lhs);
                }
                // constants go first so that scaled terms share one shape
                if let Some(c) = b {
                    return Expr::binary(BinOp::Mul, Expr::constant(c), lhs);
                }
                if let Some(c) = a {
                    let (inner, base) = rhs.split_coefficient();
                    if inner != 1.0 {
                        return Expr::binary(BinOp::Mul, Expr::constant(c * inner), base);
                    }
                }
            }
            BinOp::Div => {
                if let (Some(x), Some(y)) = (a, b) {
                    if y != 0.0 {
                        return Expr::constant(x / y);
                    }
                }
                if a == Some(0.0) {
                    return Expr::zero();
                }
                if b == Some(1.0) {
                    return lhs;
                }
            }
        }
        Expr::from_node(Node::Binary(op, lhs, rhs))
    }

    pub fn pow(base: Expr, exponent: Rational64) -> Expr {
        if exponent == Rational64::from_integer(0) {
            return Expr::one();
        }
        if exponent == Rational64::from_integer(1) {
            return base;
        }
        if let Some(c) = base.as_const() {
            if let Ok(v) = eval::rational_pow(c, exponent) {
                return Expr::constant(v);
            }
        }
        Expr::from_node(Node::Pow(base, exponent))
    }

    pub fn powi(&self, exponent: i64) -> Expr {
        Expr::pow(self.clone(), Rational64::from_integer(exponent))
    }

    pub fn powr(&self, numer: i64, denom: i64) -> Expr {
        Expr::pow(self.clone(), Rational64::new(numer, denom))
    }

    pub fn sin(&self) -> Expr {
        Expr::apply(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::apply(Func::Cos, self.clone())
    }

    pub fn exp(&self) -> Expr {
        Expr::apply(Func::Exp, self.clone())
    }

    pub fn ln(&self) -> Expr {
        Expr::apply(Func::Log, self.clone())
    }

    pub fn sqrt(&self) -> Expr {
        Expr::apply(Func::Sqrt, self.clone())
    }

    pub fn abs(&self) -> Expr {
        Expr::apply(Func::Abs, self.clone())
    }

    /// Sum of an iterator of expressions; the empty sum is `0`.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        terms.into_iter().fold(Expr::zero(), |acc, t| acc + t)
    }

    /// Names of all variables occurring in the expression, sorted.
    pub fn variables(&self) -> BTreeSet<Arc<str>> {
        let mut seen = HashMap::new();
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if seen.insert(e.id(), ()).is_some() {
                continue;
            }
            match e.node() {
                Node::Const(_) => {}
                Node::Var(name) => {
                    out.insert(name.clone());
                }
                Node::Unary(_, a) | Node::Pow(a, _) => stack.push(a.clone()),
                Node::Binary(_, a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
            }
        }
        out
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.variables().iter().any(|v| &**v == name)
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        let mut seen = HashMap::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if seen.insert(e.id(), ()).is_some() {
                continue;
            }
            match e.node() {
                Node::Const(_) | Node::Var(_) => {}
                Node::Unary(_, a) | Node::Pow(a, _) => stack.push(a.clone()),
                Node::Binary(_, a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
            }
        }
        seen.len()
    }

    /// Replaces variables by expressions. Unmapped variables are kept.
    pub fn substitute(&self, map: &HashMap<Arc<str>, Expr>) -> Expr {
        let mut memo = HashMap::new();
        self.rewrite(&mut memo, &|name| map.get(name).cloned())
    }

    /// Shared bottom-up rebuild used by substitution; leaves are mapped by `leaf`.
    fn rewrite(&self, memo: &mut HashMap<usize, Expr>, leaf: &dyn Fn(&Arc<str>) -> Option<Expr>) -> Expr {
        if let Some(done) = memo.get(&self.id()) {
            return done.clone();
        }
        let out = match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(name) => leaf(name).unwrap_or_else(|| self.clone()),
            Node::Unary(f, a) => {
                let a2 = a.rewrite(memo, leaf);
                if a2.id() == a.id() {
                    self.clone()
                } else {
                    Expr::apply(*f, a2)
                }
            }
            Node::Pow(a, r) => {
                let a2 = a.rewrite(memo, leaf);
                if a2.id() == a.id() {
                    self.clone()
                } else {
                    Expr::pow(a2, *r)
                }
            }
            Node::Binary(op, a, b) => {
                let a2 = a.rewrite(memo, leaf);
                let b2 = b.rewrite(memo, leaf);
                if a2.id() == a.id() && b2.id() == b.id() {
                    self.clone()
                } else {
                    Expr::binary(*op, a2, b2)
                }
            }
        };
        memo.insert(self.id(), out.clone());
        out
    }

    /// Evaluates once against `env`. For repeated evaluation compile a [`Tape`].
    pub fn eval(&self, env: &Env) -> Result<f64, EvalError> {
        Tape::compile(std::slice::from_ref(self)).eval(env).map(|v| v[0])
    }
}

/// Combines `c1·X ± c2·X` when both sides share the node `X`.
fn fold_like_terms(op: BinOp, lhs: &Expr, rhs: &Expr) -> Option<Expr> {
    let sign = match op {
        BinOp::Add => 1.0,
        BinOp::Sub => -1.0,
        _ => return None,
    };
    let (c1, x1) = lhs.split_coefficient();
    let (c2, x2) = rhs.split_coefficient();
    if x1.id() != x2.id() {
        return None;
    }
    let c = c1 + sign * c2;
    Some(Expr::constant(c) * x1)
}

fn fold_unary(func: Func, c: f64) -> Option<f64> {
    let v = match func {
        Func::Neg => -c,
        Func::Sin => c.sin(),
        Func::Cos => c.cos(),
        Func::Exp => c.exp(),
        Func::Log if c > 0.0 => c.ln(),
        Func::Sqrt if c >= 0.0 => c.sqrt(),
        Func::Abs => c.abs(),
        _ => return None,
    };
    v.is_finite().then_some(v)
}

impl From<f64> for Expr {
    fn from(v: f64) -> Expr {
        Expr::constant(v)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self, rhs)
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, self.clone(), rhs.clone())
            }
        }
        impl std::ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, self, rhs.clone())
            }
        }
        impl std::ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self.clone(), rhs)
            }
        }
        impl std::ops::$trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::binary($op, self, Expr::constant(rhs))
            }
        }
        impl std::ops::$trait<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::binary($op, self.clone(), Expr::constant(rhs))
            }
        }
        impl std::ops::$trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, Expr::constant(self), rhs)
            }
        }
        impl std::ops::$trait<&Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, Expr::constant(self), rhs.clone())
            }
        }
    };
}

impl_binop!(Add, add, BinOp::Add);
impl_binop!(Sub, sub, BinOp::Sub);
impl_binop!(Mul, mul, BinOp::Mul);
impl_binop!(Div, div, BinOp::Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::apply(Func::Neg, self)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::apply(Func::Neg, self.clone())
    }
}
