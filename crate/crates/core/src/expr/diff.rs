use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64;

use super::{BinOp, Expr, Func, Node};

impl Expr {
    /// Exact partial derivative with respect to the variable `name`.
    pub fn diff(&self, name: &str) -> Expr {
        self.push_forward(&mut |v: &Arc<str>| {
            if &**v == name {
                Some(Expr::one())
            } else {
                None
            }
        })
    }

    /// Directional derivative along a vector field given on the variables.
    ///
    /// `tangent(v)` is the derivative of variable `v` along the field (`None`
    /// means zero). The whole DAG is traversed once, so the result has size
    /// linear in the input regardless of how many variables are seeded.
    pub fn push_forward(&self, tangent: &mut dyn FnMut(&Arc<str>) -> Option<Expr>) -> Expr {
        let mut memo: HashMap<usize, Expr> = HashMap::new();
        let mut leaves: HashMap<Arc<str>, Expr> = HashMap::new();
        push(self, &mut memo, &mut |v| {
            if let Some(t) = leaves.get(v) {
                return t.clone();
            }
            let t = tangent(v).unwrap_or_else(Expr::zero);
            leaves.insert(v.clone(), t.clone());
            t
        })
    }
}

fn push(e: &Expr, memo: &mut HashMap<usize, Expr>, leaf: &mut dyn FnMut(&Arc<str>) -> Expr) -> Expr {
    if let Some(d) = memo.get(&e.id()) {
        return d.clone();
    }
    let out = match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Var(v) => leaf(v),
        Node::Unary(f, a) => {
            let da = push(a, memo, leaf);
            if da.is_zero() {
                Expr::zero()
            } else {
                match f {
                    Func::Neg => -da,
                    Func::Sin => a.cos() * da,
                    Func::Cos => -(a.sin() * da),
                    Func::Exp => e.clone() * da,
                    Func::Log => da / a,
                    Func::Sqrt => da / (2.0 * e.clone()),
                    // a/|a| is the sign; undefined (division by zero) at a = 0
                    Func::Abs => (a / e) * da,
                }
            }
        }
        Node::Pow(a, r) => {
            let da = push(a, memo, leaf);
            if da.is_zero() {
                Expr::zero()
            } else {
                let lowered = Expr::pow(a.clone(), r - Rational64::from_integer(1));
                let coeff = *r.numer() as f64 / *r.denom() as f64;
                coeff * lowered * da
            }
        }
        Node::Binary(op, a, b) => {
            let da = push(a, memo, leaf);
            let db = push(b, memo, leaf);
            match op {
                BinOp::Add => da + db,
                BinOp::Sub => da - db,
                BinOp::Mul => da * b + a * db,
                BinOp::Div => {
                    if db.is_zero() {
                        da / b
                    } else {
                        // (da - (a/b) db) / b, reusing this node for a/b
                        (da - e * db) / b
                    }
                }
            }
        }
    };
    memo.insert(e.id(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Env};
    use super::*;

    fn at(e: &Expr, pairs: &[(&str, f64)]) -> f64 {
        e.eval(&Env::from_pairs(pairs.iter().copied())).unwrap()
    }

    #[test]
    fn sin_squared() {
        let e = parse("sin(x1)^2").unwrap();
        let d = e.diff("x1");
        assert!((at(&d, &[("x1", std::f64::consts::FRAC_PI_4)]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unrelated_variable_is_zero() {
        let e = parse("x0").unwrap();
        assert!(e.diff("x1").is_zero());
    }

    #[test]
    fn reciprocal() {
        let d = parse("1/x1").unwrap().diff("x1");
        assert_eq!(at(&d, &[("x1", 2.0)]), -0.25);
    }

    #[test]
    fn abs_derivative_undefined_at_zero() {
        let d = parse("abs(x0)").unwrap().diff("x0");
        assert_eq!(at(&d, &[("x0", -3.0)]), -1.0);
        assert!(d.eval(&Env::from_pairs([("x0", 0.0)])).is_err());
    }

    #[test]
    fn push_forward_matches_sum_of_partials() {
        let e = parse("x0*sin(x1) + exp(x0*x1)/x1").unwrap();
        let mut t = |v: &Arc<str>| match &**v {
            "x0" => Some(Expr::constant(2.0)),
            "x1" => Some(Expr::var("y")),
            _ => None,
        };
        let pf = e.push_forward(&mut t);
        let manual = 2.0 * e.diff("x0") + Expr::var("y") * e.diff("x1");
        let env = Env::from_pairs([("x0", 0.3), ("x1", 1.7), ("y", -0.4)]);
        let (a, b) = (pf.eval(&env).unwrap(), manual.eval(&env).unwrap());
        assert!((a - b).abs() < 1e-14 * a.abs().max(1.0));
    }
}
