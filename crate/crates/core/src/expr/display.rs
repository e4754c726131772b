use std::fmt;

use super::{BinOp, Expr, Func, Node};

// Output is fully parenthesized so that `parse(&e.to_string())` evaluates
// identically to `e`; it is meant to be reparsed, not read.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    write!(f, "(-{})", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Node::Var(name) => f.write_str(name),
            Node::Unary(Func::Neg, a) => write!(f, "(-{a})"),
            Node::Unary(func, a) => write!(f, "{}({a})", func.name()),
            Node::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                };
                write!(f, "({a} {sym} {b})")
            }
            Node::Pow(a, r) => {
                // `^` associates to the right, so a power base needs its own parentheses
                if matches!(a.node(), Node::Pow(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                if r.is_integer() && *r.numer() >= 0 {
                    write!(f, "^{}", r.numer())
                } else {
                    write!(f, "^({}/{})", r.numer(), r.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Env};

    #[test]
    fn prints_reparseable_text() {
        for src in ["-x0^2", "x0^(-3/2)*sin(x1)", "2 - (x0 - x1)", "sqrt(abs(x0))/-3", "(x0^3)^2"] {
            let e = parse(src).unwrap();
            let again = parse(&e.to_string()).unwrap();
            let env = Env::from_pairs([("x0", 1.3), ("x1", -0.7)]);
            assert_eq!(e.eval(&env).unwrap(), again.eval(&env).unwrap(), "{src}");
        }
    }
}
