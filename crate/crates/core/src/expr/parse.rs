//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := ratatom ('^' exponent)?          right associative
//! ratatom  := ['-'] number | '(' rational-expr ')'
//! primary  := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must fold to a constant rational; `x^2/3` is `(x^2)/3`, write
//! `x^(2/3)` for the fractional power.

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("exponent at byte {offset} is not a constant rational")]
    NonRationalExponent { offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s = &text[start..i];
            if s.parse::<f64>().is_err() {
                return Err(ParseError::Syntax { offset: start, message: format!("malformed number `{s}`") });
            }
            out.push((Tok::Num(s.to_string()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                offset: i,
                message: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Parses `text` into an expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Lexer { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.syntax(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) => format!("number `{s}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, message: String) -> ParseError {
        ParseError::Syntax { offset: self.offset(), message }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr::apply(Func::Neg, inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat('^') {
            let r = self.exponent()?;
            return Ok(Expr::pow(base, r));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Num(s) => Ok(Expr::constant(s.parse().expect("validated by lexer"))),
            Tok::Ident(name) => {
                if self.eat('(') {
                    let func = Func::from_name(&name).ok_or(ParseError::UnknownFunction { name, offset })?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::apply(func, arg))
                } else {
                    Ok(Expr::var(name))
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            t => {
                self.pos -= usize::from(t != Tok::End);
                Err(self.syntax(format!("expected operand, found {}", describe(&t))))
            }
        }
    }

    fn exponent(&mut self) -> Result<Rational64, ParseError> {
        let offset = self.offset();
        let base = self.rat_atom()?;
        if self.eat('^') {
            let inner_offset = self.offset();
            let exp = self.exponent()?;
            if !exp.is_integer() {
                return Err(ParseError::NonRationalExponent { offset: inner_offset });
            }
            return rat_powi(base, *exp.numer()).ok_or(ParseError::NonRationalExponent { offset });
        }
        Ok(base)
    }

    fn rat_atom(&mut self) -> Result<Rational64, ParseError> {
        let offset = self.offset();
        if self.eat('-') {
            return Ok(-self.rat_atom()?);
        }
        match self.bump() {
            Tok::Num(s) => decimal(&s).ok_or(ParseError::NonRationalExponent { offset }),
            Tok::Sym('(') => {
                let r = self.rat_expr()?;
                self.expect(')')?;
                Ok(r)
            }
            Tok::End => Err(ParseError::Syntax { offset, message: "missing exponent".into() }),
            _ => Err(ParseError::NonRationalExponent { offset }),
        }
    }

    fn rat_expr(&mut self) -> Result<Rational64, ParseError> {
        let offset = self.offset();
        let mut acc = self.rat_term()?;
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.rat_term()?).ok_or(ParseError::NonRationalExponent { offset })?;
            } else if self.eat('-') {
                acc = acc.checked_sub(&self.rat_term()?).ok_or(ParseError::NonRationalExponent { offset })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn rat_term(&mut self) -> Result<Rational64, ParseError> {
        let offset = self.offset();
        let mut acc = self.rat_factor()?;
        loop {
            if self.eat('*') {
                acc = acc.checked_mul(&self.rat_factor()?).ok_or(ParseError::NonRationalExponent { offset })?;
            } else if self.eat('/') {
                let d = self.rat_factor()?;
                if d.is_zero() {
                    return Err(ParseError::Syntax { offset, message: "zero denominator in exponent".into() });
                }
                acc = acc.checked_div(&d).ok_or(ParseError::NonRationalExponent { offset })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn rat_factor(&mut self) -> Result<Rational64, ParseError> {
        let base = self.rat_atom()?;
        if self.eat('^') {
            let offset = self.offset();
            let e = self.exponent()?;
            if !e.is_integer() {
                return Err(ParseError::NonRationalExponent { offset });
            }
            return rat_powi(base, *e.numer()).ok_or(ParseError::NonRationalExponent { offset });
        }
        Ok(base)
    }
}

fn rat_powi(base: Rational64, exp: i64) -> Option<Rational64> {
    if exp < 0 && base.is_zero() {
        return None;
    }
    let b = if exp < 0 { base.recip() } else { base };
    let mut acc = Rational64::one();
    for _ in 0..exp.unsigned_abs().min(64) {
        acc = acc.checked_mul(&b)?;
    }
    if exp.unsigned_abs() > 64 && !(b.abs() == Rational64::one() || b.is_zero()) {
        return None;
    }
    Some(acc)
}

/// Exact rational value of a decimal literal such as `1.25` or `3e-2`.
fn decimal(s: &str) -> Option<Rational64> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    let numer: i64 = if digits.is_empty() { return None } else { digits.parse().ok()? };
    let scale = exp - frac.len() as i64;
    let ten = Rational64::from_integer(10);
    let factor = rat_powi(ten, scale)?;
    Rational64::from_integer(numer).checked_mul(&factor).filter(|r| r.to_f64().is_some())
}

#[cfg(test)]
mod tests {
    use super::super::Node;
    use super::*;

    #[test]
    fn sin_squared_shape() {
        let e = parse("sin(x1)^2").unwrap();
        match e.node() {
            Node::Pow(base, r) => {
                assert_eq!(*r, Rational64::from_integer(2));
                assert!(matches!(base.node(), Node::Unary(Func::Sin, a) if *a == Expr::var("x1")));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_literal() {
        assert_eq!(parse("1").unwrap(), Expr::constant(1.0));
    }

    #[test]
    fn reciprocal_shape() {
        let e = parse("1/(x1*x1)").unwrap();
        let x = Expr::var("x1");
        let expected = Expr::from_node(Node::Binary(
            BinOp::Div,
            Expr::constant(1.0),
            Expr::from_node(Node::Binary(BinOp::Mul, x.clone(), x)),
        ));
        assert_eq!(e, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let env = super::super::Env::from_pairs([("x", 2.0), ("y", 3.0)]);
        let v = |s: &str| parse(s).unwrap().eval(&env).unwrap();
        assert_eq!(v("-x^2"), -4.0);
        assert_eq!(v("x-y-1"), -2.0);
        assert_eq!(v("x/y/2"), 2.0 / 3.0 / 2.0);
        assert_eq!(v("x^3^2"), 512.0);
        assert_eq!(v("x^2/4"), 1.0);
        assert_eq!(v("x^-1"), 0.5);
        assert!((v("x^(3/2)") - 2f64.powf(1.5)).abs() < 1e-15);
        assert_eq!(v("x^0.5^2"), 2f64.powf(0.25));
        assert_eq!(v("2*-x"), -4.0);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse("x0 + * 2"),
            Err(ParseError::Syntax { offset: 5, message: "expected operand, found `*`".into() })
        );
        assert_eq!(parse("tan(x0)"), Err(ParseError::UnknownFunction { name: "tan".into(), offset: 0 }));
        assert_eq!(parse("x0^x1"), Err(ParseError::NonRationalExponent { offset: 3 }));
        assert_eq!(parse("x0^(1/2)^(1/2)"), Err(ParseError::NonRationalExponent { offset: 9 }));
        assert!(matches!(parse("(x0"), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(matches!(parse("x0 $"), Err(ParseError::Syntax { offset: 3, .. })));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(decimal("1.25"), Some(Rational64::new(5, 4)));
        assert_eq!(decimal("3e-2"), Some(Rational64::new(3, 100)));
        assert_eq!(decimal(".5"), Some(Rational64::new(1, 2)));
    }
}
