use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64;
use thiserror::Error;

use super::{BinOp, Expr, Func, Node};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("domain error: {0}")]
    Domain(&'static str),
}

/// Variable bindings for evaluation.
#[derive(Debug, Clone, Default)]
pub struct Env {
    values: HashMap<Arc<str>, f64>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, f64)>>(pairs: I) -> Env {
        let mut env = Env::new();
        for (k, v) in pairs {
            env.set(k, v);
        }
        env
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(Arc::from(name), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(f64),
    Var(usize),
    Unary(Func, usize),
    Binary(BinOp, usize, usize),
    Pow(usize, Rational64),
}

/// A linearized evaluation program for one or more expressions.
///
/// Shared subexpressions are evaluated once per call. Compiling is linear in
/// the DAG size; compile once and evaluate at many points.
#[derive(Debug, Clone)]
pub struct Tape {
    ops: Vec<Op>,
    vars: Vec<Arc<str>>,
    outputs: Vec<usize>,
}

impl Tape {
    pub fn compile(exprs: &[Expr]) -> Tape {
        let mut tape = Tape { ops: Vec::new(), vars: Vec::new(), outputs: Vec::new() };
        let mut slots: HashMap<usize, usize> = HashMap::new();
        let mut var_slots: HashMap<Arc<str>, usize> = HashMap::new();
        for e in exprs {
            let slot = tape.emit(e, &mut slots, &mut var_slots);
            tape.outputs.push(slot);
        }
        tape
    }

    fn emit(
        &mut self,
        root: &Expr,
        slots: &mut HashMap<usize, usize>,
        var_slots: &mut HashMap<Arc<str>, usize>,
    ) -> usize {
        // iterative post-order so deep sums do not overflow the stack
        let mut stack: Vec<(Expr, bool)> = vec![(root.clone(), false)];
        while let Some((e, expanded)) = stack.pop() {
            if slots.contains_key(&e.id()) {
                continue;
            }
            if !expanded {
                stack.push((e.clone(), true));
                match e.node() {
                    Node::Const(_) | Node::Var(_) => {}
                    Node::Unary(_, a) | Node::Pow(a, _) => stack.push((a.clone(), false)),
                    Node::Binary(_, a, b) => {
                        stack.push((b.clone(), false));
                        stack.push((a.clone(), false));
                    }
                }
                continue;
            }
            let op = match e.node() {
                Node::Const(c) => Op::Const(*c),
                Node::Var(name) => {
                    let next = var_slots.len();
                    let idx = *var_slots.entry(name.clone()).or_insert_with(|| {
                        self.vars.push(name.clone());
                        next
                    });
                    Op::Var(idx)
                }
                Node::Unary(f, a) => Op::Unary(*f, slots[&a.id()]),
                Node::Pow(a, r) => Op::Pow(slots[&a.id()], *r),
                Node::Binary(op, a, b) => Op::Binary(*op, slots[&a.id()], slots[&b.id()]),
            };
            slots.insert(e.id(), self.ops.len());
            self.ops.push(op);
        }
        slots[&root.id()]
    }

    /// Variables the tape reads, in slot order.
    pub fn variables(&self) -> &[Arc<str>] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// Resolves variable values in slot order, failing on the first unbound name.
    pub fn bind(&self, lookup: impl Fn(&str) -> Option<f64>) -> Result<Vec<f64>, EvalError> {
        self.vars.iter().map(|v| lookup(v).ok_or_else(|| EvalError::Unbound(v.to_string()))).collect()
    }

    pub fn eval(&self, env: &Env) -> Result<Vec<f64>, EvalError> {
        let bound = self.bind(|n| env.get(n))?;
        self.eval_bound(&bound)
    }

    /// Evaluates with variables given in [`Tape::variables`] order.
    pub fn eval_bound(&self, vars: &[f64]) -> Result<Vec<f64>, EvalError> {
        let mut vals = vec![0.0; self.ops.len()];
        for (i, op) in self.ops.iter().enumerate() {
            vals[i] = match *op {
                Op::Const(c) => c,
                Op::Var(k) => vars[k],
                Op::Unary(f, a) => unary(f, vals[a])?,
                Op::Binary(op, a, b) => binary(op, vals[a], vals[b])?,
                Op::Pow(a, r) => rational_pow(vals[a], r)?,
            };
        }
        Ok(self.outputs.iter().map(|&o| vals[o]).collect())
    }

    /// Evaluates each output together with a cancellation-free magnitude.
    ///
    /// The magnitude replaces every sum by the sum of absolute values and every
    /// product by the product of magnitudes, so it bounds the size of the terms
    /// that cancel in the value. It is the natural scale for a zero test.
    pub fn eval_with_scale(&self, vars: &[f64]) -> Result<Vec<(f64, f64)>, EvalError> {
        let mut vals = vec![0.0; self.ops.len()];
        let mut mags = vec![0.0; self.ops.len()];
        for (i, op) in self.ops.iter().enumerate() {
            let (v, m) = match *op {
                Op::Const(c) => (c, c.abs()),
                Op::Var(k) => (vars[k], vars[k].abs()),
                Op::Unary(Func::Neg, a) => (-vals[a], mags[a]),
                Op::Unary(f, a) => {
                    let v = unary(f, vals[a])?;
                    (v, v.abs())
                }
                Op::Binary(op, a, b) => {
                    let v = binary(op, vals[a], vals[b])?;
                    let m = match op {
                        BinOp::Add | BinOp::Sub => mags[a] + mags[b],
                        BinOp::Mul => mags[a] * mags[b],
                        BinOp::Div => mags[a] / vals[b].abs(),
                    };
                    (v, m)
                }
                Op::Pow(a, r) => {
                    let v = rational_pow(vals[a], r)?;
                    let m = if mags[a] > 0.0 && vals[a] != 0.0 {
                        // propagate the magnitude of the base through the power
                        v.abs() * (mags[a] / vals[a].abs()).powf(ratio(r).abs())
                    } else {
                        v.abs()
                    };
                    (v, m)
                }
            };
            vals[i] = v;
            mags[i] = m;
        }
        Ok(self.outputs.iter().map(|&o| (vals[o], mags[o])).collect())
    }
}

fn ratio(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn unary(f: Func, a: f64) -> Result<f64, EvalError> {
    Ok(match f {
        Func::Neg => -a,
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Exp => a.exp(),
        Func::Log => {
            if a <= 0.0 {
                return Err(EvalError::Domain("log of non-positive argument"));
            }
            a.ln()
        }
        Func::Sqrt => {
            if a < 0.0 {
                return Err(EvalError::Domain("sqrt of negative argument"));
            }
            a.sqrt()
        }
        Func::Abs => a.abs(),
    })
}

fn binary(op: BinOp, a: f64, b: f64) -> Result<f64, EvalError> {
    Ok(match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b == 0.0 {
                return Err(EvalError::Domain("division by zero"));
            }
            a / b
        }
    })
}

pub(crate) fn rational_pow(base: f64, r: Rational64) -> Result<f64, EvalError> {
    let (p, q) = (*r.numer(), *r.denom());
    if base == 0.0 && p < 0 {
        return Err(EvalError::Domain("division by zero"));
    }
    if q == 1 {
        if let Ok(p32) = i32::try_from(p) {
            return Ok(base.powi(p32));
        }
        return Ok(base.powf(p as f64));
    }
    if base < 0.0 {
        if q % 2 == 0 {
            return Err(EvalError::Domain("even root of negative argument"));
        }
        // odd root of a negative number is real
        let mag = (-base).powf(ratio(r));
        return Ok(if p % 2 == 0 { mag } else { -mag });
    }
    if q == 2 {
        let root = base.sqrt();
        if let Ok(p32) = i32::try_from(p) {
            return Ok(root.powi(p32));
        }
    }
    Ok(base.powf(ratio(r)))
}
