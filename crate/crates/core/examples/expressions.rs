// Parse, differentiate, print and evaluate symbolic expressions.

use std::error::Error;

use concircle::expr::{parse, Env, Tape};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f = parse("sin(x0)^2 * x1 + x1^(3/2)")?;
    let df = f.diff("x1");
    println!("f      = {f}");
    println!("df/dx1 = {df}");

    let env = Env::from_pairs([("x0", 0.4), ("x1", 2.0)]);
    println!("f(0.4, 2) = {:.12}", f.eval(&env)?);

    // a tape evaluates many outputs sharing one pass over the DAG
    let tape = Tape::compile(&[f.clone(), df, f.diff("x0")]);
    let vals = tape.eval(&env)?;
    println!("tape outputs = {vals:.12?}");

    // domain errors are reported, not turned into NaN
    let bad = parse("sqrt(x0)")?.eval(&Env::from_pairs([("x0", -1.0)]));
    println!("sqrt(-1) -> {bad:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
