// Total derivatives, Lagrange derivatives and variationality checks on the
// jet space of plane curves.

use std::error::Error;

use concircle::jet::{coord, sample_jets, variationality_check, Form1, JetSpace, Tolerance};
use concircle::mechanics::{flat_circle_lagrangian, planar_source_form};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let jet = JetSpace::default();
    let (u0, u1) = (coord(0, 1), coord(1, 1));

    let kinetic = 0.5 * (&u0 * &u0 + &u1 * &u1);
    println!("d_T(|u|^2/2) = {}", jet.total_derivative(&kinetic)?);

    // free particle: δL = −ü dx
    let delta = jet.lagrange_derivative(&kinetic)?.semibasic();
    for (label, c) in delta.labelled() {
        println!("δL[{label}] = {c}");
    }

    let points = sample_jets(100, 42, jet.max_order());
    let tol = Tolerance::default();

    let m = 1.0;
    let good = variationality_check(&jet, &planar_source_form(m), &points, tol)?;
    println!("third-order circle form: variational = {}, max residual {:.2e}", good.passed, good.max_residual);

    let from_l = jet.lagrange_derivative(&flat_circle_lagrangian(m))?.semibasic();
    let diff = from_l.minus(&planar_source_form(m));
    let worst = diff
        .labelled()
        .iter()
        .map(|(_, e)| concircle::jet::zero_check(&[("d".into(), e.clone())], &points, tol).map(|r| r.max_abs()))
        .try_fold(0.0f64, |acc, r| r.map(|v| acc.max(v)))?;
    println!("it is δ of k − m|u|: max |δL − E| = {worst:.2e}");

    let bad = Form1::source([coord(0, 3), coord(1, 3)]);
    let r = variationality_check(&jet, &bad, &points, tol)?;
    println!("E = x_(3): variational = {}, max residual {:.2e}", r.passed, r.max_residual);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
