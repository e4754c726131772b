// Christoffel symbols, Gaussian curvature and the Riemann sign convention
// for the built-in metrics and an explicit one.

use std::error::Error;

use concircle::geometry::{commutator_check, Geometry, Metric, RiemannConvention, Signature};
use concircle::jet::{sample_jets, Tolerance};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x = [1.1, 0.7];
    for name in ["flat", "polar-flat", "sphere", "sphere(2)", "hyperbolic", "lorentz-flat"] {
        let geo = Geometry::new(Metric::builtin(name)?);
        let p = geo.at(x)?;
        println!("{name:>12}: K = {:+.12}  Γ^0_11 = {:+.6}", p.gaussian, p.gamma[0][1][1]);
    }

    // the catenoid, g = cosh²(s) (ds² + dφ²), has K = −1/cosh⁴(s)
    let c2 = "((exp(x0) + exp(-x0)) / 2)^2";
    let geo = Geometry::new(Metric::from_strings(c2, "0", c2, Signature::Riemannian)?);
    for s in [0.0f64, 0.5, 1.0] {
        let exact = -1.0 / s.cosh().powi(4);
        println!("catenoid K({s}) = {:+.12} (exact {exact:+.12})", geo.gaussian_curvature([s, 0.0])?);
    }

    // only one sign of the Riemann tensor makes the commutator identity hold
    let points = sample_jets(50, 42, 4);
    for conv in [RiemannConvention::Pinned, RiemannConvention::Candidate] {
        let r = commutator_check(&Metric::sphere(1.0), conv, &points, Tolerance::default())?;
        println!("{conv:?}: commutator max residual {:.2e}, passes = {}", r.max_abs(), r.passes());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
