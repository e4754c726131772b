// Integrates geodesic circles on the plane and on the half-plane and
// reports how well the curvature is conserved.

use std::error::Error;
use std::f64::consts::TAU;

use concircle::geometry::{CurveJet, Metric};
use concircle::integrate::{integrate, IntegratorConfig, Method};
use concircle::mechanics::Formulation;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // unit circle, clockwise, once around
    let cfg = IntegratorConfig { t_span: [0.0, TAU], stride: 1000, ..Default::default() };
    let tr = integrate(Metric::flat(), &CurveJet::new([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]), cfg)?;
    for s in &tr.samples {
        println!("t={:.3} x=({:+.6}, {:+.6}) k={:+.12}", s.t, s.x[0], s.x[1], s.k);
    }
    let end = tr.last().expect("samples");
    println!("closure error {:.2e}", end.x[0].hypot(end.x[1]));

    // an adaptive run of the concircular formulation on the half-plane
    let cfg = IntegratorConfig {
        method: Method::Rkf45,
        h: 1e-2,
        formulation: Formulation::Concircular,
        ..Default::default()
    };
    let tr = integrate(Metric::hyperbolic(), &CurveJet::new([0.0, 1.0], [1.0, 0.0], [0.0, 0.5]), cfg)?;
    println!(
        "half-plane: {} steps, complete {}, k drift {:.2e}, |H + k| {:.2e}",
        tr.steps,
        tr.is_complete(),
        tr.k_drift(),
        tr.hamilton_identity_error()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
