// Momenta, Hamilton function and the Euler–Poisson residual of
// `L = k − m‖u‖` on the sphere.

use std::error::Error;

use concircle::geometry::{CurveJet, Metric};
use concircle::mechanics::{geodesic_circle_accel, Formulation, Lagrangian, VariationalSystem};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let metric = Metric::sphere(1.0);
    let m = 3.0;
    let sys = VariationalSystem::new(metric.clone(), Lagrangian::geodesic_circle(&metric, m))?;
    let p = sys.geometry().at([1.0, 0.0])?;

    // unit speed along the azimuth with k = −(3 − √5)/2, a uniform extremal
    let u = [0.0, 1.0 / 1.0f64.sin()];
    let k = (-m + (m * m - 4.0).sqrt()) / 2.0;
    let su = p.hodge_star(u);
    let state = CurveJet::new([1.0, 0.0], u, [k * su[0], k * su[1]]);
    println!("speed {:.12}, k = {:.12}", state.speed(&p)?, state.frenet_curvature(&p)?);

    let wp = geodesic_circle_accel(&p, &state, Formulation::EulerPoisson, m)?;
    let state = state.with_w_prime(wp);
    let mo = sys.momenta_covariant(&state)?;
    println!("π1 = {:.9?}, π = {:.9?}", mo.p1, mo.p);

    let flat = sys.flat_point(&state)?;
    println!("H = {:.12} (−k = {:.12})", sys.hamilton(&flat)?, -k);
    let eps = sys.euler_poisson_covariant(&state)?;
    println!("Euler–Poisson residual ({:.2e}, {:.2e})", eps[0], eps[1]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
