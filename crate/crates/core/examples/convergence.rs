// Observed order of the fixed-step integrator by step halving.

use std::error::Error;
use std::f64::consts::TAU;

use concircle::geometry::{CurveJet, Metric};
use concircle::integrate::{convergence_probe, IntegratorConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = IntegratorConfig { t_span: [0.0, TAU], ..Default::default() };
    let init = CurveJet::new([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]);
    let r = convergence_probe(&Metric::flat(), &init, &cfg, &[8e-3, 4e-3, 2e-3, 1e-3])?;
    for (h, e) in r.steps.iter().zip(&r.errors) {
        println!("h = {h:.0e}: endpoint error vs finest {e:.3e}");
    }
    println!("orders {:.3?}, verdict {:?}", r.orders, r.verdict);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
