use std::f64::consts::{PI, TAU};

use concircle::geometry::{CurveJet, Geometry, Metric};
use concircle::integrate::{convergence_probe, integrate, IntegratorConfig, Method, Verdict};
use concircle::mechanics::Formulation;

/// Unit-speed data at `x` with `w = c (*u)♯`, so `k(0) = c`.
fn unit_speed_start(metric: &Metric, x: [f64; 2], c: f64) -> CurveJet {
    let p = Geometry::new(metric.clone()).at(x).unwrap();
    let u = [1.0 / p.norm([1.0, 0.0]).unwrap(), 0.0];
    let su = p.hodge_star(u);
    CurveJet::new(x, u, [c * su[0], c * su[1]])
}

/// Unit-speed extremals of `k − m‖u‖` have `k² + m k + K = 0`.
fn uniform_curvature(m: f64, gauss: f64) -> f64 {
    (-m + (m * m - 4.0 * gauss).sqrt()) / 2.0
}

#[test]
fn flat_euler_poisson_closes_the_unit_circle() {
    let cfg = IntegratorConfig { t_span: [0.0, TAU], m: 1.0, ..Default::default() };
    let tr = integrate(Metric::flat(), &CurveJet::new([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]), cfg).unwrap();
    assert!(tr.is_complete());
    let end = tr.last().unwrap();
    assert!(end.x[0].hypot(end.x[1]) < 1e-6);
    // clockwise: the centre is at (0, −1)
    let quarter = tr.samples.iter().min_by(|a, b| (a.t - PI / 2.0).abs().total_cmp(&(b.t - PI / 2.0).abs())).unwrap();
    assert!((quarter.x[0] - quarter.t.sin()).abs() < 1e-6);
    assert!((quarter.x[1] - (quarter.t.cos() - 1.0)).abs() < 1e-6);
}

#[test]
fn sphere_concircular_keeps_unit_curvature() {
    let metric = Metric::sphere(1.0);
    let cfg = IntegratorConfig { formulation: Formulation::Concircular, m: 0.0, ..Default::default() };
    let tr = integrate(metric.clone(), &unit_speed_start(&metric, [1.0, 0.3], 1.0), cfg).unwrap();
    assert!(tr.is_complete());
    assert!((tr.samples[0].k - 1.0).abs() < 1e-14);
    assert!(tr.k_drift() < 1e-6, "{}", tr.k_drift());
    assert!(tr.speed_drift() < 1e-6);
}

#[test]
fn euler_poisson_conserves_curvature_and_hamilton() {
    for (metric, x, gauss) in [
        (Metric::flat(), [0.0, 0.0], 0.0),
        (Metric::sphere(1.0), [1.0, 0.0], 1.0),
        (Metric::hyperbolic(), [0.0, 1.0], -1.0),
    ] {
        // m = 3 is the first integer with a uniform unit-speed solution on the unit sphere
        let m = if gauss > 0.0 { 3.0 } else { 1.0 };
        let c = uniform_curvature(m, gauss);
        let cfg = IntegratorConfig { m, ..Default::default() };
        let tr = integrate(metric.clone(), &unit_speed_start(&metric, x, c), cfg).unwrap();
        assert!(tr.is_complete(), "{}: {:?}", metric.name(), tr.failure);
        assert!(tr.k_drift() < 1e-6, "{}", metric.name());
        assert!(tr.hamilton_drift() < 1e-6, "{}", metric.name());
        assert!(tr.hamilton_identity_error() < 1e-8, "{}", metric.name());
        assert!(tr.speed_drift() < 1e-6, "{}", metric.name());
    }
}

#[test]
fn non_uniform_extremals_still_conserve_curvature() {
    // k(0) = 0.5 on the half-plane: speed varies but k stays put
    let metric = Metric::hyperbolic();
    let tr =
        integrate(metric.clone(), &unit_speed_start(&metric, [0.0, 1.0], 0.5), IntegratorConfig::default()).unwrap();
    assert!(tr.is_complete());
    assert!(tr.speed_drift() > 0.1);
    assert!(tr.k_drift() < 1e-6);
    assert!(tr.hamilton_identity_error() < 1e-8);
}

#[test]
fn rk4_is_fourth_order() {
    let cfg = IntegratorConfig { t_span: [0.0, TAU], ..Default::default() };
    let r = convergence_probe(
        &Metric::flat(),
        &CurveJet::new([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]),
        &cfg,
        &[4e-3, 2e-3, 1e-3],
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Conclusive);
    let p = r.observed_order().unwrap();
    assert!((p - 4.0).abs() < 0.3, "{p}");
}

#[test]
fn rkf45_agrees_with_fine_rk4() {
    let base = IntegratorConfig { t_span: [0.0, TAU], ..Default::default() };
    let init = CurveJet::new([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]);
    let a = integrate(Metric::flat(), &init, IntegratorConfig { h: 1e-4, ..base.clone() }).unwrap();
    let b = integrate(Metric::flat(), &init, IntegratorConfig { method: Method::Rkf45, h: 1e-2, ..base }).unwrap();
    assert!(b.is_complete());
    let (a, b) = (a.last().unwrap(), b.last().unwrap());
    assert_eq!(a.t, b.t);
    for i in 0..2 {
        assert!((a.x[i] - b.x[i]).abs() < 1e-8);
        assert!((a.u[i] - b.u[i]).abs() < 1e-8);
    }
}

#[test]
fn formulations_agree_on_the_flat_circle() {
    let base = IntegratorConfig { t_span: [0.0, TAU], stride: 100, ..Default::default() };
    let init = CurveJet::new([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]);
    let a = integrate(Metric::flat(), &init, base.clone()).unwrap();
    let b =
        integrate(Metric::flat(), &init, IntegratorConfig { formulation: Formulation::Concircular, ..base }).unwrap();
    assert_eq!(a.samples.len(), b.samples.len());
    for (s, r) in a.samples.iter().zip(&b.samples) {
        for i in 0..2 {
            assert!((s.x[i] - r.x[i]).abs() < 1e-7 && (s.w[i] - r.w[i]).abs() < 1e-7);
        }
    }
}

#[test]
fn runs_are_bit_reproducible() {
    let metric = Metric::sphere(1.0);
    let init = unit_speed_start(&metric, [1.0, 0.0], -0.5);
    let cfg = IntegratorConfig { m: 3.0, t_span: [0.0, 2.0], ..Default::default() };
    let a = integrate(metric.clone(), &init, cfg.clone()).unwrap();
    let b = integrate(metric, &init, cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn concircular_keeps_curvature_at_any_constant_speed() {
    // speed 2 on the sphere of radius 2
    let init = CurveJet::new([1.0, 0.0], [1.0, 0.0], [0.0, 0.5]);
    let cfg = IntegratorConfig { formulation: Formulation::Concircular, ..Default::default() };
    let tr = integrate(Metric::sphere(2.0), &init, cfg).unwrap();
    assert!(tr.is_complete());
    assert!((tr.samples[0].speed - 2.0).abs() < 1e-14);
    assert!(tr.k_drift() < 1e-6, "{}", tr.k_drift());
    assert!(tr.speed_drift() < 1e-6, "{}", tr.speed_drift());
}
