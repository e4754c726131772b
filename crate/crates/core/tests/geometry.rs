use std::f64::consts::PI;

use concircle::expr::{Env, Expr};
use concircle::geometry::{CurveJet, Geometry, Metric, PointGeometry, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<Metric> {
    vec![
        Metric::flat(),
        Metric::polar_flat(),
        Metric::sphere(1.0),
        Metric::sphere(2.5),
        Metric::hyperbolic(),
        Metric::lorentz_flat(),
        Metric::from_strings("1+x1^2", "x0*x1/3", "2+sin(x0)^2", Signature::Riemannian).unwrap(),
    ]
}

fn random_point(rng: &mut ChaCha8Rng) -> [f64; 2] {
    // away from the polar axis and the boundary of the half-plane
    [rng.gen_range(0.4..2.6), rng.gen_range(0.3..2.0)]
}

fn random_vec(rng: &mut ChaCha8Rng) -> [f64; 2] {
    [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]
}

fn metric_fn(metric: &Metric) -> impl Fn(f64, f64) -> [[f64; 2]; 2] + '_ {
    move |a, b| {
        let env = Env::from_pairs([("x0", a), ("x1", b)]);
        let c = |i, j| metric.component(i, j).eval(&env).unwrap();
        [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]]
    }
}

/// Gaussian curvature of an orthogonal metric `diag(E, G)` by nested central differences.
fn gaussian_fd(metric: &Metric, x: [f64; 2]) -> f64 {
    let g = metric_fn(metric);
    let h = 1e-4;
    let e = |a: f64, b: f64| g(a, b)[0][0];
    let gg = |a: f64, b: f64| g(a, b)[1][1];
    let root = |a: f64, b: f64| (e(a, b) * gg(a, b)).sqrt();
    let g_u = |a: f64, b: f64| (gg(a + h, b) - gg(a - h, b)) / (2.0 * h);
    let e_v = |a: f64, b: f64| (e(a, b + h) - e(a, b - h)) / (2.0 * h);
    let f1 = |a: f64, b: f64| g_u(a, b) / root(a, b);
    let f2 = |a: f64, b: f64| e_v(a, b) / root(a, b);
    let d1 = (f1(x[0] + h, x[1]) - f1(x[0] - h, x[1])) / (2.0 * h);
    let d2 = (f2(x[0], x[1] + h) - f2(x[0], x[1] - h)) / (2.0 * h);
    -(d1 + d2) / (2.0 * root(x[0], x[1]))
}

#[test]
fn gaussian_curvature_of_the_builtins() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (metric, expected) in [(Metric::flat(), 0.0), (Metric::sphere(1.0), 1.0), (Metric::hyperbolic(), -1.0)] {
        let geo = Geometry::new(metric.clone());
        for _ in 0..20 {
            let x = random_point(&mut rng);
            let k = geo.gaussian_curvature(x).unwrap();
            assert!((k - expected).abs() < 1e-9, "{} at {x:?}: {k}", metric.name());
            assert!((k - gaussian_fd(&metric, x)).abs() < 1e-5);
        }
    }
}

#[test]
fn christoffel_symmetry_and_metric_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for metric in corpus() {
        let geo = Geometry::new(metric.clone());
        let g = metric_fn(&metric);
        for _ in 0..100 {
            let x = random_point(&mut rng);
            let p = geo.at(x).unwrap();
            let h = 1e-6;
            for i in 0..2 {
                for q in 0..2 {
                    for j in 0..2 {
                        assert_eq!(p.gamma[i][q][j], p.gamma[i][j][q]);
                        let dg = if q == 0 {
                            (g(x[0] + h, x[1])[i][j] - g(x[0] - h, x[1])[i][j]) / (2.0 * h)
                        } else {
                            (g(x[0], x[1] + h)[i][j] - g(x[0], x[1] - h)[i][j]) / (2.0 * h)
                        };
                        let lhs: f64 =
                            (0..2).map(|l| p.g[j][l] * p.gamma[l][q][i] + p.g[i][l] * p.gamma[l][q][j]).sum();
                        // exact identity against the symbolic derivative, loose against the FD oracle
                        let exact = metric
                            .component(i, j)
                            .diff(["x0", "x1"][q])
                            .eval(&Env::from_pairs([("x0", x[0]), ("x1", x[1])]))
                            .unwrap();
                        assert!((lhs - exact).abs() < 1e-9, "{}", metric.name());
                        assert!((lhs - dg).abs() < 1e-6 * (1.0 + dg.abs()));
                    }
                }
            }
        }
    }
}

#[test]
fn riemann_antisymmetry_and_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for metric in corpus() {
        let geo = Geometry::new(metric.clone());
        for _ in 0..30 {
            let p = geo.at(random_point(&mut rng)).unwrap();
            for l in 0..2 {
                for j in 0..2 {
                    for q in 0..2 {
                        for i in 0..2 {
                            assert!((p.riemann[l][j][q][i] + p.riemann[j][l][q][i]).abs() < 1e-12);
                            let model = p.gaussian * (p.g[l][q] * p.g[j][i] - p.g[l][i] * p.g[j][q]);
                            assert!((p.riemann_lowered(l, j, q, i) - model).abs() < 1e-8, "{}", metric.name());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn double_star_is_minus_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for metric in corpus().into_iter().filter(|m| m.signature() == Signature::Riemannian) {
        let geo = Geometry::new(metric);
        for _ in 0..100 {
            let p = geo.at(random_point(&mut rng)).unwrap();
            let v = random_vec(&mut rng);
            let ss = p.hodge_star(p.hodge_star(v));
            assert!((ss[0] + v[0]).abs() < 1e-10 && (ss[1] + v[1]).abs() < 1e-10);
            let back = p.hodge_star_inverse(p.hodge_star_covector(v));
            assert!((back[0] - v[0]).abs() < 1e-12 && (back[1] - v[1]).abs() < 1e-12);
        }
    }
}

fn bivector_dot(p: &PointGeometry, a: [f64; 2], b: [f64; 2], v: [f64; 2], w: [f64; 2]) -> f64 {
    p.inner(a, v) * p.inner(b, w) - p.inner(a, w) * p.inner(b, v)
}

#[test]
fn two_dimensional_vector_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for metric in corpus() {
        let sign = metric.signature().det_sign();
        let geo = Geometry::new(metric.clone());
        for _ in 0..100 {
            let p = geo.at(random_point(&mut rng)).unwrap();
            let [a, b, c, v] = [0; 4].map(|_| random_vec(&mut rng));
            let lhs = bivector_dot(&p, a, b, v, c);
            let rhs = sign * p.wedge_norm(a, b) * p.wedge_norm(v, c);
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()), "{}", metric.name());
            let lhs = p.wedge_norm(a, b) * p.inner(b, c) + p.wedge_norm(b, c) * p.inner(a, b);
            let rhs = p.wedge_norm(a, c) * p.inner(b, b);
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()), "{}", metric.name());
        }
    }
}

#[test]
fn frenet_curvature_is_parameter_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for metric in corpus() {
        let geo = Geometry::new(metric.clone());
        for _ in 0..100 {
            let x = random_point(&mut rng);
            let p = geo.at(x).unwrap();
            let (u, w) = (random_vec(&mut rng), random_vec(&mut rng));
            let Ok(k) = CurveJet::new(x, u, w).frenet_curvature(&p) else { continue };
            let lambda = rng.gen_range(0.2..5.0);
            let mu = rng.gen_range(-3.0..3.0);
            let w2 = [lambda * lambda * w[0] + mu * u[0], lambda * lambda * w[1] + mu * u[1]];
            let k2 = CurveJet::new(x, [lambda * u[0], lambda * u[1]], w2).frenet_curvature(&p).unwrap();
            assert!((k - k2).abs() < 1e-9 * (1.0 + k.abs()), "{}", metric.name());
        }
    }
}

#[test]
fn sphere_parallels_have_cotangent_curvature() {
    let geo = Geometry::new(Metric::sphere(1.0));
    for th in [PI / 6.0, PI / 4.0, PI / 3.0, 2.0] {
        let p = geo.at([th, 0.7]).unwrap();
        let u = [0.0, 1.0 / th.sin()];
        let k = CurveJet::new([th, 0.7], u, p.gamma_contract(u, u)).frenet_curvature(&p).unwrap();
        assert!((k.abs() - (th.cos() / th.sin()).abs()).abs() < 1e-12);
    }
}

#[test]
fn explicit_metric_components_parse() {
    let m = Metric::from_strings("1", "0", "x0^2", Signature::Riemannian).unwrap();
    let a = Geometry::new(m).at([2.0, 0.3]).unwrap();
    let b = Geometry::new(Metric::polar_flat()).at([2.0, 0.3]).unwrap();
    assert_eq!(a.gamma, b.gamma);
    assert!(Metric::from_strings("1", "0", "foo(x0)", Signature::Riemannian).is_err());
    let _ = Expr::zero();
}
