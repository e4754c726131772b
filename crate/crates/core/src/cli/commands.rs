use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use crate::expr::Expr;
use crate::geometry::{
    commutator_check, covariant_prime_covector, covariant_prime_vector, first_order_commutator_check, ChristoffelField,
    CurveJet, Geometry, RiemannConvention, RiemannField,
};
use crate::integrate::{convergence_probe, Integrator, Verdict as ConvergenceVerdict};
use crate::jet::{
    coord, param_independence_check, sample_jets, variationality_check, zermelo_check, zero_check, Form1, JetForm,
    JetPoint, JetSpace,
};
use crate::mechanics::{
    flat_circle_lagrangian, planar_source_form, spin_rewrite_residual, Lagrangian, VariationalSystem,
};

use super::report::{fmt_f64, Location, Report};
use super::{CliError, ScenarioConfig};

/// Bound on the spin-force rewrite residual, which has no symbolic scale.
const SPIN_REWRITE_TOLERANCE: f64 = 1e-8;

/// Variationality residuals of a non-variational form must exceed this.
const NEGATIVE_CONTROL_THRESHOLD: f64 = 1e-3;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(file))
}

fn csv_writer(dir: &Path, name: &str) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    Ok(csv::Writer::from_writer(create(dir, name)?))
}

fn labelled_pair(label: &str, pair: &[Expr; 2]) -> Vec<(String, Expr)> {
    (0..2).map(|i| (format!("{label}{i}"), pair[i].clone())).collect()
}

fn points(cfg: &ScenarioConfig, max_order: usize) -> Vec<JetPoint> {
    sample_jets(cfg.verification.samples, cfg.verification.seed, max_order)
}

/// Metric identities at sampled base points, plus a table of `K`.
pub fn check_metric(cfg: &ScenarioConfig, out: &Path) -> Result<Report, CliError> {
    let metric = cfg.metric()?;
    let tol = cfg.tolerance();
    let pts = points(cfg, 0);
    let gamma = ChristoffelField::levi_civita(&metric);
    let riemann = RiemannField::new(&metric, &gamma, RiemannConvention::Pinned);
    let g = metric.components();
    let xs = ["x0", "x1"];
    let mut report = Report::new();

    let mut mismatched = 0usize;
    let geo = Geometry::new(metric.clone());
    for p in &pts {
        if geo.check_signature(p.order(0)).is_err() {
            mismatched += 1;
        }
    }
    report.bound("signature_mismatches", Location::Batch, mismatched as f64, 0.0);

    // ∂_q g_ij = g_lj Γ^l_qi + g_il Γ^l_qj
    let mut identity = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for (q, xq) in xs.iter().enumerate() {
                let mut rhs = Expr::zero();
                for l in 0..2 {
                    rhs = rhs + &g[l][j] * gamma.get(l, q, i) + &g[i][l] * gamma.get(l, q, j);
                }
                identity.push((format!("g{i}{j},{q}"), g[i][j].diff(xq) - rhs));
            }
        }
    }
    report.residuals("christoffel_metric_identity", &zero_check(&identity, &pts, tol)?);

    let mut symmetry = Vec::new();
    for i in 0..2 {
        symmetry.push((format!("gamma{i}"), gamma.get(i, 0, 1) - gamma.get(i, 1, 0)));
    }
    report.residuals("christoffel_symmetry", &zero_check(&symmetry, &pts, tol)?);

    // R_ljqi = K (g_lq g_ji − g_li g_jq)
    let mut recon = Vec::new();
    for l in 0..2 {
        for j in 0..2 {
            for q in 0..2 {
                for i in 0..2 {
                    let mut lowered = Expr::zero();
                    for m in 0..2 {
                        lowered = lowered + &g[i][m] * riemann.get(l, j, q, m);
                    }
                    let model = &riemann.gaussian * (&g[l][q] * &g[j][i] - &g[l][i] * &g[j][q]);
                    recon.push((format!("R{l}{j}{q}{i}"), lowered - model));
                }
            }
        }
    }
    report.residuals("riemann_reconstruction", &zero_check(&recon, &pts, tol)?);

    let mut w = csv_writer(out, "curvature.csv")?;
    w.write_record(["point", "x0", "x1", "K"])?;
    let mut k_min = f64::INFINITY;
    let mut k_max = f64::NEG_INFINITY;
    for (n, p) in pts.iter().enumerate() {
        let x = p.order(0);
        let k = geo.gaussian_curvature(x)?;
        k_min = k_min.min(k);
        k_max = k_max.max(k);
        w.write_record([n.to_string(), fmt_f64(x[0]), fmt_f64(x[1]), fmt_f64(k)])?;
    }
    w.flush()?;
    report.info("gaussian_curvature_max", Location::Batch, k_max);
    report.info("gaussian_curvature_min", Location::Batch, k_min);
    Ok(report)
}

/// Identities of the jet calculus, the covariant calculus and the mechanics
/// built on the configured metric.
pub fn verify_operators(cfg: &ScenarioConfig, _out: &Path) -> Result<Report, CliError> {
    let metric = cfg.metric()?;
    let m = cfg.lagrangian.m;
    let tol = cfg.tolerance();
    let jet = JetSpace::default();
    let pts = points(cfg, jet.max_order());
    let mut report = Report::new();

    let sys = VariationalSystem::new(metric.clone(), Lagrangian::geodesic_circle(&metric, m))?;
    let gamma = sys.geometry().christoffel().clone();
    let s = sys.symbols();
    let f = &s.flat_lagrangian;

    let df = Form1::exact(f);
    let commute = Form1::exact(&jet.total_derivative(f)?).minus(&df.total_derivative(&jet)?);
    report.residuals("d_commutes_with_total_derivative", &zero_check(&commute.labelled(), &pts, tol)?);

    let null = jet.lagrange_derivative(&jet.total_derivative(f)?)?;
    report.residuals("delta_of_total_derivative", &zero_check(&null.labelled(), &pts, tol)?);

    // ι_r d_T − d_T ι_r = r ι_{r−1}
    let mut ladder = Vec::new();
    for r in 1..=3 {
        let lhs = df.total_derivative(&jet)?.iota(r).minus(&df.iota(r).total_derivative(&jet)?);
        let diff = lhs.minus(&df.iota(r - 1).scaled(r as f64));
        ladder.extend(diff.labelled().into_iter().map(|(l, e)| (format!("r{r}:{l}"), e)));
    }
    report.residuals("iota_ladder", &zero_check(&ladder, &pts, tol)?);

    report.residuals("commutator_curvature", &commutator_check(&metric, RiemannConvention::Pinned, &pts, tol)?);
    report.residuals("commutator_first_order", &first_order_commutator_check(&metric, &pts, tol)?);

    let xi = [coord(0, 2) * coord(1, 0), coord(1, 1).sin()];
    let sigma = [coord(0, 0) * coord(0, 1), coord(1, 2)];
    let xp = covariant_prime_vector(&xi, &gamma, &jet)?;
    let sp = covariant_prime_covector(&sigma, &gamma, &jet)?;
    let pairing = &sigma[0] * &xi[0] + &sigma[1] * &xi[1];
    let rule =
        jet.total_derivative(&pairing)? - (&sp[0] * &xi[0] + &sp[1] * &xi[1] + &sigma[0] * &xp[0] + &sigma[1] * &xp[1]);
    report.residuals("covariant_product_rule", &zero_check(&[("pairing".into(), rule)], &pts, tol)?);

    let length = Lagrangian::length(&metric, 1.0).flat_view(&gamma);
    let (a, b) = zermelo_check(&length, &pts, tol)?;
    report.residuals("homogeneity_length_zeta1", &a);
    report.residuals("homogeneity_length_zeta2", &b);
    let k = Lagrangian::frenet_curvature(&metric).flat_view(&gamma);
    let (a, b) = param_independence_check(&k, &pts, tol)?;
    report.residuals("parameter_independence_curvature_zeta1", &a);
    report.residuals("parameter_independence_curvature_zeta2", &b);

    report.residuals("momenta_relation_flat", &zero_check(&sys.momenta_relation_flat()?.labelled(), &pts, tol)?);
    report.residuals(
        "momenta_relation_covariant",
        &zero_check(&sys.momenta_relation_covariant()?.labelled(), &pts, tol)?,
    );

    let zeta_form = &s.hamilton_legendre - &s.hamilton_zeta;
    report.residuals("hamilton_zeta", &zero_check(&[("H".into(), zeta_form)], &pts, tol)?);
    let split = &s.hamilton_legendre + &k;
    report.residuals("hamilton_equals_minus_curvature", &zero_check(&[("H+k".into(), split)], &pts, tol)?);

    let eps: [Expr; 2] = std::array::from_fn(|i| &s.euler_poisson[i] + &s.delta[i]);
    report.residuals("euler_poisson_equals_minus_delta", &zero_check(&labelled_pair("dx", &eps), &pts, tol)?);

    let curvature_sys = VariationalSystem::new(metric.clone(), Lagrangian::frenet_curvature(&metric))?;
    let grad = &curvature_sys.symbols().covariant_gradient;
    report.residuals("curvature_gradient_cancels", &zero_check(&labelled_pair("dx", grad), &pts, tol)?);

    let geo = sys.geometry();
    let mut worst = (0.0f64, Location::Batch);
    for (n, p) in pts.iter().enumerate() {
        let pg = geo.at(p.order(0))?;
        let state = CurveJet::from_flat(p, &pg);
        // near-null velocities and parallel u, w have no spin force to rewrite
        let Ok(r) = spin_rewrite_residual(&pg, &state) else { continue };
        let size = r[0].abs().max(r[1].abs());
        if size > worst.0 || size.is_nan() {
            worst = (size, Location::Point(n));
        }
    }
    report.bound("spin_force_rewrite", worst.1, worst.0, SPIN_REWRITE_TOLERANCE);
    Ok(report)
}

fn corrupt_source() -> Form1 {
    Form1::source([coord(0, 3), coord(1, 3)])
}

/// `δ² = 0` on a corpus of Lagrangians over the configured metric, and the
/// variationality of the planar third-order source form.
pub fn verify_variational(cfg: &ScenarioConfig, _out: &Path) -> Result<Report, CliError> {
    let metric = cfg.metric()?;
    let m = cfg.lagrangian.m;
    let tol = cfg.tolerance();
    let mut report = Report::new();

    // δ of a second-order Lagrangian is fourth order, so δ² reaches order 8
    let wide = JetSpace::new(9)?;
    let wide_pts = points(cfg, wide.max_order());
    let gamma = Geometry::new(metric.clone()).christoffel().clone();
    let corpus = [
        ("kinetic", Lagrangian::kinetic(&metric)),
        ("length", Lagrangian::length(&metric, m)),
        ("curvature", Lagrangian::frenet_curvature(&metric)),
        ("circle", Lagrangian::geodesic_circle(&metric, m)),
    ];
    for (name, lag) in corpus {
        let delta = wide.lagrange_derivative(&lag.flat_view(&gamma))?;
        let d2 = wide.lagrange_derivative1(&delta)?;
        report.residuals(format!("delta_squared.{name}"), &zero_check(&d2.labelled(), &wide_pts, tol)?);
    }

    let jet = JetSpace::default();
    let pts = points(cfg, jet.max_order());
    let (label, source) = if cfg.verification.corrupt_source {
        log::warn!("verification.corrupt_source is set: testing E_i = x_(3)^i");
        ("source_form_variational.corrupted", corrupt_source())
    } else {
        ("source_form_variational", planar_source_form(m))
    };
    report.residuals(label, &variationality_check(&jet, &source, &pts, tol)?.residuals);

    let delta = jet.lagrange_derivative(&flat_circle_lagrangian(m))?.semibasic();
    let matches = delta.minus(&planar_source_form(m));
    report.residuals("source_form_from_lagrangian", &zero_check(&matches.labelled(), &pts, tol)?);

    let control = variationality_check(&jet, &corrupt_source(), &pts, tol)?;
    report.exceeds("negative_control_rejected", Location::Batch, control.max_residual, NEGATIVE_CONTROL_THRESHOLD);
    Ok(report)
}

/// Integrates the configured scenario and writes `trajectory.csv`.
///
/// A trajectory that stops early is written up to the failure and reported
/// as a runtime error after the summary is recorded.
pub fn integrate(cfg: &ScenarioConfig, out: &Path) -> Result<(Report, Option<CliError>), CliError> {
    let metric = cfg.metric()?;
    let initial = cfg.initial()?;
    let icfg = cfg.integrator()?;
    let integrator = Integrator::new(metric, icfg)?;
    let traj = integrator.run(&initial);
    log::info!("integrated {} steps, {} samples", traj.steps, traj.samples.len());

    let mut w = csv_writer(out, "trajectory.csv")?;
    w.write_record(["t", "x0", "x1", "u0", "u1", "w0", "w1", "speed", "k", "H", "S01"])?;
    for s in &traj.samples {
        let row = [s.t, s.x[0], s.x[1], s.u[0], s.u[1], s.w[0], s.w[1], s.speed, s.k, s.hamilton, s.s01];
        w.write_record(row.iter().map(|v| fmt_f64(*v)))?;
    }
    w.flush()?;

    let ic = &cfg.integration;
    let mut report = Report::new();
    report.bound("k_drift", Location::Batch, traj.k_drift(), ic.drift_tolerance);
    report.bound("hamilton_drift", Location::Batch, traj.hamilton_drift(), ic.drift_tolerance);
    report.bound("hamilton_identity", Location::Batch, traj.hamilton_identity_error(), ic.hamilton_tolerance);
    let closure = match (traj.samples.first(), traj.last()) {
        (Some(a), Some(b)) => (a.x[0] - b.x[0]).abs().max((a.x[1] - b.x[1]).abs()),
        _ => f64::NAN,
    };
    if ic.check_closure {
        report.bound("closure", Location::Batch, closure, ic.drift_tolerance);
    } else {
        report.info("closure", Location::Batch, closure);
    }
    if ic.check_speed {
        report.bound("speed_drift", Location::Batch, traj.speed_drift(), ic.drift_tolerance);
    } else {
        report.info("speed_drift", Location::Batch, traj.speed_drift());
    }
    if let Some(first) = traj.samples.first() {
        report.info("initial_curvature", Location::Batch, first.k);
    }
    let failure = traj.failure.map(|e| {
        let t = traj.samples.last().map_or(ic.t_span[0], |s| s.t);
        report.fail("completed", Location::Time(t));
        CliError::Runtime(format!("trajectory stopped early ({e}); partial trajectory written"))
    });
    Ok((report, failure))
}

/// Step-halving study with rk4; writes `convergence.csv`.
pub fn convergence(cfg: &ScenarioConfig, out: &Path) -> Result<Report, CliError> {
    let metric = cfg.metric()?;
    let initial = cfg.initial()?;
    let icfg = cfg.integrator()?;
    let c = &cfg.convergence;
    if c.steps.len() < 3 {
        return Err(CliError::Config("convergence.steps needs at least three step sizes".into()));
    }
    let probe = convergence_probe(&metric, &initial, &icfg, &c.steps)?;

    let mut w = csv_writer(out, "convergence.csv")?;
    w.write_record(["h", "error_vs_finest", "order"])?;
    for (n, h) in probe.steps.iter().enumerate() {
        let err = probe.errors.get(n).map(|e| fmt_f64(*e)).unwrap_or_default();
        let order = n.checked_sub(2).and_then(|k| probe.orders.get(k)).map(|p| fmt_f64(*p)).unwrap_or_default();
        w.write_record([fmt_f64(*h), err, order])?;
    }
    w.flush()?;

    let mut report = Report::new();
    let p = probe.observed_order().unwrap_or(f64::NAN);
    report.info("observed_order", Location::Batch, p);
    report.bound("order_deviation", Location::Batch, (p - c.expected_order).abs(), c.order_tolerance);
    if probe.verdict == ConvergenceVerdict::Inconclusive {
        report.fail("monotone_differences", Location::Batch);
    }
    Ok(report)
}
