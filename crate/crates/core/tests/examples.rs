//! Every example runs, and every shipped scenario gives the expected exit code.

macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(expressions, "expressions.rs");
example!(jet_calculus, "jet_calculus.rs");
example!(curvature, "curvature.rs");
example!(momenta, "momenta.rs");
example!(integrate_circle, "integrate_circle.rs");
example!(convergence, "convergence.rs");
example!(scenario, "scenario.rs");

#[test]
fn examples_run() {
    expressions::run_example().unwrap();
    jet_calculus::run_example().unwrap();
    curvature::run_example().unwrap();
    momenta::run_example().unwrap();
    integrate_circle::run_example().unwrap();
    convergence::run_example().unwrap();
    scenario::run_example().unwrap();
}

#[test]
fn shipped_scenarios() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs");
    let out = tempfile::tempdir().unwrap();
    let cases = [
        ("flat_circle", "integrate", 0),
        ("flat_circle", "convergence", 0),
        ("sphere_concircular", "integrate", 0),
        ("sphere_euler_poisson", "integrate", 0),
        ("hyperbolic_euler_poisson", "integrate", 0),
        ("catenoid", "check-metric", 0),
        ("catenoid", "verify-operators", 0),
        ("corrupt_source", "verify-variational", 1),
        ("corrupt_source", "integrate", 2),
    ];
    for (name, cmd, code) in cases {
        let config = format!("{dir}/{name}.toml");
        let target = out.path().join(name);
        let args = ["concircle", cmd, "--config", &config, "--out", target.to_str().unwrap()];
        assert_eq!(concircle::cli::run(args), code, "{name} {cmd}");
    }
}
