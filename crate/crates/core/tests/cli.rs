use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use concircle::cli::{ScenarioConfig, EFFECTIVE_CONFIG, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_PASS, EXIT_RUNTIME};

const FLAT_CIRCLE: &str = r#"
[lagrangian]
m = 1.0

[integration]
t_span = [0.0, 6.283185307179586]
check_closure = true
check_speed = true

[integration.initial]
x = [0.0, 0.0]
u = [1.0, 0.0]
w = [0.0, -1.0]
"#;

fn run(dir: &Path, args: &[&str], config: &str) -> Output {
    let path = dir.join("scenario.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_concircle"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .env("CONCIRCLE_LOG", "error")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn every_command_passes_on_the_flat_circle() {
    for cmd in ["check-metric", "verify-operators", "verify-variational", "integrate", "convergence"] {
        let dir = tempfile::tempdir().unwrap();
        let o = run(dir.path(), &[cmd], FLAT_CIRCLE);
        assert_eq!(o.status.code(), Some(EXIT_PASS), "{cmd}: {}", stderr(&o));
        let report = dir.path().join("out").join(format!("{}_report.csv", cmd.replace('-', "_")));
        assert!(report.exists(), "{cmd}");
        assert!(dir.path().join("out").join(EFFECTIVE_CONFIG).exists());
    }
}

#[test]
fn trajectory_header_and_closure() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["integrate"], FLAT_CIRCLE);
    assert_eq!(o.status.code(), Some(EXIT_PASS), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,x0,x1,u0,u1,w0,w1,speed,k,H,S01");
    let summary = fs::read_to_string(dir.path().join("out/integrate_report.csv")).unwrap();
    let closure = summary.lines().find(|l| l.starts_with("closure,")).unwrap();
    let residual: f64 = closure.split(',').nth(2).unwrap().parse().unwrap();
    assert!(residual < 1e-6, "{closure}");
}

#[test]
fn rerun_from_effective_config_is_byte_identical() {
    for cmd in ["integrate", "verify-operators", "convergence", "check-metric"] {
        let dir = tempfile::tempdir().unwrap();
        let first = dir.path().join("first");
        let o = Command::new(env!("CARGO_BIN_EXE_concircle"))
            .args([cmd, "--seed", "7", "--out"])
            .arg(&first)
            .arg("--config")
            .arg({
                let p = dir.path().join("s.toml");
                fs::write(&p, FLAT_CIRCLE).unwrap();
                p
            })
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(EXIT_PASS), "{}", stderr(&o));
        let effective = fs::read_to_string(first.join(EFFECTIVE_CONFIG)).unwrap();
        assert_eq!(ScenarioConfig::from_toml(&effective).unwrap().verification.seed, 7);

        // same output dir: the effective config names it
        let mut before = Vec::new();
        for entry in fs::read_dir(&first).unwrap() {
            let p = entry.unwrap().path();
            before.push((p.clone(), fs::read(&p).unwrap()));
        }
        for (p, _) in &before {
            fs::remove_file(p).unwrap();
        }
        let saved = dir.path().join("effective.toml");
        fs::write(&saved, &effective).unwrap();
        let o = Command::new(env!("CARGO_BIN_EXE_concircle")).arg(cmd).arg("--config").arg(&saved).output().unwrap();
        assert_eq!(o.status.code(), Some(EXIT_PASS), "{}", stderr(&o));
        for (p, bytes) in before {
            assert_eq!(fs::read(&p).unwrap(), bytes, "{cmd}: {} differs", p.display());
        }
    }
}

#[test]
fn asymmetric_explicit_metric_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[metric]\ng00 = \"1\"\ng01 = \"x0\"\ng10 = \"2*x0\"\ng11 = \"1\"\n";
    let o = run(dir.path(), &["check-metric"], cfg);
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    assert!(stderr(&o).contains("g10"), "{}", stderr(&o));
}

#[test]
fn missing_initial_velocity_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FLAT_CIRCLE.replace("u = [1.0, 0.0]\n", "");
    let o = run(dir.path(), &["integrate"], &cfg);
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    assert!(stderr(&o).contains("integration.initial.u"), "{}", stderr(&o));
}

#[test]
fn unknown_keys_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["check-metric"], "[metric]\nbuiltin = \"flat\"\nradius = 2\n");
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    let o = run(dir.path(), &["check-metric"], "[metric]\nbuiltin = \"torus\"\n");
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    let o = run(dir.path(), &["frobnicate"], "");
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn corrupted_source_form_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify-variational"], "[verification]\ncorrupt_source = true\n");
    assert_eq!(o.status.code(), Some(EXIT_CHECK_FAILED));
    let report = fs::read_to_string(dir.path().join("out/verify_variational_report.csv")).unwrap();
    let row = report.lines().find(|l| l.starts_with("source_form_variational")).unwrap();
    assert!(row.ends_with(",fail"), "{row}");
}

#[test]
fn partial_trajectory_is_written_and_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"
[metric]
g00 = "1"
g01 = "0"
g11 = "sqrt(x0)"

[integration]
t_span = [0.0, 2.0]
formulation = "concircular"

[integration.initial]
x = [0.5, 0.0]
u = [-1.0, 0.0]
w = [0.0, 0.0]
"#;
    let o = run(dir.path(), &["integrate"], cfg);
    assert_eq!(o.status.code(), Some(EXIT_RUNTIME), "{}", stderr(&o));
    let summary = fs::read_to_string(dir.path().join("out/integrate_report.csv")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("completed,") && l.ends_with(",fail")), "{summary}");
    let rows = fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap().lines().count();
    assert!(rows > 2);
}

#[test]
fn reports_are_sorted_by_check_name() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify-operators"], "[metric]\nbuiltin = \"hyperbolic\"\n");
    assert_eq!(o.status.code(), Some(EXIT_PASS), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("out/verify_operators_report.csv")).unwrap();
    let names: Vec<&str> = report.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}
