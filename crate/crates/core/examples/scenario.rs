// Drives the command-line layer from code: a TOML scenario in, CSV files
// and a sorted report out.

use std::error::Error;

use concircle::cli::{execute, Command, ScenarioConfig, EFFECTIVE_CONFIG};

const SCENARIO: &str = r#"
[metric]
builtin = "sphere"

[lagrangian]
m = 3.0

[integration]
formulation = "concircular"
t_span = [0.0, 5.0]
stride = 500
check_speed = true

[integration.initial]
x = [1.0, 0.0]
u = [1.0, 0.0]
w = [0.0, 0.5]
"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut cfg = ScenarioConfig::from_toml(SCENARIO)?;
    cfg.output.dir = std::env::temp_dir().join(format!("concircle-scenario-{}", std::process::id()));

    for cmd in [Command::CheckMetric, Command::Integrate] {
        let (report, pending) = execute(cmd, &cfg)?;
        println!("== {} (all pass: {})", cmd.name(), report.passed());
        print!("{report}");
        if let Some(e) = pending {
            println!("{e}");
        }
    }
    let traj = std::fs::read_to_string(cfg.output.dir.join("trajectory.csv"))?;
    for line in traj.lines().take(3) {
        println!("{line}");
    }
    println!("re-run with: concircle integrate --config {}", cfg.output.dir.join(EFFECTIVE_CONFIG).display());
    std::fs::remove_dir_all(&cfg.output.dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
