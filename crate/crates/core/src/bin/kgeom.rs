use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use killing_geom::harness::{run_command, run_suite_named, Command, Config, RunOptions};

#[derive(Parser)]
#[command(name = "kgeom", version, about = "Run geometry scenarios from a TOML config")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bundle-curvature and curvature identities of a model.
    Verify(Common),
    /// Sectional-curvature samples.
    Curvature(Common),
    /// Geodesic triangles and distances in the base.
    Geodesic(Common),
    /// Foliations of the base by geodesics.
    Foliate(Common),
    /// Vertical cylinders over base curves.
    Cylinder(Common),
    /// Vertical-plane sweeps of surfaces.
    Sweep(Common),
    /// Every scenario tagged `regression`.
    Suite(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "kgeom-out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "tol-scale")]
    tol_scale: Option<f64>,
    /// Run only these scenarios (repeatable).
    #[arg(long)]
    scenario: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command) = match cli.command {
        Cmd::Verify(c) => (c, Some(Command::Verify)),
        Cmd::Curvature(c) => (c, Some(Command::Curvature)),
        Cmd::Geodesic(c) => (c, Some(Command::Geodesic)),
        Cmd::Foliate(c) => (c, Some(Command::Foliate)),
        Cmd::Cylinder(c) => (c, Some(Command::Cylinder)),
        Cmd::Sweep(c) => (c, Some(Command::Sweep)),
        Cmd::Suite(c) => (c, None),
    };
    if let Some(t) = common.tol_scale {
        if !(t > 0.0) {
            eprintln!("error: --tol-scale must be positive");
            return ExitCode::from(2);
        }
    }
    let config = match Config::load(&common.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    for name in &common.scenario {
        if config.scenario(name).is_none() {
            eprintln!("config error: unknown scenario {name:?}");
            return ExitCode::from(2);
        }
    }
    let opts = RunOptions {
        seed: common.seed,
        tol_scale: common.tol_scale,
    };
    let report = match command {
        Some(c) => run_command(&config, c, &common.scenario, &opts),
        None => run_suite_named(&config, &common.scenario, &opts),
    };
    if let Err(e) = report.write(&common.out) {
        eprintln!("error: cannot write {}: {e}", common.out.display());
        return ExitCode::from(1);
    }
    print!("{}", report.summary());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
