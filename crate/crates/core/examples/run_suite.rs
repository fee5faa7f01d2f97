//! Loads the shipped regression config and runs the foliation scenarios.
//! Pass another config path as the first argument to run its suite instead.

use std::path::PathBuf;

use killing_geom::harness::{run_command, run_suite, Command, Config, RunOptions};

fn main() {
    let arg = std::env::args().nth(1);
    let path = arg
        .clone()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/suite.toml"));
    let config = match Config::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let opts = RunOptions::default();
    let report = if arg.is_some() {
        run_suite(&config, &opts)
    } else {
        run_command(&config, Command::Foliate, &[], &opts)
    };
    print!("{}", report.summary());
}
