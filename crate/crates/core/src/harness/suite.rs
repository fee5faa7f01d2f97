//! Batches of scenarios and the regression suite.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Command, Config, ScenarioSpec};
use super::report::RunReport;
use super::scenarios::{run_spec, RunOptions};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "KGEOM_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckTally {
    pub anchor: String,
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub scenarios_passed: usize,
    pub scenarios_total: usize,
    pub checks_passed: usize,
    pub checks_total: usize,
    /// `scenario/check` for every failed check, and `scenario` for errors.
    pub failures: Vec<String>,
    pub by_check: BTreeMap<String, CheckTally>,
    pub config_hash: String,
    pub version: String,
    pub reports: Vec<RunReport>,
}

impl SuiteReport {
    fn from_reports(config: &Config, mut reports: Vec<RunReport>) -> Self {
        reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
        let mut by_check: BTreeMap<String, CheckTally> = BTreeMap::new();
        let mut failures = Vec::new();
        for r in &reports {
            if let Some(e) = &r.error {
                failures.push(format!("{} (error: {e})", r.scenario));
            }
            for c in &r.checks {
                let t = by_check.entry(c.name.clone()).or_insert_with(|| CheckTally {
                    anchor: c.anchor.clone(),
                    passed: 0,
                    total: 0,
                });
                t.total += 1;
                if c.passed {
                    t.passed += 1;
                } else {
                    failures.push(format!("{}/{} [model {}]", r.scenario, c.name, r.model));
                }
            }
        }
        let checks_total = reports.iter().map(|r| r.checks.len()).sum();
        let checks_passed = reports.iter().map(|r| r.checks.iter().filter(|c| c.passed).count()).sum();
        Self {
            passed: reports.iter().all(|r| r.passed),
            scenarios_passed: reports.iter().filter(|r| r.passed).count(),
            scenarios_total: reports.len(),
            checks_passed,
            checks_total,
            failures,
            by_check,
            config_hash: config.hash.clone(),
            version: env!("CARGO_PKG_VERSION").into(),
            reports,
        }
    }

    /// One-page plain-text summary: every check with its anchor and tally.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kgeom suite {}  config {}", self.version, &self.config_hash[..12.min(self.config_hash.len())]);
        let _ = writeln!(
            s,
            "scenarios {}/{}  checks {}/{}  {}",
            self.scenarios_passed,
            self.scenarios_total,
            self.checks_passed,
            self.checks_total,
            if self.passed { "PASS" } else { "FAIL" }
        );
        let _ = writeln!(s);
        for (name, t) in &self.by_check {
            let mark = if t.passed == t.total { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{mark} {name:<26} {:>3}/{:<3} {}", t.passed, t.total, t.anchor);
        }
        if !self.failures.is_empty() {
            let _ = writeln!(s);
            for f in &self.failures {
                let _ = writeln!(s, "failed: {f}");
            }
        }
        s
    }

    /// Writes every scenario's artifacts plus `suite.json` and `summary.txt`.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for r in &self.reports {
            r.write(dir)?;
        }
        std::fs::write(dir.join("suite.json"), serde_json::to_string_pretty(self).expect("suite serializes"))?;
        std::fs::write(dir.join("summary.txt"), self.summary())
    }
}

/// Worker count: the environment variable, then the config, then rayon's default.
pub fn worker_count(config: &Config) -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .or(config.workers)
}

/// Runs the given scenarios in parallel; the result is sorted by name.
pub fn run_batch(config: &Config, specs: &[&ScenarioSpec], opts: &RunOptions) -> SuiteReport {
    let run = || specs.par_iter().map(|s| run_spec(config, s, opts)).collect::<Vec<_>>();
    let reports = match worker_count(config).map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build()) {
        Some(Ok(pool)) => pool.install(run),
        _ => run(),
    };
    SuiteReport::from_reports(config, reports)
}

/// Every scenario tagged `regression`.
pub fn run_suite(config: &Config, opts: &RunOptions) -> SuiteReport {
    run_suite_named(config, &[], opts)
}

/// Regression scenarios restricted to `names`; all of them when `names` is empty.
pub fn run_suite_named(config: &Config, names: &[String], opts: &RunOptions) -> SuiteReport {
    let specs: Vec<&ScenarioSpec> = config
        .scenarios
        .iter()
        .filter(|s| s.is_regression() && (names.is_empty() || names.contains(&s.name)))
        .collect();
    run_batch(config, &specs, opts)
}

/// Every scenario of one command, or only the named ones.
pub fn run_command(config: &Config, command: Command, names: &[String], opts: &RunOptions) -> SuiteReport {
    let specs: Vec<&ScenarioSpec> = config
        .scenarios
        .iter()
        .filter(|s| s.command() == command && (names.is_empty() || names.contains(&s.name)))
        .collect();
    run_batch(config, &specs, opts)
}
