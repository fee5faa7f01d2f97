//! Run reports and their JSON and CSV forms.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::Serialize;

/// One named pass/fail check with its numeric evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The mathematical statement the check exercises.
    pub anchor: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: &str, anchor: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            passed: value <= tolerance,
            value,
            tolerance,
            detail: String::new(),
        }
    }

    /// Passes when `value ≥ -tolerance`.
    pub fn at_least_zero(name: &str, anchor: &str, value: f64, tolerance: f64) -> Self {
        Self {
            passed: value >= -tolerance,
            ..Self::at_most(name, anchor, value, tolerance)
        }
    }

    pub fn flag(name: &str, anchor: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            passed,
            value: if passed { 1.0 } else { 0.0 },
            tolerance: 0.0,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// A table written as one CSV file next to the JSON report.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()
    }
}

/// Shortest round-trip decimal form; identical across runs and platforms.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub command: String,
    pub model: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub evidence: BTreeMap<String, serde_json::Value>,
    pub error: Option<String>,
    pub seed: u64,
    pub tol_scale: f64,
    pub config_hash: String,
    pub version: String,
    pub wall_clock_s: f64,
    #[serde(skip)]
    pub tables: BTreeMap<String, Table>,
}

impl RunReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `<scenario>.json` and one `<scenario>[_<table>].csv` per table.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.json", self.scenario)), self.to_json())?;
        for (k, t) in &self.tables {
            let file = if k.is_empty() {
                format!("{}.csv", self.scenario)
            } else {
                format!("{}_{k}.csv", self.scenario)
            };
            t.write(&dir.join(file))?;
        }
        Ok(())
    }
}
