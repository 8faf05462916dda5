//! Run reports: the JSON document every command emits, and CSV series.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use isodisp::DisplacementReport;

use crate::CliError;

pub const TOOL: &str = "isodisp";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A named experiment with its validated parameters and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Invocation {
    Analyze {
        geometry: String,
        input: String,
        powers: usize,
    },
    Repro(ExperimentSpec),
}

/// `passed` iff `slack >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub slack: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, slack: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            passed: slack >= -tolerance,
            slack,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub invocation: Invocation,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displacement: Option<DisplacementReport>,
    pub summary: BTreeMap<String, Value>,
    /// Only present with `--timing`, so that reports are reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(invocation: Invocation) -> Self {
        RunReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            invocation,
            checks: Vec::new(),
            displacement: None,
            summary: BTreeMap::new(),
            wall_time_seconds: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("summary values serialize");
        self.summary.insert(key.into(), v);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// One CSV file of plot data.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Series {
    pub fn new(name: &str, header: &[&'static str]) -> Self {
        Series {
            name: name.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(format!("{}.csv", self.name));
        fs::write(&path, self.to_csv()).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

/// Builds a CSV row from displayable cells.
#[macro_export]
macro_rules! row {
    ($($cell:expr),* $(,)?) => {
        vec![$($cell.to_string()),*]
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_row() {
        let mut s = Series::new("demo", &["n", "value"]);
        s.push(row![1, 0.5]);
        assert_eq!(s.to_csv(), "n,value\n1,0.5\n");
    }

    #[test]
    fn report_round_trips() {
        let mut r = RunReport::new(Invocation::Repro(ExperimentSpec {
            name: "jsr".into(),
            parameters: BTreeMap::from([("nmax".into(), Value::from(4))]),
            seed: 3,
        }));
        r.checks.push(CheckResult::new("width", 0.01, 0.0));
        r.note("lower", 1.5);
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.to_json().contains("wall_time"));
    }
}
