//! Run reports.

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Passes when `value <= tolerance`.
    AtMost,
    /// Passes when `value >= tolerance`.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            comparison: Comparison::AtMost,
            pass: value <= tolerance,
        }
    }

    pub fn at_least(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            comparison: Comparison::AtLeast,
            pass: value >= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    /// Path relative to the output directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Passed,
    ChecksFailed,
    SolverError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Passed => 0,
            Status::ChecksFailed => 1,
            Status::SolverError => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioConfig,
    pub status: Status,
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
    /// Solver or IO failure that cut the run short.
    pub error: Option<String>,
    pub wall_clock_seconds: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check, for terminals.
    pub fn summary(&self) -> String {
        let mut out = format!("{} [{}]: {:?}\n", self.scenario.name, self.scenario.scenario.kind(), self.status);
        for c in &self.checks {
            let op = match c.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            let mark = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {mark} {}: {:.3e} {op} {:.3e}\n", c.name, c.value, c.tolerance));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("  error: {e}\n"));
        }
        out
    }
}
