//! Run reports and exit status.

use serde::Serialize;

use crate::error::Error;

/// One invariant check.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LedgerEntry {
    pub check: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Soft checks are reported but never fail a run.
    pub hard: bool,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct Ledger(pub Vec<LedgerEntry>);

impl Ledger {
    pub fn check(&mut self, check: impl Into<String>, measured: f64, threshold: f64, hard: bool) -> bool {
        let passed = measured <= threshold;
        self.0.push(LedgerEntry { check: check.into(), measured, threshold, passed, hard });
        passed
    }

    pub fn hard(&mut self, check: impl Into<String>, measured: f64, threshold: f64) -> bool {
        self.check(check, measured, threshold, true)
    }

    pub fn soft(&mut self, check: impl Into<String>, measured: f64, threshold: f64) -> bool {
        self.check(check, measured, threshold, false)
    }

    /// Exact integer agreement, recorded as `|a - b| <= 0`.
    pub fn equal(&mut self, check: impl Into<String>, a: usize, b: usize) -> bool {
        self.hard(check, a.abs_diff(b) as f64, 0.0)
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.0
    }

    pub fn hard_failures(&self) -> usize {
        self.0.iter().filter(|e| e.hard && !e.passed).count()
    }

    pub fn soft_failures(&self) -> usize {
        self.0.iter().filter(|e| !e.hard && !e.passed).count()
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum FailureClass {
    Invariant,
    Numerical,
    Input,
}

impl FailureClass {
    pub fn of(e: &Error) -> Self {
        if e.is_numerical() {
            FailureClass::Numerical
        } else if matches!(e, Error::InvariantViolation { .. }) {
            FailureClass::Invariant
        } else {
            FailureClass::Input
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            FailureClass::Invariant => 1,
            FailureClass::Input => 2,
            FailureClass::Numerical => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScenarioError {
    pub class: FailureClass,
    pub message: String,
}

impl From<&Error> for ScenarioError {
    fn from(e: &Error) -> Self {
        ScenarioError { class: FailureClass::of(e), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub id: String,
    pub kind: String,
    pub seed: u64,
    /// The library operation this scenario exercises.
    pub anchor: String,
    pub outputs: serde_json::Value,
    pub ledger: Vec<LedgerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ScenarioError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl RunReport {
    pub fn hard_failures(&self) -> usize {
        self.ledger.iter().filter(|e| e.hard && !e.passed).count()
    }

    pub fn soft_failures(&self) -> usize {
        self.ledger.iter().filter(|e| !e.hard && !e.passed).count()
    }

    pub fn check(&self, name: &str) -> Option<&LedgerEntry> {
        self.ledger.iter().find(|e| e.check == name)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub scenarios: usize,
    pub hard_failures: usize,
    pub soft_failures: usize,
    pub errors: usize,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportFile {
    pub reports: Vec<RunReport>,
    pub summary: Summary,
}

impl ReportFile {
    pub fn new(reports: Vec<RunReport>) -> Self {
        let hard_failures = reports.iter().map(RunReport::hard_failures).sum();
        let soft_failures = reports.iter().map(RunReport::soft_failures).sum();
        let worst_error = reports.iter().filter_map(|r| r.error.as_ref().map(|e| e.class)).max();
        let errors = reports.iter().filter(|r| r.error.is_some()).count();
        let exit_code = match worst_error {
            Some(c) => c.exit_code(),
            None if hard_failures > 0 => 1,
            None => 0,
        };
        let summary = Summary { scenarios: reports.len(), hard_failures, soft_failures, errors, exit_code };
        ReportFile { reports, summary }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
