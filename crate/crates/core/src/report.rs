//! Serializable pass/fail reports.

use serde::{Deserialize, Serialize};

use crate::lattice::GridSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// `None` for observations that carry no pass/fail criterion.
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `measured <= tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance: Some(tolerance),
            pass: measured <= tolerance,
            note: None,
        }
    }

    pub fn observation(name: impl Into<String>, measured: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance: None,
            pass: true,
            note: None,
        }
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub kind: String,
    pub grid: Option<GridSpec>,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(kind: impl Into<String>, grid: Option<GridSpec>, seed: Option<u64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            grid,
            seed,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.pass;
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
