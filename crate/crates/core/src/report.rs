//! Pass/fail reports produced by the verification suites.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity or bound being checked, written out.
    pub identity: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        identity: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            identity: identity.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "[{mark}] {}: {}", c.name, c.identity)?;
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
