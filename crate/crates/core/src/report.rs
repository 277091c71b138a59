use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Named residual checks, each compared against its own threshold.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn record(&mut self, name: impl Into<String>, residual: f64, threshold: f64) -> bool {
        let passed = residual.is_finite() && residual <= threshold;
        self.checks.push(Check { name: name.into(), residual, threshold, passed });
        passed
    }

    /// A yes/no check; residual 0 on success, 1 otherwise.
    pub fn record_flag(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.record(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.residual))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                f,
                "  {:<width$}  {}  residual {:.3e}  (threshold {:.1e})",
                c.name,
                if c.passed { "ok  " } else { "FAIL" },
                c.residual,
                c.threshold,
            )?;
        }
        Ok(())
    }
}
