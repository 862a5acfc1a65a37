//! Pass/fail verification reports.

use std::fmt::{self, Write as _};

/// Formats a double with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Outcome of one named property check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest residual seen, for numeric checks.
    pub residual: Option<f64>,
    /// Number of cases examined.
    pub cases: usize,
    /// First counterexample, when the check failed.
    pub witness: Option<String>,
}

impl Check {
    pub fn exact(name: impl Into<String>, cases: usize, witness: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed: witness.is_none(),
            residual: None,
            cases,
            witness,
        }
    }

    pub fn numeric(name: impl Into<String>, cases: usize, residual: f64, tol: f64) -> Self {
        let passed = residual.is_finite() && residual < tol;
        Check {
            name: name.into(),
            passed,
            residual: Some(residual),
            cases,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        if !self.passed {
            self.witness = witness;
        }
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.passed { "PASS" } else { "FAIL" }, self.name)?;
        write!(f, " cases={}", self.cases)?;
        if let Some(r) = self.residual {
            write!(f, " max_residual={}", fmt_f64(r))?;
        }
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        Ok(())
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{c}");
        }
        out
    }
}
