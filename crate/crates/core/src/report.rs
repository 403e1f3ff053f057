//! Pass/fail records for the construction checks.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub claim: String,
    pub passed: bool,
    pub solver_calls: u64,
    pub completions_checked: u64,
    pub details: Vec<String>,
    /// A structure reproducing the first failure, in `.h3t` text.
    pub counterexample: Option<String>,
}

impl WitnessReport {
    pub fn new(claim: impl Into<String>) -> Self {
        WitnessReport {
            claim: claim.into(),
            passed: true,
            solver_calls: 0,
            completions_checked: 0,
            details: Vec::new(),
            counterexample: None,
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    /// Records `line` and marks the report failed unless `ok`.
    pub fn check(&mut self, ok: bool, line: impl Into<String>) -> bool {
        let line = line.into();
        if ok {
            self.details.push(format!("ok: {line}"));
        } else {
            self.passed = false;
            self.details.push(format!("FAILED: {line}"));
        }
        ok
    }

    pub fn fail_with(&mut self, line: impl Into<String>, artifact: Option<String>) {
        self.check(false, line);
        if self.counterexample.is_none() {
            self.counterexample = artifact;
        }
    }

    /// Folds a sub-report in, keeping its details indented under its claim.
    pub fn absorb(&mut self, other: WitnessReport) {
        self.passed &= other.passed;
        self.solver_calls += other.solver_calls;
        self.completions_checked += other.completions_checked;
        self.details.push(format!(
            "{} {}",
            other.claim,
            if other.passed { "PASS" } else { "FAIL" }
        ));
        if !other.passed {
            self.details
                .extend(other.details.into_iter().map(|d| format!("  {d}")));
        }
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CLAIM {} {}", self.claim, self.status())?;
        writeln!(
            f,
            "  solver calls: {}, completions checked: {}",
            self.solver_calls, self.completions_checked
        )?;
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "  counterexample:")?;
            for line in c.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}
