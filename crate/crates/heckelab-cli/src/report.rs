//! Run reports. The JSON form carries no timings so that equal inputs give
//! byte-identical output; timings go to the text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::suites::{Knobs, SuiteOutput};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub suite: &'static str,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    pub max_terms: usize,
    pub samples: usize,
    pub checks: Vec<CheckRecord>,
    pub details: BTreeMap<String, Value>,
    pub passed: bool,
    pub exit_status: u8,
    #[serde(skip)]
    timings: Vec<(String, usize, usize, Duration)>,
}

impl RunReport {
    pub fn new(command: &'static str, suite: &'static str, k: &Knobs) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command,
            suite,
            seed: k.seed,
            window: k.window,
            max_terms: k.max_terms,
            samples: k.samples,
            checks: Vec::new(),
            details: BTreeMap::new(),
            passed: true,
            exit_status: 0,
            timings: Vec::new(),
        }
    }

    pub fn add_suite(&mut self, name: &str, out: SuiteOutput, elapsed: Duration) {
        let failed = out.report.failures().count();
        self.timings
            .push((name.to_string(), out.report.checks.len(), failed, elapsed));
        for c in out.report.checks {
            self.checks.push(CheckRecord {
                name: format!("{name}/{}", c.name),
                verdict: if c.passed { "pass" } else { "fail" },
                witness: c.witness,
            });
        }
        self.details.insert(name.to_string(), out.details);
    }

    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.passed = self.checks.iter().all(|c| c.verdict == "pass");
        self.exit_status = u8::from(!self.passed);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One line per failed check and per suite.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in self.checks.iter().filter(|c| c.verdict == "fail") {
            let _ = writeln!(s, "FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
        }
        for (name, n, failed, t) in &self.timings {
            let _ = writeln!(s, "{name}: {} of {n} checks passed in {:.2?}", n - failed, t);
        }
        let _ = writeln!(
            s,
            "{}",
            if self.passed {
                "all checks passed"
            } else {
                "some checks failed"
            }
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use heckelab::{Check, Exec, ValidationReport};

    #[test]
    fn checks_are_sorted_and_status_follows() {
        let k = Knobs {
            seed: 0,
            window: None,
            max_terms: 6,
            samples: 1,
            exec: Exec::Sequential,
        };
        let mut rep = RunReport::new("verify", "all", &k);
        let mut v = ValidationReport::default();
        v.push(Check::pass("b"));
        v.push(Check::fail("a", "witness"));
        rep.add_suite(
            "s",
            SuiteOutput {
                report: v,
                details: Value::Null,
            },
            Duration::ZERO,
        );
        let rep = rep.finish();
        assert_eq!(rep.checks[0].name, "s/a");
        assert_eq!(rep.exit_status, 1);
        assert!(!rep.to_json().contains("elapsed"));
        assert!(rep.summary().contains("FAIL s/a: witness"));
    }
}
