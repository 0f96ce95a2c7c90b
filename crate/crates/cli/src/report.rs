use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use affine_floer::verify::CheckResult;

/// One pass/fail entry of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checked: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Check {
    pub fn simple(name: impl Into<String>, passed: bool, detail: Option<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            checked: None,
            failures: if passed {
                Vec::new()
            } else {
                detail.into_iter().collect()
            },
            max_error: None,
            elapsed_ms: None,
        }
    }
}

impl From<CheckResult> for Check {
    fn from(c: CheckResult) -> Self {
        Self {
            name: c.name,
            passed: c.passed,
            checked: Some(c.checked),
            failures: c.failures,
            max_error: c.max_error,
            elapsed_ms: Some(c.elapsed_ms),
        }
    }
}

/// Machine-readable output of every subcommand. The process exits with 0
/// exactly when `passed` is true.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub elapsed_ms: f64,
    /// Human-readable summary lines; not part of the JSON schema.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl CommandReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results: Value::Null,
            checks: Vec::new(),
            passed: true,
            elapsed_ms: 0.0,
            lines: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn finish(mut self, start: Instant) -> Self {
        self.passed = self.checks.iter().all(|c| c.passed);
        self.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let mut line = format!("{status} {}", c.name);
            if let Some(n) = c.checked {
                line.push_str(&format!(" [{n} checked"));
                if let Some(e) = c.max_error {
                    line.push_str(&format!(", max error {e:.3e}"));
                }
                line.push(']');
            }
            out.push_str(&line);
            out.push('\n');
            for f in &c.failures {
                out.push_str(&format!("    {f}\n"));
            }
        }
        out.push_str(&format!(
            "{}: {} ({:.1} ms)\n",
            self.command,
            if self.passed { "ok" } else { "FAILED" },
            self.elapsed_ms
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn report_round_trips_and_tracks_status() {
        let mut r = CommandReport::new("points", json!({ "d": 2 }));
        r.results = json!({ "count": 6 });
        r.lines.push("six points".into());
        r.check(Check::simple("count", true, Some("unused".into())));
        let r = r.finish(Instant::now());
        assert!(r.passed && r.checks[0].failures.is_empty());
        let text = serde_json::to_string(&r).unwrap();
        let back: CommandReport = serde_json::from_str(&text).unwrap();
        assert_eq!(
            back,
            CommandReport {
                lines: Vec::new(),
                ..r.clone()
            }
        );

        let mut bad = CommandReport::new("x", Value::Null);
        bad.check(Check::simple("fails", false, Some("why".into())));
        let bad = bad.finish(Instant::now());
        assert!(!bad.passed);
        assert!(bad.to_text().contains("FAIL fails\n    why"));
    }
}
