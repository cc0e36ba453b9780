//! Check records and the versioned JSON report.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, witness: Value) -> Self {
        Check {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            witness,
        }
    }

    pub fn skip(name: impl Into<String>, reason: &str) -> Self {
        Check {
            name: name.into(),
            status: Status::Skip,
            witness: Value::String(reason.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub overall: Status,
    /// Computed objects, for commands that produce any.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
}

impl Report {
    /// Sorts checks by name; `overall` fails iff some check fails.
    pub fn new(command: impl Into<String>, seed: u64, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let overall = if checks.iter().all(Check::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            seed,
            checks,
            overall,
            result: Value::Null,
        }
    }

    pub fn with_result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (seed {})\n", self.command, self.seed);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            out.push_str(&format!("  {}: {status}\n", c.name));
            if c.status == Status::Fail {
                out.push_str(&format!("    witness: {}\n", c.witness));
            }
        }
        if !self.result.is_null() {
            let pretty = serde_json::to_string_pretty(&self.result).expect("values serialize");
            out.push_str("result:\n");
            for line in pretty.lines() {
                out.push_str(&format!("  {line}\n"));
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed() { "pass" } else { "FAIL" }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorted_and_overall() {
        let r = Report::new(
            "x",
            7,
            vec![Check::new("b", true, json!(1)), Check::new("a", false, json!(2))],
        );
        assert_eq!(r.checks[0].name, "a");
        assert_eq!(r.overall, Status::Fail);
        let r = Report::new("x", 7, vec![Check::skip("a", "n/a")]);
        assert!(r.passed());
        assert!(r.to_json().contains("\"schema_version\": 1"));
    }
}
