//! JSON reports: named checks with anchors, plus free-form sections.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub exact_or_numeric: Mode,
    /// Seconds; null unless timings were requested.
    pub elapsed: Option<f64>,
}

/// Outcome of one check body: pass flag and the two compared sides.
pub struct Outcome {
    pub pass: bool,
    pub lhs: Value,
    pub rhs: Value,
}

impl Outcome {
    pub fn new(pass: bool, lhs: impl Into<Value>, rhs: impl Into<Value>) -> Self {
        Outcome { pass, lhs: lhs.into(), rhs: rhs.into() }
    }

    /// Passes when the two rendered sides are equal.
    pub fn equal(lhs: impl ToString, rhs: impl ToString) -> Self {
        let (l, r) = (lhs.to_string(), rhs.to_string());
        Outcome { pass: l == r, lhs: l.into(), rhs: r.into() }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub timings: bool,
    pub scenario_echo: Value,
    checks: BTreeMap<String, Check>,
    sections: BTreeMap<String, Value>,
    error: Option<Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, timings: bool, scenario_echo: Value) -> Self {
        Report {
            command: command.to_string(),
            seed,
            timings,
            scenario_echo,
            checks: BTreeMap::new(),
            sections: BTreeMap::new(),
            error: None,
        }
    }

    /// Runs `body` as the check `name`. Errors inside the body propagate.
    pub fn check(&mut self, name: &str, anchor: &str, mode: Mode, body: impl FnOnce() -> Result<Outcome>) -> Result<bool> {
        let start = Instant::now();
        let out = body()?;
        let elapsed = self.timings.then(|| start.elapsed().as_secs_f64());
        self.checks.insert(
            name.to_string(),
            Check {
                name: name.to_string(),
                anchor: anchor.to_string(),
                status: if out.pass { Status::Pass } else { Status::Fail },
                lhs: out.lhs,
                rhs: out.rhs,
                exact_or_numeric: mode,
                elapsed,
            },
        );
        Ok(out.pass)
    }

    pub fn skip(&mut self, name: &str, anchor: &str, reason: &str) {
        self.checks.insert(
            name.to_string(),
            Check {
                name: name.to_string(),
                anchor: anchor.to_string(),
                status: Status::Skipped,
                lhs: Value::Null,
                rhs: json!({ "reason": reason }),
                exact_or_numeric: Mode::Exact,
                elapsed: None,
            },
        );
    }

    pub fn section(&mut self, name: &str, value: Value) {
        self.sections.insert(name.to_string(), value);
    }

    pub fn set_error(&mut self, e: &Error) {
        self.error = Some(json!({ "kind": error_kind(e), "message": e.to_string() }));
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.values()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.get(name)
    }

    pub fn sections(&self) -> &BTreeMap<String, Value> {
        &self.sections
    }

    pub fn failed(&self) -> bool {
        self.checks.values().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let status = if self.error.is_some() {
            "error"
        } else if self.failed() {
            "fail"
        } else {
            "pass"
        };
        json!({
            "command": self.command,
            "status": status,
            "seed": self.seed,
            "versions": { "starkrankin": env!("CARGO_PKG_VERSION") },
            "scenario_echo": self.scenario_echo,
            "checks": self.checks.values().collect::<Vec<_>>(),
            "sections": self.sections,
            "error": self.error,
        })
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Unsupported(_) => "unsupported",
        Error::Resource(_) => "resource",
        Error::Precision(_) => "precision",
        Error::NoSquareRoot(_) => "no_square_root",
        Error::Degenerate(_) => "degenerate",
        Error::IdentityFailure(_) => "identity_failure",
        Error::Validation(_) => "validation",
        Error::Internal(_) => "internal",
    }
}
