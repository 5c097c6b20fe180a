use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of checking one named inequality `lhs ≤ rhs` numerically.
///
/// `pass` is `lhs ≤ rhs·(1 + rel_slack) + abs_slack`; both slacks are
/// recorded in `context` whenever they are nonzero. `ratio` is `lhs / rhs`,
/// `0` when both sides vanish and `+∞` when only `rhs` does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
    pub context: BTreeMap<String, Value>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::with_slack(name, lhs, rhs, 0.0, 0.0)
    }

    pub fn with_slack(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        rel_slack: f64,
        abs_slack: f64,
    ) -> Self {
        let pass = lhs <= rhs * (1.0 + rel_slack) + abs_slack;
        let mut context = BTreeMap::new();
        if rel_slack != 0.0 {
            context.insert("rel_slack".to_string(), Value::from(rel_slack));
        }
        if abs_slack != 0.0 {
            context.insert("abs_slack".to_string(), Value::from(abs_slack));
        }
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            ratio: ratio(lhs, rhs),
            pass,
            context,
        }
    }

    /// Strict form: passes iff `lhs < rhs`.
    pub fn strict(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let mut report = Self::new(name, lhs, rhs);
        report.pass = lhs < rhs;
        report
            .context
            .insert("strict".to_string(), Value::from(true));
        report
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.context.insert(key.to_string(), value.into());
        self
    }

    /// Fails the report if `ok` is false, recording `key` as the reason.
    pub fn require(mut self, key: &str, ok: bool) -> Self {
        if !ok {
            self.pass = false;
        }
        self.context.insert(key.to_string(), Value::from(ok));
        self
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs != 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}
