//! Machine-readable run reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub tol: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub timestamp: String,
    pub results: Vec<Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, params: Value, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            params,
            seed,
            timestamp: now(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push_result(&mut self, value: Value) {
        self.results.push(value);
    }

    /// Records a named predicate; the process exits nonzero if any fails.
    pub fn check(&mut self, name: &str, expected: impl ToString, got: impl ToString, pass: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            expected: expected.to_string(),
            got: got.to_string(),
            tol: None,
            pass,
        });
    }

    /// Floating comparison, tolerance carried explicitly in the report.
    pub fn check_close(&mut self, name: &str, expected: f64, got: f64, tol: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            expected: format!("{expected}"),
            got: format!("{got}"),
            tol: Some(tol),
            pass: (expected - got).abs() <= tol,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rendering for tabular sweeps: the union of result keys forms the
    /// header, rows in result order.
    pub fn to_csv(&self) -> String {
        let mut keys: Vec<String> = Vec::new();
        for r in &self.results {
            if let Value::Object(map) = r {
                for k in map.keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
        }
        let mut out = keys.join(",") + "\n";
        for r in &self.results {
            if let Value::Object(map) = r {
                let row: Vec<String> = keys
                    .iter()
                    .map(|k| match map.get(k) {
                        None => String::new(),
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    })
                    .collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        out
    }
}

fn now() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}
