//! Machine-readable run reports.
//!
//! Every CLI command emits a single JSON report. Reports are
//! deterministic given (command, inputs, seed): object keys serialize in
//! sorted order and the only nondeterministic field, `timing_ms`, is
//! excluded by [`strip_timing`] when comparing runs.

use serde::Serialize;
use serde_json::Value;

use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub seed: u64,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flatten the report to `path,value` CSV rows.
    pub fn to_csv(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let mut out = String::from("key,value\n");
        for (k, v) in rows {
            out.push_str(&format!("{},{}\n", csv_escape(&k), csv_escape(&v)));
        }
        out
    }
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&path, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        Value::Null => rows.push((prefix.to_string(), String::new())),
        Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => rows.push((prefix.to_string(), n.to_string())),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Remove the timing field so byte comparison sees only deterministic
/// content.
pub fn strip_timing(report_json: &str) -> Result<String> {
    let mut value: Value = serde_json::from_str(report_json)?;
    if let Some(map) = value.as_object_mut() {
        map.remove("timing_ms");
    }
    Ok(serde_json::to_string_pretty(&value)?)
}
