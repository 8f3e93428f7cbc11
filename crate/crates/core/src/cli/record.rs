use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything needed to reproduce one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool: String,
    pub version: String,
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub metadata: BTreeMap<String, String>,
    pub payload: Value,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_seconds: f64,
}

impl Timing {
    pub(crate) fn since(started: SystemTime) -> Self {
        let finished = SystemTime::now();
        let unix = |t: SystemTime| t.duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        Self {
            started_unix: unix(started),
            finished_unix: unix(finished),
            wall_seconds: finished.duration_since(started).map(|d| d.as_secs_f64()).unwrap_or(0.0),
        }
    }
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    /// The record without its timing block; identical across reruns.
    pub fn reproducible_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("records serialize");
        if let Value::Object(map) = &mut v {
            map.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("records serialize")
    }
}

/// Shortest decimal string that parses back to the same `f64`. JSON output
/// goes through the same routine, so CSV and JSON agree digit for digit.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

/// Comma-separated table with a mandatory header row.
pub(crate) struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub(crate) fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self { out, width: header.len() }
    }

    pub(crate) fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.width);
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub(crate) fn finish(self) -> String {
        self.out
    }
}
