use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassEntry {
    pub name: String,
    pub wall_time_ms: f64,
    /// Gate counts keyed by arity.
    pub pre_counts: BTreeMap<usize, usize>,
    pub post_counts: BTreeMap<usize, usize>,
    pub pre_depth: usize,
    pub post_depth: usize,
}

impl PassEntry {
    pub fn new(name: &str, wall_time_ms: f64, pre: &Circuit, post: &Circuit) -> Self {
        PassEntry {
            name: name.into(),
            wall_time_ms,
            pre_counts: pre.gate_counts_by_arity(),
            post_counts: post.gate_counts_by_arity(),
            pre_depth: pre.depth(),
            post_depth: post.depth(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LayoutSummary {
    pub initial: Option<Vec<usize>>,
    #[serde(rename = "final")]
    pub final_: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PassReport {
    pub entries: Vec<PassEntry>,
    pub layout: LayoutSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown report format '{s}'")),
        }
    }
}

fn counts(m: &BTreeMap<usize, usize>) -> String {
    let v: Vec<String> = m.iter().map(|(k, v)| format!("{k}q:{v}")).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(",")
    }
}

impl PassReport {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            ReportFormat::Text => {
                let mut s = format!(
                    "{:<18} {:>10} {:>16} {:>16} {:>6} {:>6}\n",
                    "pass", "time_ms", "gates_before", "gates_after", "depth0", "depth1"
                );
                for e in &self.entries {
                    let _ = writeln!(
                        s,
                        "{:<18} {:>10.3} {:>16} {:>16} {:>6} {:>6}",
                        e.name,
                        e.wall_time_ms,
                        counts(&e.pre_counts),
                        counts(&e.post_counts),
                        e.pre_depth,
                        e.post_depth
                    );
                }
                if let Some(l) = &self.layout.initial {
                    let _ = writeln!(s, "initial layout: {l:?}");
                }
                if let Some(l) = &self.layout.final_ {
                    let _ = writeln!(s, "final layout: {l:?}");
                }
                s
            }
        }
    }
}
