//! The report envelope shared by every verb, with deterministic text and
//! JSON renderings.
//!
//! Reports are byte-identical across runs for a fixed command, build and
//! flags: collections are sorted, nothing wall-clock-dependent is
//! included unless `--with-timings` asks for it, and the JSON field
//! order is fixed by declaration order. The schema is documented in
//! docs/report-schema.md and pinned by golden-file tests.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Guards {
    pub max_ring_order: u64,
    pub max_module_order: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingMeta {
    pub spec: String,
    pub hash: String,
    pub order: usize,
    pub commutative: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleMeta {
    pub spec: String,
    pub side: String,
    pub order: usize,
    pub hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// "pass" / "fail" for operational checks, "true" / "false" for
    /// statement verdicts that are data rather than success criteria,
    /// "info" for neutral facts.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
}

impl CheckResult {
    pub fn new(name: &str, verdict: &str, detail: serde_json::Value) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            verdict: verdict.to_string(),
            detail,
        }
    }

    pub fn passfail(name: &str, ok: bool, detail: serde_json::Value) -> CheckResult {
        CheckResult::new(name, if ok { "pass" } else { "fail" }, detail)
    }

    pub fn info(name: &str, detail: serde_json::Value) -> CheckResult {
        CheckResult::new(name, "info", detail)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// Canonicalized argument echo. The cache directory is deliberately
    /// excluded so cached and uncached runs emit identical bytes.
    pub args: BTreeMap<String, String>,
    pub guards: Guards,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleMeta>,
    pub results: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "perpcalc report (schema {})\n",
            self.schema_version
        ));
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.args {
            out.push_str(&format!("arg {k}: {v}\n"));
        }
        out.push_str(&format!(
            "guards: max-ring-order={} max-module-order={}\n",
            self.guards.max_ring_order, self.guards.max_module_order
        ));
        if let Some(r) = &self.ring {
            out.push_str(&format!(
                "ring: {} | order {} | {} | hash {}\n",
                r.spec,
                r.order,
                if r.commutative {
                    "commutative"
                } else {
                    "noncommutative"
                },
                r.hash
            ));
        }
        if let Some(m) = &self.module {
            out.push_str(&format!(
                "module: {} | side {} | order {} | hash {}\n",
                m.spec, m.side, m.order, m.hash
            ));
        }
        for c in &self.results {
            out.push_str(&format!("check {}: {}", c.name, c.verdict));
            if !c.detail.is_null() {
                let compact = serde_json::to_string(&c.detail).expect("details serialize");
                out.push_str(&format!(" | {compact}"));
            }
            out.push('\n');
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                out.push_str(&format!("timing {k}: {v} ms\n"));
            }
        }
        out.push_str(&format!("exit: {}\n", self.exit_code));
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_text()
        }
    }
}
