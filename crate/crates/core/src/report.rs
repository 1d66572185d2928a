//! Machine-readable run reports.

use serde::Serialize;

pub const TOOL_NAME: &str = "ioa-verify";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    /// "pass" | "fail" | "error"
    pub status: String,
    /// milliseconds; omitted unless timings were requested so that reports
    /// stay byte-stable across runs
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
}

impl CheckRecord {
    pub fn pass(suite: &str, name: &str) -> Self {
        CheckRecord {
            suite: suite.into(),
            name: name.into(),
            status: "pass".into(),
            duration_ms: None,
            detail: serde_json::Value::Null,
        }
    }

    pub fn fail(suite: &str, name: &str, detail: serde_json::Value) -> Self {
        CheckRecord {
            suite: suite.into(),
            name: name.into(),
            status: "fail".into(),
            duration_ms: None,
            detail,
        }
    }

    pub fn error(suite: &str, name: &str, message: String) -> Self {
        CheckRecord {
            suite: suite.into(),
            name: name.into(),
            status: "error".into(),
            duration_ms: None,
            detail: serde_json::json!({ "error": message }),
        }
    }

    pub fn of(suite: &str, name: &str, pass: bool, detail: serde_json::Value) -> Self {
        if pass {
            let mut r = CheckRecord::pass(suite, name);
            r.detail = detail;
            r
        } else {
            CheckRecord::fail(suite, name, detail)
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: serde_json::Value, checks: Vec<CheckRecord>) -> Self {
        let summary = Summary {
            total: checks.len(),
            pass: checks.iter().filter(|c| c.status == "pass").count(),
            fail: checks.iter().filter(|c| c.status == "fail").count(),
            error: checks.iter().filter(|c| c.status == "error").count(),
        };
        Report {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            config,
            checks,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.pass == self.summary.total
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
