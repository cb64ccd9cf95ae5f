//! Check records and the JSON/text renderings shared by every subcommand.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check_id: String,
    pub paper_ref: &'static str,
    pub status: Status,
    pub data: Value,
    /// Human-readable lines for text mode.
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Check {
    pub fn new(check_id: impl Into<String>, paper_ref: &'static str, status: Status, data: Value) -> Self {
        Check { check_id: check_id.into(), paper_ref, status, data, text: Vec::new() }
    }

    pub fn with_text(mut self, lines: Vec<String>) -> Self {
        self.text = lines;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub config: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value, checks: Vec<Check>) -> Self {
        // fail outranks inconclusive, which outranks pass
        let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
        Report { command: command.into(), status, config, checks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One `STATUS check_id [anchor]` header per check followed by its text.
    /// Single-check reports print the text alone.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.checks.len() == 1 && !self.checks[0].text.is_empty() {
            for line in &self.checks[0].text {
                out.push_str(line);
                out.push('\n');
            }
            return out;
        }
        for c in &self.checks {
            out.push_str(&format!("{:<12} {} [{}]\n", c.status.label(), c.check_id, c.paper_ref));
            for line in &c.text {
                out.push_str(&format!("    {line}\n"));
            }
        }
        out.push_str(&format!("overall: {}\n", self.status.label()));
        out
    }
}
