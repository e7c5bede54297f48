//! Check results and command reports, with JSON and text renderings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Json>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: true,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: Option<Json>) -> Check {
        Check {
            name: name.into(),
            passed: false,
            detail: detail.into(),
            witness,
        }
    }

    pub fn from_bool(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn to_json(&self) -> Json {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("passed".into(), json!(self.passed));
        if !self.detail.is_empty() {
            m.insert("detail".into(), json!(self.detail));
        }
        if let Some(w) = &self.witness {
            m.insert("witness".into(), w.clone());
        }
        Json::Object(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The computation succeeded and its mathematical answer is "no".
    Negative,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub summary: String,
    pub checks: Vec<Check>,
    pub output: Option<Json>,
    /// Text rendering of `output`, used by the text formatter only.
    pub output_text: Option<String>,
    pub witness: Option<Json>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            status: Status::Ok,
            summary: String::new(),
            checks: Vec::new(),
            output: None,
            output_text: None,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn summary(mut self, s: impl Into<String>) -> Self {
        self.summary = s.into();
        self
    }

    pub fn output(mut self, json: Json, text: impl Into<String>) -> Self {
        self.output = Some(json);
        self.output_text = Some(text.into());
        self
    }

    pub fn negative(mut self, witness: Option<Json>) -> Self {
        self.status = Status::Negative;
        if witness.is_some() {
            self.witness = witness;
        }
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn push_check(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Marks the report negative if any check failed, taking the first
    /// failing witness.
    pub fn settle_from_checks(mut self) -> Self {
        if let Some(failed) = self.checks.iter().find(|c| !c.passed) {
            let witness = failed.witness.clone();
            self.status = Status::Negative;
            if self.witness.is_none() {
                self.witness = witness;
            }
        }
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Negative => 1,
        }
    }

    pub fn to_json(&self) -> Json {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("status".into(), json!(self.status.tag()));
        m.insert("summary".into(), json!(self.summary));
        m.insert(
            "checks".into(),
            Json::Array(self.checks.iter().map(Check::to_json).collect()),
        );
        if let Some(o) = &self.output {
            m.insert("output".into(), o.clone());
        }
        if let Some(w) = &self.witness {
            m.insert("witness".into(), w.clone());
        }
        if !self.notes.is_empty() {
            m.insert("notes".into(), json!(self.notes));
        }
        Json::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.status.tag());
        if !self.summary.is_empty() {
            let _ = writeln!(out, "{}", self.summary);
        }
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "  [{mark}] {}", c.name);
            } else {
                let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
            }
        }
        if let Some(text) = &self.output_text {
            let _ = writeln!(out, "{}", text.trim_end());
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
