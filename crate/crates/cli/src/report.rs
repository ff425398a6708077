use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Line {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Line {
    pub fn pass(check: impl Into<String>) -> Self {
        Line {
            check: check.into(),
            pass: true,
            summary: None,
            witness: None,
        }
    }

    pub fn new(check: impl Into<String>, pass: bool) -> Self {
        Line {
            pass,
            ..Line::pass(check)
        }
    }

    pub fn summary(mut self, s: impl Into<String>) -> Self {
        self.summary = Some(s.into());
        self
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub bounds: BTreeMap<String, usize>,
    pub verdicts: Vec<Line>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            bounds: BTreeMap::new(),
            verdicts: Vec::new(),
            result: None,
            timings: None,
        }
    }

    pub fn bound(&mut self, name: &str, value: usize) -> &mut Self {
        self.bounds.insert(name.to_string(), value);
        self
    }

    pub fn push(&mut self, line: Line) -> &mut Self {
        self.verdicts.push(line);
        self
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|l| l.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        if !self.bounds.is_empty() {
            let b: Vec<String> = self
                .bounds
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(out, "bounds: {}", b.join(" "));
        }
        for l in &self.verdicts {
            let tag = if l.pass { "PASS" } else { "FAIL" };
            match &l.summary {
                Some(s) => {
                    let _ = writeln!(out, "{tag} {}: {s}", l.check);
                }
                None => {
                    let _ = writeln!(out, "{tag} {}", l.check);
                }
            }
        }
        if let Some(r) = &self.result {
            let _ = writeln!(out, "result: {r}");
        }
        if let Some(t) = &self.timings {
            let _ = writeln!(out, "elapsed: {:.3} ms", t.elapsed_ms);
        }
        out
    }
}
