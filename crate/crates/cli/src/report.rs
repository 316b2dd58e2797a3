//! Command reports: a text rendering for people and a JSON document for
//! tools. Key names are documented in `docs/report.md`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use coisored_core::check::CheckItem;
use serde_json::{json, Map, Value};

/// How a command ended; each maps to a fixed exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Budget,
    InputError,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Budget => 2,
            Outcome::InputError => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Budget => "budget",
            Outcome::InputError => "input-error",
        }
    }
}

/// A result entry: a single line or a list of lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Text(String),
    List(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// `Outcome::Budget` or `Outcome::InputError`.
    pub kind: Outcome,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub session: String,
    pub options: Vec<(String, String)>,
    pub checks: Vec<CheckItem>,
    pub results: Vec<(String, Entry)>,
    /// Result entities as session text.
    pub entities: Option<String>,
    pub failure: Option<Failure>,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, session: &str, options: Vec<(String, String)>) -> Self {
        Report {
            command: command.to_string(),
            session: session.to_string(),
            options,
            checks: Vec::new(),
            results: Vec::new(),
            entities: None,
            failure: None,
            timing_ms: None,
        }
    }

    pub fn outcome(&self) -> Outcome {
        match &self.failure {
            Some(f) => f.kind,
            None if self.checks.iter().all(|c| c.passed) => Outcome::Pass,
            None => Outcome::Fail,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome().exit_code()
    }

    pub fn check(&self, name: &str) -> Option<&CheckItem> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn result(&self, key: &str) -> Option<&Entry> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, e)| e)
    }

    pub fn push_text(&mut self, key: &str, value: impl Into<String>) {
        self.results.push((key.to_string(), Entry::Text(value.into())));
    }

    pub fn push_list(&mut self, key: &str, values: Vec<String>) {
        self.results.push((key.to_string(), Entry::List(values)));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "session: {}", self.session);
        let opts: Vec<String> = self.options.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "options: {}", opts.join(" "));
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                let _ = write!(out, "  [{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
                if let Some(w) = &c.witness {
                    let _ = write!(out, " (witness {}: {})", w.subject, w.residue);
                }
                out.push('\n');
            }
        }
        if !self.results.is_empty() {
            out.push_str("results:\n");
            for (k, e) in &self.results {
                match e {
                    Entry::Text(t) => {
                        let _ = writeln!(out, "  {k}: {t}");
                    }
                    Entry::List(items) => {
                        let _ = writeln!(out, "  {k}:");
                        for it in items {
                            let _ = writeln!(out, "    {it}");
                        }
                    }
                }
            }
        }
        if let Some(e) = &self.entities {
            out.push_str("entities:\n");
            for line in e.lines() {
                let _ = writeln!(out, "  | {line}");
            }
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "error: {}", f.message);
        }
        let outcome = self.outcome();
        let _ = writeln!(out, "outcome: {} (exit {})", outcome.name(), outcome.exit_code());
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "timing: {ms} ms");
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut options = Map::new();
        for (k, v) in &self.options {
            options.insert(k.clone(), Value::String(v.clone()));
        }
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "witness": c.witness.as_ref().map(|w| json!({"subject": w.subject, "residue": w.residue})),
                })
            })
            .collect();
        let mut results = Map::new();
        for (k, e) in &self.results {
            let v = match e {
                Entry::Text(t) => Value::String(t.clone()),
                Entry::List(items) => Value::Array(items.iter().cloned().map(Value::String).collect()),
            };
            results.insert(k.clone(), v);
        }
        let outcome = self.outcome();
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("session".into(), json!(self.session));
        doc.insert("options".into(), Value::Object(options));
        doc.insert("outcome".into(), json!(outcome.name()));
        doc.insert("exit_code".into(), json!(outcome.exit_code()));
        doc.insert("checks".into(), Value::Array(checks));
        doc.insert("results".into(), Value::Object(results));
        doc.insert("entities".into(), json!(self.entities));
        doc.insert(
            "error".into(),
            self.failure
                .as_ref()
                .map(|f| json!({"kind": f.kind.name(), "message": f.message}))
                .unwrap_or(Value::Null),
        );
        if let Some(ms) = self.timing_ms {
            doc.insert("timing_ms".into(), json!(ms));
        }
        Value::Object(doc)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report values serialize");
        s.push('\n');
        s
    }
}

/// Write `contents` to `path` through a temporary file in the same directory,
/// so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "report path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", file_name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use coisored_core::check::Witness;

    fn sample() -> Report {
        let mut r = Report::new("check-action", "a.session", vec![("seed".into(), "0".into())]);
        r.checks.push(CheckItem {
            name: "unit law".into(),
            passed: false,
            witness: Some(Witness::new("x", "y - x")),
        });
        r.push_list("generators", vec!["a = x*y".into()]);
        r
    }

    #[test]
    fn outcome_from_checks() {
        let r = sample();
        assert_eq!(r.outcome(), Outcome::Fail);
        assert_eq!(r.exit_code(), 1);
        let text = r.to_text();
        assert!(text.contains("[FAIL] unit law (witness x: y - x)"), "{text}");
    }

    #[test]
    fn json_keys_in_documented_order() {
        let j = sample().to_json();
        let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["command", "session", "options", "outcome", "exit_code", "checks", "results", "entities", "error"]
        );
        assert_eq!(j["checks"][0]["witness"]["subject"], "x");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
