//! Stage results, provenance tags and the pipeline certificate.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::data::DataStore;

/// Where a reported number comes from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Transcribed input data, not recomputed.
    PaperData,
    ComputedExact,
    /// Floating-point result with a heuristic error estimate.
    ComputedNumeric {
        err: f64,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::PaperData => write!(f, "paper-data"),
            Provenance::ComputedExact => write!(f, "computed-exact"),
            Provenance::ComputedNumeric { err } => write!(f, "computed-numeric({err:.1e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub values: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Stage {
    pub fn new(name: impl Into<String>) -> Self {
        Stage {
            name: name.into(),
            passed: true,
            values: Vec::new(),
            failure: None,
        }
    }

    pub fn exact(mut self, name: &str, value: impl ToString) -> Self {
        self.push(name, value, Provenance::ComputedExact);
        self
    }

    pub fn paper(mut self, name: &str, value: impl ToString) -> Self {
        self.push(name, value, Provenance::PaperData);
        self
    }

    pub fn numeric(mut self, name: &str, value: f64, err: f64) -> Self {
        self.push(name, float(value), Provenance::ComputedNumeric { err });
        self
    }

    pub fn push(&mut self, name: &str, value: impl ToString, provenance: Provenance) {
        self.values.push(Entry {
            name: name.to_string(),
            value: value.to_string(),
            provenance,
        });
    }

    /// Marks the stage failed unless `ok`.
    pub fn check(mut self, ok: bool, why: impl FnOnce() -> String) -> Self {
        if !ok && self.passed {
            self.passed = false;
            self.failure = Some(why());
        }
        self
    }

    pub fn fail(self, why: impl ToString) -> Self {
        self.check(false, || why.to_string())
    }
}

/// Shortest round-trip representation of a float.
pub fn float(x: f64) -> String {
    format!("{x:e}")
}

/// Everything a command produced: human-readable lines and stage records.
#[derive(Debug)]
pub struct Session {
    pub command: String,
    pub data: DataStore,
    pub lines: Vec<String>,
    pub stages: Vec<Stage>,
}

impl Session {
    pub fn new(command: impl Into<String>, data: DataStore) -> Self {
        Session {
            command: command.into(),
            data,
            lines: Vec::new(),
            stages: Vec::new(),
        }
    }

    pub fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// Stores the stage and prints its values.
    pub fn record(&mut self, stage: Stage) -> bool {
        let mark = if stage.passed { "ok" } else { "FAILED" };
        self.lines.push(format!("[{mark}] {}", stage.name));
        for e in &stage.values {
            self.lines
                .push(format!("    {} = {}  ({})", e.name, e.value, e.provenance));
        }
        if let Some(f) = &stage.failure {
            self.lines.push(format!("    failure: {f}"));
        }
        self.store(stage)
    }

    /// Stores the stage without printing it.
    pub fn store(&mut self, stage: Stage) -> bool {
        let ok = stage.passed;
        self.stages.push(stage);
        ok
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| !s.passed)
    }

    /// The certificate, only when every stage passed.
    pub fn certificate(&self) -> Option<PipelineCertificate> {
        if self.first_failure().is_some() {
            return None;
        }
        Some(PipelineCertificate {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command.clone(),
            data: self.data.hashes().clone(),
            stages: self.stages.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineCertificate {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of each data file read.
    pub data: BTreeMap<String, String>,
    pub stages: Vec<Stage>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_serialisation() {
        let s = serde_json::to_string(&Provenance::ComputedNumeric { err: 1e-9 }).unwrap();
        assert_eq!(s, r#"{"kind":"computed-numeric","err":1e-9}"#);
        let s = serde_json::to_string(&Provenance::PaperData).unwrap();
        assert_eq!(s, r#"{"kind":"paper-data"}"#);
    }

    #[test]
    fn certificate_requires_all_stages() {
        let mut s = Session::new("test", DataStore::bundled());
        s.record(Stage::new("a").exact("x", 1));
        assert!(s.certificate().is_some());
        s.record(Stage::new("b").fail("no"));
        s.record(Stage::new("c").fail("later"));
        assert!(s.certificate().is_none());
        assert_eq!(s.first_failure().unwrap().name, "b");
    }

    #[test]
    fn check_keeps_first_reason() {
        let st = Stage::new("s")
            .check(false, || "one".into())
            .check(false, || "two".into());
        assert_eq!(st.failure.as_deref(), Some("one"));
    }
}
