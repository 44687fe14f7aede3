use std::fmt::{self, Display, Write as _};

use serde::{Serialize, Serializer};

use crate::polar::PolarKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub lemma: String,
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

/// Ordered list of checks with expected and observed values.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CountingReport {
    pub subject: String,
    pub entries: Vec<ReportEntry>,
    pub notes: Vec<String>,
}

impl CountingReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            ..Self::default()
        }
    }

    pub fn push(
        &mut self,
        lemma: &str,
        check: impl Into<String>,
        expected: impl Display,
        observed: impl Display,
        pass: bool,
    ) {
        self.entries.push(ReportEntry {
            lemma: lemma.to_string(),
            check: check.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
        });
    }

    /// Entry whose pass flag is expected == observed.
    pub fn push_eq<T: Display + PartialEq>(&mut self, lemma: &str, check: impl Into<String>, expected: T, observed: T) {
        let pass = expected == observed;
        self.push(lemma, check, expected, observed, pass);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "subject: {}", self.subject).unwrap();
        for e in &self.entries {
            writeln!(
                out,
                "[{}] {}: {}: expected {} observed {}",
                if e.pass { "PASS" } else { "FAIL" },
                e.lemma,
                e.check,
                e.expected,
                e.observed
            )
            .unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        writeln!(out, "result: {}", if self.pass() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ClassicalPolar(PolarKind),
    QuasiOnly(PolarKind),
    NoMatch,
}

impl Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ClassicalPolar(k) => write!(f, "ClassicalPolar({k})"),
            Verdict::QuasiOnly(k) => write!(f, "QuasiOnly({k})"),
            Verdict::NoMatch => f.write_str("NoMatch"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Formats a sequence as `{a, b, c}`.
pub(crate) fn set_str<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Formats (key, value) pairs as `{k: v, ...}`.
pub(crate) fn map_str<K: Display, V: Display>(items: impl IntoIterator<Item = (K, V)>) -> String {
    set_str(items.into_iter().map(|(k, v)| format!("{k}: {v}")))
}
