//! Verdicts with witnesses.

use std::fmt;

/// What made a check fail: the offending generator (or pair) and the nonzero
/// normal form left over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub subject: String,
    pub residue: String,
}

impl Witness {
    pub fn new(subject: impl Into<String>, residue: impl fmt::Display) -> Self {
        Witness {
            subject: subject.into(),
            residue: residue.to_string(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: residue {}", self.subject, self.residue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Witness>,
}

/// An ordered list of named verdicts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record a verdict: `None` passes, `Some(w)` fails with witness `w`.
    pub fn record(&mut self, name: impl Into<String>, witness: Option<Witness>) {
        self.items.push(CheckItem {
            name: name.into(),
            passed: witness.is_none(),
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.items.iter().find(|i| !i.passed)
    }

    /// Append another report's items under `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut it in other.items {
            it.name = format!("{prefix}/{}", it.name);
            self.items.push(it);
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for it in &self.items {
            write!(f, "[{}] {}", if it.passed { "PASS" } else { "FAIL" }, it.name)?;
            if let Some(w) = &it.witness {
                write!(f, " ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
