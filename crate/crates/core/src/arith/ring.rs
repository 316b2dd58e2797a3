use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of variable names. Polynomials live over exactly one ring.
#[derive(Debug)]
pub struct Ring {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub type RingRef = Arc<Ring>;

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<I, S>(names: I) -> Result<RingRef>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::InvalidName(n.clone()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(Ring { names, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Same variable list, by identity or by value.
    pub fn same(a: &RingRef, b: &RingRef) -> bool {
        Arc::ptr_eq(a, b) || a.names == b.names
    }

    pub fn check_same(a: &RingRef, b: &RingRef) -> Result<()> {
        if Ring::same(a, b) {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: a.names.join(", "),
                right: b.names.join(", "),
            })
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[{}]", self.names.join(", "))
    }
}
