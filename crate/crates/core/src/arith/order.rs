use std::cmp::Ordering;
use std::fmt;

use super::monomial::{grevlex, lex, Monomial};

/// Monomial orders. Variables are compared in ring order (first variable largest).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Variables `[0, split)` compared by `first`; ties broken on the rest by `second`.
    /// Eliminates the first block.
    Block {
        split: usize,
        first: Box<MonomialOrder>,
        second: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// grevlex on both sides of `split`.
    pub fn elimination(split: usize) -> Self {
        MonomialOrder::Block {
            split,
            first: Box::new(MonomialOrder::GrevLex),
            second: Box::new(MonomialOrder::GrevLex),
        }
    }

    pub fn cmp_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Block {
                split,
                first,
                second,
            } => {
                let s = (*split).min(a.len());
                match first.cmp_exps(&a[..s], &b[..s]) {
                    Ordering::Equal => second.cmp_exps(&a[s..], &b[s..]),
                    o => o,
                }
            }
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_exps(a.exps(), b.exps())
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lex" => Some(MonomialOrder::Lex),
            "grevlex" => Some(MonomialOrder::GrevLex),
            _ => None,
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::GrevLex => write!(f, "grevlex"),
            MonomialOrder::Block {
                split,
                first,
                second,
            } => write!(f, "block({split}; {first}, {second})"),
        }
    }
}
