use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration limits. Exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Invariant classes a strong-model check may enumerate subsets of.
    pub max_classes: usize,
    /// Tuples an invariant-relation computation may range over.
    pub max_tuples: usize,
    /// Orbits whose unions an invariant-relation family may enumerate.
    pub max_orbits: usize,
    /// Longest partial map kept in a back-and-forth system.
    pub max_bf_len: usize,
    /// Table entries a `Full` class family may span (`|universe|^(2 * arity)`).
    pub max_full: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_classes: 20,
            max_tuples: 1 << 16,
            max_orbits: 20,
            max_bf_len: 7,
            max_full: 1 << 16,
        }
    }
}

pub(crate) fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::CapExceeded(what()))
    }
}
