use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the marked scheme predicate.
pub const SCHEME_PREDICATE: &str = "P";

/// A finite relational alphabet: symbol name to arity.
///
/// Equality is logical and never declared here; `P` is reserved for schemes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignatureFile", into = "SignatureFile")]
pub struct Signature {
    relations: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct SignatureFile {
    #[serde(default)]
    relations: BTreeMap<String, usize>,
}

impl TryFrom<SignatureFile> for Signature {
    type Error = Error;

    fn try_from(file: SignatureFile) -> Result<Self> {
        Signature::new(file.relations)
    }
}

impl From<Signature> for SignatureFile {
    fn from(sig: Signature) -> Self {
        SignatureFile {
            relations: sig.relations,
        }
    }
}

pub(crate) fn is_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<I, S>(relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, arity) in relations {
            let name = name.into();
            if name == SCHEME_PREDICATE || name == "=" {
                return Err(Error::InvalidSignature(format!("`{name}` is reserved")));
            }
            if !is_symbol_name(&name) {
                return Err(Error::InvalidSignature(format!(
                    "`{name}` is not a relation symbol name"
                )));
            }
            if arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "`{name}` must have arity at least 1"
                )));
            }
            if map.insert(name.clone(), arity).is_some() {
                return Err(Error::InvalidSignature(format!("`{name}` declared twice")));
            }
        }
        Ok(Signature { relations: map })
    }

    /// Convenience constructor for literal signatures; panics on invalid input.
    pub fn of(relations: &[(&str, usize)]) -> Self {
        Self::new(relations.iter().map(|&(n, a)| (n, a))).expect("valid signature literal")
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.relations.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Symbols in name order.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn names(&self) -> Vec<String> {
        self.relations.keys().cloned().collect()
    }

    /// Union of two signatures; a symbol declared with two arities is a clash.
    pub fn union(&self, other: &Signature) -> Result<Signature> {
        let mut map = self.relations.clone();
        for (name, &arity) in &other.relations {
            match map.get(name) {
                Some(&a) if a != arity => return Err(Error::SignatureClash(name.clone())),
                _ => {
                    map.insert(name.clone(), arity);
                }
            }
        }
        Ok(Signature { relations: map })
    }

    /// First symbol shared with `other`, if any.
    pub fn clash_with(&self, other: &Signature) -> Option<String> {
        self.relations
            .keys()
            .find(|n| other.contains(n))
            .cloned()
    }

    pub fn is_subset_of(&self, other: &Signature) -> bool {
        self.symbols().all(|(n, a)| other.arity(n) == Some(a))
    }

    pub fn with(&self, name: &str, arity: usize) -> Result<Signature> {
        self.union(&Signature::new([(name, arity)])?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("signature serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (n, a)) in self.symbols().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}:{a}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_and_bad_arity() {
        assert!(Signature::new([("P", 1)]).is_err());
        assert!(Signature::new([("Leq", 0)]).is_err());
        assert!(Signature::new([("leq", 2)]).is_err());
        assert!(Signature::new([("", 2)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let sig = Signature::from_json(r#"{"relations": {"Succ": 2, "Zero": 1}}"#).unwrap();
        assert_eq!(sig.arity("Succ"), Some(2));
        assert_eq!(sig.to_json(), r#"{"relations":{"Succ":2,"Zero":1}}"#);
        assert!(Signature::from_json(r#"{"relations": {"P": 1}}"#).is_err());
    }

    #[test]
    fn union_detects_arity_clash() {
        let a = Signature::of(&[("R", 2)]);
        let b = Signature::of(&[("R", 1)]);
        assert_eq!(a.union(&b), Err(Error::SignatureClash("R".into())));
        let c = Signature::of(&[("S", 1)]);
        assert_eq!(a.union(&c).unwrap().len(), 2);
    }
}
