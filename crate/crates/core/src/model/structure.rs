use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::relation::Relation;
use crate::error::{Error, Result};
use crate::syntax::Signature;

/// An explicit finite relational structure with a nonempty, ordered universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    signature: Signature,
    universe: Vec<String>,
    relations: BTreeMap<String, Relation>,
    elements: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct StructureFile {
    signature: Signature,
    universe: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<String>>>,
}

impl FiniteStructure {
    /// Symbols of `signature` missing from `relations` are interpreted as empty.
    pub fn new(
        signature: Signature,
        universe: Vec<String>,
        mut relations: BTreeMap<String, Relation>,
    ) -> Result<Self> {
        if universe.is_empty() {
            return Err(Error::InvalidStructure("universe must be nonempty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &universe {
            if !seen.insert(name) {
                return Err(Error::InvalidStructure(format!("element `{name}` listed twice")));
            }
        }
        let n = universe.len();
        for name in relations.keys() {
            if !signature.contains(name) {
                return Err(Error::InvalidStructure(format!(
                    "relation `{name}` is not in the signature"
                )));
            }
        }
        for (name, arity) in signature.symbols() {
            match relations.get(name) {
                Some(r) if r.arity() != arity || r.size() != n => {
                    return Err(Error::InvalidStructure(format!(
                        "relation `{name}` has the wrong shape"
                    )))
                }
                Some(_) => {}
                None => {
                    relations.insert(name.to_owned(), Relation::empty(arity, n)?);
                }
            }
        }
        Ok(FiniteStructure {
            signature,
            universe,
            relations,
            elements: (0..n).collect(),
        })
    }

    /// Builds from element names; mostly for fixtures and tests.
    pub fn from_named(
        signature: Signature,
        universe: &[&str],
        relations: &[(&str, &[&[&str]])],
    ) -> Result<Self> {
        let universe: Vec<String> = universe.iter().map(|s| s.to_string()).collect();
        let index: HashMap<&str, usize> = universe
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut rels = BTreeMap::new();
        for (name, tuples) in relations {
            let arity = signature
                .arity(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            let mut idx = Vec::new();
            for t in tuples.iter() {
                let mut row = Vec::new();
                for e in t.iter() {
                    row.push(*index.get(e).ok_or_else(|| {
                        Error::InvalidStructure(format!("unknown element `{e}`"))
                    })?);
                }
                idx.push(row);
            }
            rels.insert(name.to_string(), Relation::from_tuples(arity, universe.len(), idx)?);
        }
        Self::new(signature, universe, rels)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    /// `0..size()`, handy as a quantifier domain.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn name(&self, e: usize) -> &str {
        &self.universe[e]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|n| n == name)
    }

    pub fn relation(&self, symbol: &str) -> Option<&Relation> {
        self.relations.get(symbol)
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    /// Expansion by one more relation.
    pub fn with_relation(&self, symbol: &str, rel: Relation) -> Result<Self> {
        let signature = self.signature.with(symbol, rel.arity())?;
        let mut relations = self.relations.clone();
        relations.insert(symbol.to_owned(), rel);
        Self::new(signature, self.universe.clone(), relations)
    }

    /// Reduct to a sub-signature.
    pub fn reduct(&self, sig: &Signature) -> Result<Self> {
        if !sig.is_subset_of(&self.signature) {
            return Err(Error::SignatureMismatch(format!(
                "{sig} is not contained in {}",
                self.signature
            )));
        }
        let relations = self
            .relations
            .iter()
            .filter(|(n, _)| sig.contains(n))
            .map(|(n, r)| (n.clone(), r.clone()))
            .collect();
        Self::new(sig.clone(), self.universe.clone(), relations)
    }

    /// Induced substructure on `elems` (kept in the given order).
    pub fn induced(&self, elems: &[usize]) -> Result<Self> {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let universe = elems.iter().map(|&e| self.universe[e].clone()).collect();
        let mut relations = BTreeMap::new();
        for (name, rel) in &self.relations {
            let tuples: Vec<Vec<usize>> = rel
                .tuples()
                .into_iter()
                .filter_map(|t| t.iter().map(|e| pos.get(e).copied()).collect())
                .collect();
            relations.insert(name.clone(), Relation::from_tuples(rel.arity(), elems.len(), tuples)?);
        }
        Self::new(self.signature.clone(), universe, relations)
    }

    pub fn to_json(&self) -> String {
        let file = StructureFile {
            signature: self.signature.clone(),
            universe: self.universe.clone(),
            relations: self
                .relations
                .iter()
                .map(|(n, r)| {
                    let rows = r
                        .tuples()
                        .into_iter()
                        .map(|t| t.into_iter().map(|e| self.universe[e].clone()).collect())
                        .collect();
                    (n.clone(), rows)
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StructureFile = serde_json::from_str(text)?;
        let n = file.universe.len();
        let index: HashMap<&str, usize> = file
            .universe
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut rels = BTreeMap::new();
        for (name, rows) in &file.relations {
            let arity = file
                .signature
                .arity(name)
                .ok_or_else(|| Error::InvalidStructure(format!("relation `{name}` is not in the signature")))?;
            let mut tuples = Vec::new();
            for row in rows {
                let t: Option<Vec<usize>> = row.iter().map(|e| index.get(e.as_str()).copied()).collect();
                let t = t.ok_or_else(|| {
                    Error::InvalidStructure(format!("relation `{name}` mentions an unknown element in {row:?}"))
                })?;
                tuples.push(t);
            }
            rels.insert(name.clone(), Relation::from_tuples(arity, n, tuples)?);
        }
        Self::new(file.signature, file.universe, rels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_defaults() {
        let text = r#"{"signature":{"relations":{"Leq":2,"Zero":1}},"universe":["e0","e1"],
                      "relations":{"Leq":[["e0","e0"],["e0","e1"],["e1","e1"]]}}"#;
        let m = FiniteStructure::from_json(text).unwrap();
        assert_eq!(m.size(), 2);
        assert!(m.relation("Zero").unwrap().is_empty());
        assert!(m.relation("Leq").unwrap().contains(&[0, 1]));
        let again = FiniteStructure::from_json(&m.to_json()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn rejects_bad_files() {
        let empty = r#"{"signature":{"relations":{}},"universe":[]}"#;
        assert!(FiniteStructure::from_json(empty).is_err());
        let unknown = r#"{"signature":{"relations":{"R":1}},"universe":["a"],"relations":{"R":[["b"]]}}"#;
        assert!(FiniteStructure::from_json(unknown).is_err());
        let dup = r#"{"signature":{"relations":{}},"universe":["a","a"]}"#;
        assert!(FiniteStructure::from_json(dup).is_err());
    }

    #[test]
    fn induced_substructure() {
        let sig = Signature::of(&[("Leq", 2)]);
        let m = FiniteStructure::from_named(
            sig,
            &["a", "b", "c"],
            &[("Leq", &[&["a", "b"], &["b", "c"], &["a", "c"]])],
        )
        .unwrap();
        let sub = m.induced(&[0, 2]).unwrap();
        assert_eq!(sub.universe(), &["a".to_string(), "c".to_string()]);
        assert_eq!(sub.relation("Leq").unwrap().tuples(), vec![vec![0, 1]]);
    }
}
