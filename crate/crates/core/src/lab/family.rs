use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::caps::{ensure, Caps};
use crate::error::{Error, Result};
use crate::model::{all_tuples, invariant_relations, FiniteStructure, Relation};

/// The second-order part of a structure, stratified by arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassFamily {
    /// Every relation of arity at most the bound.
    Full(usize),
    /// Explicit members per arity, deduplicated and in canonical order.
    Explicit(BTreeMap<usize, Vec<Relation>>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FamilyFile {
    Full { full_up_to_arity: usize },
    Explicit { classes: BTreeMap<String, Vec<Vec<Value>>> },
}

/// Subsets of `cells` (sorted table indices) as relations, in canonical order.
fn subsets_of(arity: usize, size: usize, cells: &[usize]) -> Result<Vec<Relation>> {
    let mut out = Vec::with_capacity(1 << cells.len());
    for k in 0..=cells.len() {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            let mut r = Relation::empty(arity, size)?;
            comb.iter().for_each(|&i| r.set_index(cells[i], true));
            out.push(r);
            let Some(i) = (0..k).rev().find(|&i| comb[i] != i + cells.len() - k) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    Ok(out)
}

impl ClassFamily {
    /// Sorts and deduplicates explicit members.
    pub fn explicit(classes: BTreeMap<usize, Vec<Relation>>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (arity, mut rels) in classes {
            if arity == 0 || rels.iter().any(|r| r.arity() != arity) {
                return Err(Error::InvalidArity);
            }
            rels.sort_by(Relation::canonical_cmp);
            rels.dedup();
            out.insert(arity, rels);
        }
        Ok(ClassFamily::Explicit(out))
    }

    pub fn max_arity(&self) -> usize {
        match self {
            ClassFamily::Full(k) => *k,
            ClassFamily::Explicit(m) => m.keys().copied().max().unwrap_or(0),
        }
    }

    pub fn contains(&self, r: &Relation) -> bool {
        match self {
            ClassFamily::Full(k) => r.arity() <= *k,
            ClassFamily::Explicit(m) => m.get(&r.arity()).is_some_and(|v| v.contains(r)),
        }
    }

    /// Members of the given arity whose entries all lie in `dom`, in
    /// canonical order.
    pub fn members_within(&self, arity: usize, size: usize, dom: &[usize], caps: &Caps) -> Result<Vec<Relation>> {
        let mut mask = vec![false; size];
        dom.iter().for_each(|&e| mask[e] = true);
        match self {
            ClassFamily::Full(k) if arity <= *k => {
                let cells: Vec<usize> = all_tuples(dom.len(), arity)?
                    .into_iter()
                    .map(|t| t.iter().fold(0, |acc, &i| acc * size + dom[i]))
                    .collect();
                ensure(cells.len() < usize::BITS as usize && 1usize << cells.len() <= caps.max_full, || {
                    format!("2^{} relations of arity {arity} exceed the cap of {}", cells.len(), caps.max_full)
                })?;
                let mut cells = cells;
                cells.sort_unstable();
                subsets_of(arity, size, &cells)
            }
            ClassFamily::Full(_) => Ok(Vec::new()),
            ClassFamily::Explicit(m) => Ok(m
                .get(&arity)
                .map(|v| v.iter().filter(|r| r.within(&mask)).cloned().collect())
                .unwrap_or_default()),
        }
    }

    /// Every member of the given arity.
    pub fn members(&self, arity: usize, size: usize, caps: &Caps) -> Result<Vec<Relation>> {
        let all: Vec<usize> = (0..size).collect();
        self.members_within(arity, size, &all, caps)
    }

    pub fn from_json(text: &str, ground: &FiniteStructure) -> Result<Self> {
        match serde_json::from_str::<FamilyFile>(text)? {
            FamilyFile::Full { full_up_to_arity } => Ok(ClassFamily::Full(full_up_to_arity)),
            FamilyFile::Explicit { classes } => {
                let mut out = BTreeMap::new();
                for (key, list) in classes {
                    let arity: usize = key
                        .parse()
                        .map_err(|_| Error::InvalidStructure(format!("class arity `{key}` is not a number")))?;
                    let mut rels = Vec::new();
                    for class in list {
                        let mut tuples = Vec::new();
                        for entry in class {
                            let names: Vec<String> = match entry {
                                Value::String(s) if arity == 1 => vec![s],
                                other => serde_json::from_value(other)?,
                            };
                            let t: Option<Vec<usize>> = names.iter().map(|n| ground.index_of(n)).collect();
                            tuples.push(t.ok_or_else(|| {
                                Error::InvalidStructure(format!("class entry {names:?} mentions an unknown element"))
                            })?);
                        }
                        rels.push(Relation::from_tuples(arity, ground.size(), tuples)?);
                    }
                    out.insert(arity, rels);
                }
                Self::explicit(out)
            }
        }
    }

    pub fn to_json(&self, ground: &FiniteStructure) -> String {
        let file = match self {
            ClassFamily::Full(k) => FamilyFile::Full { full_up_to_arity: *k },
            ClassFamily::Explicit(m) => FamilyFile::Explicit {
                classes: m
                    .iter()
                    .map(|(arity, rels)| {
                        let classes = rels
                            .iter()
                            .map(|r| {
                                r.tuples()
                                    .into_iter()
                                    .map(|t| match t.as_slice() {
                                        [e] => Value::from(ground.name(*e)),
                                        _ => Value::from(t.iter().map(|&e| ground.name(e)).collect::<Vec<_>>()),
                                    })
                                    .collect()
                            })
                            .collect();
                        (arity.to_string(), classes)
                    })
                    .collect(),
            },
        };
        serde_json::to_string(&file).expect("family serializes")
    }
}

/// The automorphism-invariant relations of each arity up to `max_arity`.
pub fn mk_defpf_family(m: &FiniteStructure, max_arity: usize, caps: &Caps) -> Result<ClassFamily> {
    if max_arity == 0 {
        return Err(Error::InvalidArity);
    }
    let mut classes = BTreeMap::new();
    for arity in 1..=max_arity {
        classes.insert(arity, invariant_relations(m, arity, caps)?);
    }
    ClassFamily::explicit(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;

    fn pure(n: usize) -> FiniteStructure {
        let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        FiniteStructure::new(Signature::default(), names, BTreeMap::new()).unwrap()
    }

    #[test]
    fn defpf_of_small_structures() {
        let caps = Caps::default();
        let f = mk_defpf_family(&pure(3), 1, &caps).unwrap();
        assert_eq!(f.members(1, 3, &caps).unwrap().len(), 2);
        let chain = FiniteStructure::from_named(
            Signature::of(&[("Leq", 2)]),
            &["a", "b", "c"],
            &[("Leq", &[&["a", "a"], &["a", "b"], &["a", "c"], &["b", "b"], &["b", "c"], &["c", "c"]])],
        )
        .unwrap();
        assert_eq!(mk_defpf_family(&chain, 1, &caps).unwrap().members(1, 3, &caps).unwrap().len(), 8);
        assert_eq!(mk_defpf_family(&chain, 0, &caps), Err(Error::InvalidArity));
    }

    #[test]
    fn full_members_are_canonical() {
        let caps = Caps::default();
        let f = ClassFamily::Full(2);
        let ones = f.members(1, 3, &caps).unwrap();
        assert_eq!(ones.len(), 8);
        assert!(ones.windows(2).all(|w| w[0].canonical_cmp(&w[1]).is_lt()));
        assert_eq!(f.members(2, 4, &caps).unwrap().len(), 1 << 16);
        assert_eq!(f.members_within(2, 4, &[1, 3], &caps).unwrap().len(), 16);
        assert!(matches!(f.members(2, 5, &caps), Err(Error::CapExceeded(_))));
        assert!(f.members(3, 2, &caps).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let g = pure(3);
        let text = r#"{"classes": {"1": [["a"], [], ["b", "c"]], "2": [[["a", "b"]]]}}"#;
        let f = ClassFamily::from_json(text, &g).unwrap();
        assert_eq!(ClassFamily::from_json(&f.to_json(&g), &g).unwrap(), f);
        assert_eq!(f.members(1, 3, &Caps::default()).unwrap()[0].len(), 0);
        let full = ClassFamily::from_json(r#"{"full_up_to_arity": 2}"#, &g).unwrap();
        assert_eq!(full, ClassFamily::Full(2));
        assert!(ClassFamily::from_json(r#"{"classes": {"1": [["z"]]}}"#, &g).is_err());
    }
}
