//! Explicit second-order structures and finite-scale definiteness checks.

mod definite;
mod family;
mod retract;
mod spc;
mod strong;
mod witness;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::caps::{ensure, Caps};
use crate::error::{Error, Result};
use crate::model::{Compiled, FiniteStructure, Frame, Relation};
use crate::syntax::{Formula, Signature};

pub use definite::{check_definite, check_goal_invariance, check_iso_statement_invariance, InvarianceReport};
pub use family::{mk_defpf_family, ClassFamily};
pub use retract::check_retract;
pub use spc::{check_spc, check_spc_strict, ClosureFailure, SpcReport};
pub use strong::x_strong_models;
pub use witness::{find_witness, is_witness, WitnessSide};

/// A ground structure with a family of classes over its universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SOStructure {
    pub ground: FiniteStructure,
    pub classes: ClassFamily,
}

impl SOStructure {
    pub fn new(ground: FiniteStructure, classes: ClassFamily, caps: &Caps) -> Result<Self> {
        match &classes {
            ClassFamily::Full(k) => {
                let n = ground.size() as u32;
                let span = n.checked_pow(2 * *k as u32).map(|v| v as usize);
                ensure(span.is_some_and(|s| s <= caps.max_full), || {
                    format!("a full family up to arity {k} over {n} elements exceeds the cap of {}", caps.max_full)
                })?;
            }
            ClassFamily::Explicit(m) => {
                if m.values().flatten().any(|r| r.size() != ground.size()) {
                    return Err(Error::InvalidStructure("class members must range over the ground universe".into()));
                }
            }
        }
        Ok(SOStructure { ground, classes })
    }
}

/// `(dom, eq, R1, ..., Rk)` drawn from a class family. Every component lies
/// inside `dom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelTuple {
    pub dom: Vec<usize>,
    pub eq: Relation,
    pub rels: BTreeMap<String, Relation>,
}

impl ModelTuple {
    /// Relations in signature name order.
    pub fn rel_table(&self) -> Vec<&Relation> {
        self.rels.values().collect()
    }

    pub fn frame<'a>(&'a self, rels: &'a [&'a Relation]) -> Frame<'a> {
        Frame::new(&self.dom, rels).with_eq(Some(&self.eq))
    }

    /// Truth of a sentence, quantifiers relativized to `dom`, `=` read as `eq`.
    pub fn satisfies(&self, sig: &Signature, sentence: &Formula) -> Result<bool> {
        let c = Compiled::new(sig, sentence, &[], false)?;
        let rels = self.rel_table();
        Ok(c.eval(&self.frame(&rels), &[]))
    }

    /// Standalone structure on `dom` with `eq` as an extra binary symbol.
    pub fn materialize(&self, ground: &FiniteStructure, sig: &Signature, eq_symbol: &str) -> Result<FiniteStructure> {
        let full = sig.with(eq_symbol, 2)?;
        let names: Vec<String> = self.dom.iter().map(|&e| ground.name(e).to_owned()).collect();
        let pos: BTreeMap<usize, usize> = self.dom.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut rels = BTreeMap::new();
        for (name, r) in self.rels.iter().chain([(&eq_symbol.to_owned(), &self.eq)]) {
            let tuples = r.tuples().into_iter().map(|t| t.iter().map(|e| pos[e]).collect::<Vec<_>>());
            rels.insert(name.clone(), Relation::from_tuples(r.arity(), names.len(), tuples)?);
        }
        FiniteStructure::new(full, names, rels)
    }

    pub fn to_value(&self, ground: &FiniteStructure) -> Value {
        let names = |r: &Relation| -> Value {
            r.tuples()
                .into_iter()
                .map(|t| t.iter().map(|&e| ground.name(e)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into()
        };
        json!({
            "dom": self.dom.iter().map(|&e| ground.name(e)).collect::<Vec<_>>(),
            "eq": names(&self.eq),
            "rels": self.rels.iter().map(|(n, r)| (n.clone(), names(r))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// A pair of strong models on which the goal fails while the guards hold.
    Pair { left: ModelTuple, right: ModelTuple, tag: String },
    /// A named condition that is false in the ground structure.
    Condition { tag: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Holds only because there was nothing to check.
    pub vacuous: bool,
    pub witness: Option<Relation>,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub(crate) fn pass(vacuous: bool, witness: Option<Relation>) -> Self {
        Verdict {
            holds: true,
            vacuous,
            witness,
            counterexample: None,
        }
    }

    pub(crate) fn fail(c: Counterexample) -> Self {
        Verdict {
            holds: false,
            vacuous: false,
            witness: None,
            counterexample: Some(c),
        }
    }

    pub fn to_value(&self, ground: &FiniteStructure) -> Value {
        let mut out = serde_json::Map::new();
        out.insert("holds".into(), self.holds.into());
        out.insert("vacuous".into(), self.vacuous.into());
        if let Some(w) = &self.witness {
            let rows: Vec<Vec<&str>> = w.tuples().into_iter().map(|t| t.iter().map(|&e| ground.name(e)).collect()).collect();
            out.insert("witness".into(), json!(rows));
        }
        match &self.counterexample {
            Some(Counterexample::Pair { left, right, tag }) => {
                out.insert("counterexample".into(), json!([left.to_value(ground), right.to_value(ground)]));
                out.insert("guard_tag".into(), tag.clone().into());
            }
            Some(Counterexample::Condition { tag, detail }) => {
                out.insert("counterexample".into(), json!({ "condition": detail }));
                out.insert("guard_tag".into(), tag.clone().into());
            }
            None => {}
        }
        Value::Object(out)
    }

    pub fn to_json(&self, ground: &FiniteStructure) -> String {
        serde_json::to_string_pretty(&self.to_value(ground)).expect("verdict serializes")
    }
}
