//! Schemes with the marked predicate `P`, their instances, the stock scheme
//! and theory builders, comprehension axiom generators, and definiteness
//! check plans.

mod builders;
mod comprehension;
mod definiteness;
mod enumerate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{parse, print, substitute_predicate, universal_closure, Formula, Signature, Var};

pub use builders::{
    build_as, build_com, build_cycle, build_dlo, build_hf, build_ind, build_mu, build_nu, build_pa_minus,
    build_sat, build_tarski, SAT_CODING,
};
pub use comprehension::{build_pc, build_spc, CLASS_SORTS};
pub use definiteness::{mk_definiteness_statement, DefinitenessKind, DefinitenessPlan, Goal, Guard};
pub use enumerate::{enumerate_formulas, instances_up_to};

/// A sentence over `sig` plus the unary scheme predicate `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    sig: Signature,
    body: Formula,
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    signature: Signature,
    body: String,
}

impl Scheme {
    pub fn new(sig: Signature, body: Formula) -> Result<Self> {
        body.check(&sig, true)?;
        if let Some(v) = body.free_vars().first() {
            return Err(Error::IllFormed(format!("scheme body has free variable `{v}`")));
        }
        Ok(Scheme { sig, body })
    }

    pub fn parse(sig: Signature, text: &str) -> Result<Self> {
        let body = parse(text, &sig, true)?;
        Self::new(sig, body)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn text(&self) -> String {
        print(&self.body)
    }

    pub fn to_json(&self) -> String {
        let file = SchemeFile {
            signature: self.sig.clone(),
            body: self.text(),
        };
        serde_json::to_string_pretty(&file).expect("scheme serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SchemeFile = serde_json::from_str(text)?;
        Self::parse(file.signature, &file.body)
    }
}

/// A finite list of sentences over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    sig: Signature,
    axioms: Vec<Formula>,
}

#[derive(Serialize, Deserialize)]
struct TheoryFile {
    signature: Signature,
    axioms: Vec<String>,
}

impl Theory {
    pub fn new(sig: Signature, axioms: Vec<Formula>) -> Result<Self> {
        for a in &axioms {
            a.check(&sig, false)?;
            if let Some(v) = a.free_vars().first() {
                return Err(Error::IllFormed(format!("axiom `{}` has free variable `{v}`", print(a))));
            }
        }
        Ok(Theory { sig, axioms })
    }

    pub fn empty() -> Self {
        Theory {
            sig: Signature::default(),
            axioms: Vec::new(),
        }
    }

    pub fn parse(sig: Signature, texts: &[&str]) -> Result<Self> {
        let axioms = texts.iter().map(|t| parse(t, &sig, false)).collect::<Result<_>>()?;
        Self::new(sig, axioms)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn axioms(&self) -> &[Formula] {
        &self.axioms
    }

    /// One axiom per line.
    pub fn text(&self) -> String {
        self.axioms.iter().map(|a| print(a) + "\n").collect()
    }

    pub fn to_json(&self) -> String {
        let file = TheoryFile {
            signature: self.sig.clone(),
            axioms: self.axioms.iter().map(print).collect(),
        };
        serde_json::to_string_pretty(&file).expect("theory serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TheoryFile = serde_json::from_str(text)?;
        let texts: Vec<&str> = file.axioms.iter().map(String::as_str).collect();
        Self::parse(file.signature, &texts)
    }
}

/// The closed instance `all ȳ. body[phi/P]` for `phi(pivot, ȳ)`.
pub fn mk_instance(s: &Scheme, phi: &Formula, pivot: &Var) -> Result<Formula> {
    phi.check(&s.sig, false)?;
    Ok(universal_closure(&substitute_predicate(&s.body, phi, pivot)?))
}
