use std::fmt;

use serde::Serialize;

use super::Scheme;
use crate::error::{Error, Result};
use crate::syntax::{print, Formula};

/// Which relation two strong models are required to stand in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefinitenessKind {
    Iso,
    Eeq(Formula),
    InEveryCardinality(Box<DefinitenessKind>),
    Height(Formula),
}

/// A premise on the pair, each asking for a witness `F` in the class family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    /// `F` is a bijection between the two domains (modulo equality).
    Bijection,
    /// `F` is an isomorphism between the parts carved out by the formula,
    /// ordered by the first binary symbol.
    OrdIso(#[serde(serialize_with = "as_text")] Formula),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Goal {
    /// Some `F` in the family is an isomorphism.
    Iso,
    /// Both models agree on the sentence.
    Eeq(#[serde(serialize_with = "as_text")] Formula),
}

fn as_text<S: serde::Serializer>(f: &Formula, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&print(f))
}

/// For all strong models `M1, M2` of the scheme: guards imply goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitenessPlan {
    pub scheme: Scheme,
    pub guards: Vec<Guard>,
    pub goal: Goal,
    /// The goal cannot fail, whatever the models.
    pub vacuous: bool,
}

// truth of a sentence without atoms or equalities does not depend on the model
fn constant(f: &Formula) -> bool {
    let mut yes = true;
    f.visit(&mut |g| {
        if matches!(g, Formula::Atom(..) | Formula::Eq(..)) {
            yes = false;
        }
    });
    yes
}

pub fn mk_definiteness_statement(tau: &Scheme, kind: &DefinitenessKind) -> Result<DefinitenessPlan> {
    let mut guards = Vec::new();
    let mut kind = kind;
    loop {
        match kind {
            DefinitenessKind::InEveryCardinality(inner) => {
                guards.push(Guard::Bijection);
                kind = inner;
            }
            DefinitenessKind::Height(ord) => {
                if ord.free_vars().len() != 1 {
                    return Err(Error::IllFormed(format!(
                        "height formula `{}` must have exactly one free variable",
                        print(ord)
                    )));
                }
                ord.check(tau.sig(), false)?;
                guards.push(Guard::OrdIso(ord.clone()));
                kind = &DefinitenessKind::Iso;
            }
            DefinitenessKind::Iso => {
                return Ok(DefinitenessPlan {
                    scheme: tau.clone(),
                    guards,
                    goal: Goal::Iso,
                    vacuous: false,
                })
            }
            DefinitenessKind::Eeq(alpha) => {
                alpha.check(tau.sig(), false)?;
                if !alpha.is_sentence() {
                    return Err(Error::IllFormed(format!("`{}` is not a sentence", print(alpha))));
                }
                return Ok(DefinitenessPlan {
                    scheme: tau.clone(),
                    guards,
                    vacuous: constant(alpha),
                    goal: Goal::Eeq(alpha.clone()),
                });
            }
        }
    }
}

impl fmt::Display for DefinitenessPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "for all strong models M1, M2 of {}: ", print(self.scheme.body()))?;
        for g in &self.guards {
            match g {
                Guard::Bijection => f.write_str("(ex F in X. F: M1 -> M2 bijective) -> ")?,
                Guard::OrdIso(ord) => write!(f, "(ex F in X. F: {{{}}}^M1 -> {{{}}}^M2 isomorphic) -> ", print(ord), print(ord))?,
            }
        }
        match &self.goal {
            Goal::Iso => f.write_str("ex F in X. F: M1 -> M2 isomorphic")?,
            Goal::Eeq(a) => write!(f, "(M1 |= {a} <-> M2 |= {a})", a = print(a))?,
        }
        if self.vacuous {
            f.write_str("  [vacuous]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::build_cycle;
    use crate::syntax::parse_untyped;

    #[test]
    fn plans() {
        let tau = build_cycle();
        let iso = mk_definiteness_statement(&tau, &DefinitenessKind::Iso).unwrap();
        assert!(iso.guards.is_empty() && iso.goal == Goal::Iso && !iso.vacuous);
        let t = mk_definiteness_statement(&tau, &DefinitenessKind::Eeq(Formula::True)).unwrap();
        assert!(t.vacuous);
        let iec = DefinitenessKind::InEveryCardinality(Box::new(DefinitenessKind::Iso));
        let plan = mk_definiteness_statement(&tau, &iec).unwrap();
        assert_eq!(plan.guards, vec![Guard::Bijection]);
        assert!(plan.to_string().contains("bijective"));
    }

    #[test]
    fn ill_formed_kinds() {
        let tau = build_cycle();
        let open = parse_untyped("Succ(x,y)").unwrap().0;
        assert!(mk_definiteness_statement(&tau, &DefinitenessKind::Height(open.clone())).is_err());
        assert!(mk_definiteness_statement(&tau, &DefinitenessKind::Eeq(open)).is_err());
        let foreign = parse_untyped("ex x. Leq(x,x)").unwrap().0;
        assert!(mk_definiteness_statement(&tau, &DefinitenessKind::Eeq(foreign)).is_err());
    }
}
