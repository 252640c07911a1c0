use serde::Serialize;

use super::SOStructure;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{eval_with, invariant_relations, Assignment, FiniteStructure, Relation};
use crate::scheme::Scheme;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureFailure {
    pub parameter: Vec<String>,
    /// Subsets invariant under the automorphisms fixing `parameter` setwise
    /// that are not classes.
    pub missing: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpcReport {
    /// Unary classes `X` with `(ground, X)` failing the scheme.
    pub scheme_failures: Vec<Vec<String>>,
    pub closure_failures: Vec<ClosureFailure>,
    /// Strict mode only: subsets of the universe that are not classes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_missing: Option<Vec<Vec<String>>>,
}

impl SpcReport {
    pub fn is_ok(&self) -> bool {
        self.scheme_failures.is_empty()
            && self.closure_failures.is_empty()
            && self.strict_missing.as_ref().is_none_or(Vec::is_empty)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn names(m: &FiniteStructure, r: &Relation) -> Vec<String> {
    r.elements().into_iter().map(|e| m.name(e).to_owned()).collect()
}

fn parameter_symbol(m: &FiniteStructure) -> String {
    (0..)
        .map(|i| if i == 0 { "X".to_owned() } else { format!("X{i}") })
        .find(|s| !m.signature().contains(s))
        .expect("some name is free")
}

/// Checks every unary class against the scheme, and that each class's
/// parameter-free definable sets (the sets invariant under automorphisms
/// fixing it) are classes again.
pub fn check_spc(so: &SOStructure, s: &Scheme, caps: &Caps) -> Result<SpcReport> {
    let g = &so.ground;
    if s.sig() != g.signature() {
        return Err(Error::SignatureMismatch(format!(
            "scheme over {} checked against a ground structure over {}",
            s.sig(),
            g.signature()
        )));
    }
    let unary = so.classes.members(1, g.size(), caps)?;
    let mut scheme_failures = Vec::new();
    let mut closure_failures = Vec::new();
    let x = parameter_symbol(g);
    for class in &unary {
        if !eval_with(g, s.body(), &Assignment::new(), None, Some(class.bits()))? {
            scheme_failures.push(names(g, class));
        }
        let expanded = g.with_relation(&x, class.clone())?;
        let missing: Vec<Vec<String>> = invariant_relations(&expanded, 1, caps)?
            .iter()
            .filter(|r| !unary.contains(r))
            .map(|r| names(g, r))
            .collect();
        if !missing.is_empty() {
            closure_failures.push(ClosureFailure {
                parameter: names(g, class),
                missing,
            });
        }
    }
    Ok(SpcReport {
        scheme_failures,
        closure_failures,
        strict_missing: None,
    })
}

/// As [`check_spc`], adding the requirement that comes with element
/// parameters: on a finite ground every subset is then a class.
pub fn check_spc_strict(so: &SOStructure, s: &Scheme, caps: &Caps) -> Result<SpcReport> {
    let mut report = check_spc(so, s, caps)?;
    let g = &so.ground;
    let unary = so.classes.members(1, g.size(), caps)?;
    let missing = crate::lab::ClassFamily::Full(1)
        .members(1, g.size(), caps)?
        .into_iter()
        .filter(|r| !unary.contains(r))
        .map(|r| names(g, &r))
        .collect();
    report.strict_missing = Some(missing);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::ClassFamily;
    use crate::syntax::Signature;

    fn so(classes: &str) -> SOStructure {
        let g = FiniteStructure::from_named(Signature::default(), &["a", "b", "c"], &[]).unwrap();
        let f = ClassFamily::from_json(classes, &g).unwrap();
        SOStructure::new(g, f, &Caps::default()).unwrap()
    }

    fn truth() -> Scheme {
        Scheme::parse(Signature::default(), "true").unwrap()
    }

    #[test]
    fn the_three_fixtures() {
        let caps = Caps::default();
        let ok = check_spc(&so(r#"{"classes": {"1": [[], ["a","b","c"]]}}"#), &truth(), &caps).unwrap();
        assert!(ok.is_ok());
        let empty_only = check_spc(&so(r#"{"classes": {"1": [[]]}}"#), &truth(), &caps).unwrap();
        assert_eq!(empty_only.closure_failures[0].missing, vec![vec!["a", "b", "c"]]);
        let a = check_spc(&so(r#"{"classes": {"1": [[], ["a"], ["a","b","c"]]}}"#), &truth(), &caps).unwrap();
        assert_eq!(a.closure_failures.len(), 1);
        assert_eq!(a.closure_failures[0].parameter, vec!["a"]);
        assert_eq!(a.closure_failures[0].missing, vec![vec!["b", "c"]]);
    }

    #[test]
    fn scheme_failures_and_strict_mode() {
        let caps = Caps::default();
        let s = so(r#"{"classes": {"1": [[], ["a","b","c"]]}}"#);
        let nonempty = Scheme::parse(Signature::default(), "ex x. P(x)").unwrap();
        assert_eq!(check_spc(&s, &nonempty, &caps).unwrap().scheme_failures, vec![Vec::<String>::new()]);
        let strict = check_spc_strict(&s, &truth(), &caps).unwrap();
        assert_eq!(strict.strict_missing.as_ref().unwrap().len(), 6);
        let full = SOStructure::new(s.ground.clone(), ClassFamily::Full(1), &caps).unwrap();
        assert!(check_spc_strict(&full, &truth(), &caps).unwrap().is_ok());
    }
}
