use std::collections::BTreeMap;

use super::eval::eta_relation;
use super::relation::Relation;
use super::structure::FiniteStructure;
use crate::error::{Error, Result};
use crate::syntax::Formula;

/// Checks that `eq` is an equivalence on `dom` (reflexive there, and
/// symmetric and transitive on the whole table).
pub fn check_equivalence(m: &FiniteStructure, eq: &Relation, dom: &[usize]) -> Result<()> {
    let name = |e: usize| m.name(e).to_owned();
    for &a in dom {
        if !eq.contains(&[a, a]) {
            return Err(Error::NotEquivalence(format!("not reflexive at {}", name(a))));
        }
    }
    for t in eq.tuples() {
        let (a, b) = (t[0], t[1]);
        if !eq.contains(&[b, a]) {
            return Err(Error::NotEquivalence(format!(
                "not symmetric: ({}, {}) without ({}, {})",
                name(a),
                name(b),
                name(b),
                name(a)
            )));
        }
        for c in 0..m.size() {
            if eq.contains(&[b, c]) && !eq.contains(&[a, c]) {
                return Err(Error::NotEquivalence(format!(
                    "not transitive: ({}, {}) and ({}, {}) without ({}, {})",
                    name(a),
                    name(b),
                    name(b),
                    name(c),
                    name(a),
                    name(c)
                )));
            }
        }
    }
    Ok(())
}

/// Checks that `rel` is closed under replacing any entry by an `eq`-mate.
pub fn check_congruence(m: &FiniteStructure, symbol: &str, rel: &Relation, eq: &Relation) -> Result<()> {
    for t in rel.tuples() {
        for pos in 0..t.len() {
            for b in 0..m.size() {
                if b == t[pos] || !eq.contains(&[t[pos], b]) {
                    continue;
                }
                let mut u = t.clone();
                u[pos] = b;
                if !rel.contains(&u) {
                    let show = |v: &[usize]| v.iter().map(|&e| m.name(e)).collect::<Vec<_>>().join(",");
                    return Err(Error::NotCongruence(format!(
                        "{symbol}({}) holds but {symbol}({}) does not",
                        show(&t),
                        show(&u)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Quotient by an equivalence relation given as a table. Each class is named
/// after its least member.
pub fn quotient_by(m: &FiniteStructure, eq: &Relation) -> Result<FiniteStructure> {
    check_equivalence(m, eq, m.elements())?;
    for (symbol, rel) in m.relations() {
        check_congruence(m, symbol, rel, eq)?;
    }
    let n = m.size();
    let class_of: Vec<usize> = (0..n)
        .map(|a| (0..n).find(|&b| eq.contains(&[a, b])).expect("reflexive"))
        .collect();
    let reps: Vec<usize> = (0..n).filter(|&a| class_of[a] == a).collect();
    let pos: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let universe = reps.iter().map(|&r| m.name(r).to_owned()).collect();
    let mut relations = BTreeMap::new();
    for (symbol, rel) in m.relations() {
        let tuples = rel
            .tuples()
            .into_iter()
            .map(|t| t.iter().map(|&e| pos[&class_of[e]]).collect::<Vec<_>>());
        relations.insert(symbol.clone(), Relation::from_tuples(rel.arity(), reps.len(), tuples)?);
    }
    FiniteStructure::new(m.signature().clone(), universe, relations)
}

/// Quotient by the equivalence defined by `eta(x, y)`.
pub fn quotient(m: &FiniteStructure, eta: &Formula) -> Result<FiniteStructure> {
    let free = eta.free_vars();
    if free.iter().any(|v| v.as_str() != "x" && v.as_str() != "y") {
        return Err(Error::IllFormed(format!(
            "the equivalence formula may only use x and y free, found {}",
            free.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
        )));
    }
    quotient_by(m, &eta_relation(m, eta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::find_isomorphism;
    use crate::syntax::{parse_untyped, Signature};

    fn preorder() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::of(&[("Leq", 2)]),
            &["a", "b", "c"],
            &[(
                "Leq",
                &[&["a", "a"], &["a", "b"], &["b", "a"], &["b", "b"], &["a", "c"], &["b", "c"], &["c", "c"]],
            )],
        )
        .unwrap()
    }

    #[test]
    fn preorder_collapses_to_two_chain() {
        let eta = parse_untyped("Leq(x,y) & Leq(y,x)").unwrap().0;
        let q = quotient(&preorder(), &eta).unwrap();
        assert_eq!(q.universe(), &["a".to_string(), "c".to_string()]);
        let chain =
            FiniteStructure::from_named(Signature::of(&[("Leq", 2)]), &["0", "1"], &[("Leq", &[&["0", "0"], &["0", "1"], &["1", "1"]])])
                .unwrap();
        assert!(find_isomorphism(&q, &chain).is_some());
    }

    #[test]
    fn identity_quotient_is_the_structure() {
        let m = preorder();
        let q = quotient(&m, &parse_untyped("x = y").unwrap().0).unwrap();
        assert_eq!(q, m);
    }

    #[test]
    fn total_relation_is_not_a_congruence() {
        let err = quotient(&preorder(), &Formula::True).unwrap_err();
        assert!(matches!(err, Error::NotCongruence(_)), "{err}");
        let not_eq = quotient(&preorder(), &parse_untyped("Leq(x,y)").unwrap().0).unwrap_err();
        assert!(matches!(not_eq, Error::NotEquivalence(_)));
    }
}
