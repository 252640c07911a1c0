use std::collections::{BTreeMap, BTreeSet};

use super::formula::{Formula, Var};
use super::signature::SCHEME_PREDICATE;
use crate::error::{Error, Result};

/// First of `base0`, `base1`, ... not in `avoid`.
pub fn fresh(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    (0..)
        .map(|i| Var::new(format!("{base}{i}")))
        .find(|v| !avoid.contains(v))
        .expect("unbounded supply")
}

/// Simultaneous capture-avoiding replacement of free variables.
///
/// Bound variables of `f` that would capture a replacement are renamed with
/// [`fresh`].
pub fn rename_free(f: &Formula, map: &BTreeMap<Var, Var>) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    let look = |v: &Var, m: &BTreeMap<Var, Var>| m.get(v).cloned().unwrap_or_else(|| v.clone());
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(s, args) => Formula::Atom(s.clone(), args.iter().map(|v| look(v, map)).collect()),
        Formula::Eq(a, b) => Formula::Eq(look(a, map), look(b, map)),
        Formula::Not(g) => Formula::not(rename_free(g, map)),
        Formula::And(a, b) => Formula::and(rename_free(a, map), rename_free(b, map)),
        Formula::Or(a, b) => Formula::or(rename_free(a, map), rename_free(b, map)),
        Formula::Implies(a, b) => Formula::implies(rename_free(a, map), rename_free(b, map)),
        Formula::Iff(a, b) => Formula::iff(rename_free(a, map), rename_free(b, map)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let mut inner = map.clone();
            inner.remove(v);
            let body_free: BTreeSet<Var> = body.free_vars().into_iter().collect();
            let captures = body_free
                .iter()
                .filter(|w| *w != v)
                .any(|w| inner.get(w) == Some(v));
            let binder = if captures {
                let mut avoid = body.all_vars();
                avoid.extend(inner.values().cloned());
                avoid.extend(f.free_vars());
                let renamed = fresh(v, &avoid);
                inner.insert(v.clone(), renamed.clone());
                renamed
            } else {
                v.clone()
            };
            inner.retain(|from, to| from != to);
            let new_body = rename_free(body, &inner);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(binder, new_body)
            } else {
                Formula::exists(binder, new_body)
            }
        }
    }
}

/// Replaces every free occurrence of `v` by `t`, avoiding capture.
pub fn substitute_var(f: &Formula, v: &Var, t: &Var) -> Formula {
    let mut map = BTreeMap::new();
    if v != t {
        map.insert(v.clone(), t.clone());
    }
    rename_free(f, &map)
}

/// Replaces each `P(t)` in `f` by `phi[t/pivot]`.
///
/// Quantifiers of `f` binding a free parameter of `phi` are renamed first,
/// and `phi`'s own bound variables are renamed when they would capture `t`.
pub fn substitute_predicate(f: &Formula, phi: &Formula, pivot: &Var) -> Result<Formula> {
    let phi_free = phi.free_vars();
    if !phi_free.contains(pivot) {
        return Err(Error::PivotNotFree(pivot.to_string()));
    }
    let params: BTreeSet<Var> = phi_free.into_iter().filter(|v| v != pivot).collect();
    let mut avoid = f.all_vars();
    avoid.extend(phi.all_vars());
    let out = replace_p(f, &mut |t| substitute_var(phi, pivot, t), &params, &mut avoid, &BTreeMap::new());
    if out.mentions_p() {
        return Err(Error::PStillPresent);
    }
    Ok(out)
}

/// Replaces `P(t)` by `make(t)`, renaming binders of `f` that belong to
/// `params` so that the inserted formulas keep their parameters free.
pub(crate) fn replace_p(
    f: &Formula,
    make: &mut dyn FnMut(&Var) -> Formula,
    params: &BTreeSet<Var>,
    avoid: &mut BTreeSet<Var>,
    ren: &BTreeMap<Var, Var>,
) -> Formula {
    let look = |v: &Var| ren.get(v).cloned().unwrap_or_else(|| v.clone());
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(s, args) if s == SCHEME_PREDICATE && args.len() == 1 => make(&look(&args[0])),
        Formula::Atom(s, args) => Formula::Atom(s.clone(), args.iter().map(look).collect()),
        Formula::Eq(a, b) => Formula::Eq(look(a), look(b)),
        Formula::Not(g) => Formula::not(replace_p(g, make, params, avoid, ren)),
        Formula::And(a, b) => Formula::and(
            replace_p(a, make, params, avoid, ren),
            replace_p(b, make, params, avoid, ren),
        ),
        Formula::Or(a, b) => Formula::or(
            replace_p(a, make, params, avoid, ren),
            replace_p(b, make, params, avoid, ren),
        ),
        Formula::Implies(a, b) => Formula::implies(
            replace_p(a, make, params, avoid, ren),
            replace_p(b, make, params, avoid, ren),
        ),
        Formula::Iff(a, b) => Formula::iff(
            replace_p(a, make, params, avoid, ren),
            replace_p(b, make, params, avoid, ren),
        ),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let binder = if params.contains(v) {
                let renamed = fresh(v, avoid);
                avoid.insert(renamed.clone());
                renamed
            } else {
                v.clone()
            };
            let mut inner = ren.clone();
            inner.insert(v.clone(), binder.clone());
            let new_body = replace_p(body, make, params, avoid, &inner);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(binder, new_body)
            } else {
                Formula::exists(binder, new_body)
            }
        }
    }
}

/// Relativizes every quantifier to the unary `symbol`:
/// `all v. f` becomes `all v.(S(v) -> f)` and `ex v. f` becomes `ex v.(S(v) & f)`.
pub fn relativize(f: &Formula, symbol: &str) -> Formula {
    let guard = |v: &Var| Formula::atom_vars(symbol, vec![v.clone()]);
    match f {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(relativize(g, symbol)),
        Formula::And(a, b) => Formula::and(relativize(a, symbol), relativize(b, symbol)),
        Formula::Or(a, b) => Formula::or(relativize(a, symbol), relativize(b, symbol)),
        Formula::Implies(a, b) => Formula::implies(relativize(a, symbol), relativize(b, symbol)),
        Formula::Iff(a, b) => Formula::iff(relativize(a, symbol), relativize(b, symbol)),
        Formula::Forall(v, body) => Formula::forall(v.clone(), Formula::implies(guard(v), relativize(body, symbol))),
        Formula::Exists(v, body) => Formula::exists(v.clone(), Formula::and(guard(v), relativize(body, symbol))),
    }
}

/// Prefixes universal quantifiers over the free variables, in order.
pub fn universal_closure(f: &Formula) -> Formula {
    Formula::forall_many(&f.free_vars(), f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::formula::alpha_equal;
    use crate::syntax::parse::parse_untyped;

    fn p(text: &str) -> Formula {
        parse_untyped(text).unwrap().0
    }

    #[test]
    fn trivial_substitution() {
        let out = substitute_predicate(&p("P(x) -> P(x)"), &p("x = x"), &Var::from("x")).unwrap();
        assert_eq!(out, p("x = x -> x = x"));
    }

    #[test]
    fn binder_clashing_with_parameter_is_renamed() {
        let out = substitute_predicate(&p("ex y. P(y)"), &p("Leq(x,y)"), &Var::from("x")).unwrap();
        assert!(alpha_equal(&out, &p("ex y0. Leq(y0,y)")));
        assert_eq!(out, p("ex y0. Leq(y0,y)"));
    }

    #[test]
    fn phi_binder_renamed_when_it_would_capture_argument() {
        // P(y) with phi(x) = ex y. R(x,y): the inner y must not capture the argument
        let out = substitute_predicate(&p("all y. P(y)"), &p("ex y. R(x,y)"), &Var::from("x")).unwrap();
        assert!(alpha_equal(&out, &p("all a. ex b. R(a,b)")));
    }

    #[test]
    fn pivot_must_be_free() {
        assert_eq!(
            substitute_predicate(&p("P(x)"), &p("all x. x = x"), &Var::from("x")),
            Err(Error::PivotNotFree("x".into()))
        );
    }

    #[test]
    fn closure_is_closed() {
        let c = universal_closure(&p("x = y"));
        assert_eq!(c, p("all x. all y. x = y"));
        let closed = p("all x. x = x");
        assert_eq!(universal_closure(&closed), closed);
    }

    #[test]
    fn fresh_appends_numeric_suffix() {
        let avoid: BTreeSet<Var> = ["y0", "y1"].iter().map(|&s| Var::from(s)).collect();
        assert_eq!(fresh(&Var::from("y"), &avoid), Var::from("y2"));
    }

    #[test]
    fn simultaneous_rename_swaps() {
        let mut m = BTreeMap::new();
        m.insert(Var::from("x"), Var::from("y"));
        m.insert(Var::from("y"), Var::from("x"));
        assert_eq!(rename_free(&p("R(x,y)"), &m), p("R(y,x)"));
        // binder y must be renamed: its body mentions x which becomes y
        let out = rename_free(&p("ex y. R(x,y)"), &m);
        assert!(alpha_equal(&out, &p("ex z. R(y,z)")));
    }
}
