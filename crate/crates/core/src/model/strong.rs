use rayon::prelude::*;

use super::eval::{rel_table, Compiled, Frame};
use super::quotient::check_equivalence;
use super::relation::{subsets_canonical, Relation};
use super::structure::FiniteStructure;
use crate::caps::{ensure, Caps};
use crate::error::{Error, Result};
use crate::scheme::Scheme;

/// Classes of `eq` (absolute equality when `None`), each sorted, ordered by
/// least member.
pub fn eq_classes(m: &FiniteStructure, eq: Option<&Relation>) -> Vec<Vec<usize>> {
    let n = m.size();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let class: Vec<usize> = (a..n).filter(|&b| eq.map_or(a == b, |r| r.contains(&[a, b]))).collect();
        class.iter().for_each(|&b| seen[b] = true);
        out.push(class);
    }
    out
}

/// The relation named by `eq_symbol`, checked to be an equivalence.
pub fn equality_of<'m>(m: &'m FiniteStructure, eq_symbol: Option<&str>) -> Result<Option<&'m Relation>> {
    let Some(symbol) = eq_symbol else { return Ok(None) };
    let rel = m.relation(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.to_owned()))?;
    if rel.arity() != 2 {
        return Err(Error::ArityMismatch {
            symbol: symbol.to_owned(),
            expected: 2,
            found: rel.arity(),
        });
    }
    check_equivalence(m, rel, m.elements())?;
    Ok(Some(rel))
}

/// Every `eq`-invariant subset of the universe in canonical order: by size,
/// then lexicographically on sorted elements.
pub fn invariant_subsets(m: &FiniteStructure, eq: Option<&Relation>, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    let classes = eq_classes(m, eq);
    ensure(classes.len() <= caps.max_classes, || {
        format!("{} equality classes exceed the cap of {}", classes.len(), caps.max_classes)
    })?;
    let ids: Vec<usize> = (0..classes.len()).collect();
    let mut sets: Vec<Vec<usize>> = subsets_canonical(&ids)
        .into_iter()
        .map(|pick| {
            let mut s: Vec<usize> = pick.iter().flat_map(|&c| classes[c].iter().copied()).collect();
            s.sort_unstable();
            s
        })
        .collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(sets)
}

fn check_subsets(
    m: &FiniteStructure,
    eq: Option<&Relation>,
    tau: &Scheme,
    subsets: Vec<Vec<usize>>,
) -> Result<Option<Vec<usize>>> {
    if !tau.sig().is_subset_of(m.signature()) {
        return Err(Error::SignatureMismatch(format!(
            "scheme over {} does not fit a structure over {}",
            tau.sig(),
            m.signature()
        )));
    }
    let body = Compiled::new(m.signature(), tau.body(), &[], true)?;
    let rels = rel_table(m);
    Ok(subsets.into_par_iter().find_first(|y| {
        let mut mask = vec![false; m.size()];
        y.iter().for_each(|&e| mask[e] = true);
        let frame = Frame::new(m.elements(), &rels).with_eq(eq).with_pred(Some(&mask));
        !body.eval(&frame, &[])
    }))
}

/// `None` when `(m, Y)` satisfies the scheme for every invariant `Y`;
/// otherwise the first failing `Y`.
pub fn strong_model_check(
    m: &FiniteStructure,
    eq_symbol: Option<&str>,
    tau: &Scheme,
    caps: &Caps,
) -> Result<Option<Vec<usize>>> {
    let eq = equality_of(m, eq_symbol)?;
    check_subsets(m, eq, tau, invariant_subsets(m, eq, caps)?)
}

/// As [`strong_model_check`] with `Y` ranging over the invariant members of
/// `candidates`, in the order given.
pub fn strong_model_check_among(
    m: &FiniteStructure,
    eq_symbol: Option<&str>,
    tau: &Scheme,
    candidates: &[Vec<usize>],
) -> Result<Option<Vec<usize>>> {
    let eq = equality_of(m, eq_symbol)?;
    let invariant = candidates
        .iter()
        .filter(|y| {
            y.iter().all(|&a| (0..m.size()).all(|b| !eq.map_or(a == b, |r| r.contains(&[a, b])) || y.contains(&b)))
        })
        .cloned()
        .collect();
    check_subsets(m, eq, tau, invariant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::build_ind;
    use crate::syntax::Signature;

    fn cycles(sizes: &[usize], total_eq: bool) -> FiniteStructure {
        let mut names = Vec::new();
        let mut succ = Vec::new();
        for (c, &k) in sizes.iter().enumerate() {
            for i in 0..k {
                names.push(format!("c{c}_{i}"));
                succ.push(vec![format!("c{c}_{i}"), format!("c{c}_{}", (i + 1) % k)]);
            }
        }
        let mut sig = build_ind().sig().clone();
        if total_eq {
            sig = sig.with("E", 2).unwrap();
        }
        let n: Vec<&str> = names.iter().map(String::as_str).collect();
        let s: Vec<Vec<&str>> = succ.iter().map(|t| t.iter().map(String::as_str).collect()).collect();
        let s: Vec<&[&str]> = s.iter().map(Vec::as_slice).collect();
        let all: Vec<[&str; 2]> = n.iter().flat_map(|a| n.iter().map(move |b| [*a, *b])).collect();
        let all: Vec<&[&str]> = all.iter().map(|t| t.as_slice()).collect();
        let mut rels: Vec<(&str, &[&[&str]])> = vec![("Zero", &[&["c0_0"]]), ("Succ", &s)];
        if total_eq {
            rels.push(("E", &all));
        }
        FiniteStructure::from_named(sig, &n, &rels).unwrap()
    }

    #[test]
    fn induction_on_cycles() {
        let caps = Caps::default();
        assert_eq!(strong_model_check(&cycles(&[3], false), None, &build_ind(), &caps).unwrap(), None);
        let two = cycles(&[3, 3], false);
        assert_eq!(strong_model_check(&two, None, &build_ind(), &caps).unwrap(), Some(vec![0, 1, 2]));
        let total = cycles(&[3, 3], true);
        assert_eq!(invariant_subsets(&total, equality_of(&total, Some("E")).unwrap(), &caps).unwrap().len(), 2);
        assert_eq!(strong_model_check(&total, Some("E"), &build_ind(), &caps).unwrap(), None);
    }

    #[test]
    fn caps_and_signatures() {
        let small = Caps {
            max_classes: 2,
            ..Caps::default()
        };
        assert!(matches!(
            strong_model_check(&cycles(&[3], false), None, &build_ind(), &small),
            Err(Error::CapExceeded(_))
        ));
        let other = FiniteStructure::from_named(Signature::of(&[("Leq", 2)]), &["a"], &[]).unwrap();
        assert!(strong_model_check(&other, None, &build_ind(), &Caps::default()).is_err());
    }
}
