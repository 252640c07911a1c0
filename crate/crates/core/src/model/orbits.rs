use super::iso::find_isomorphism_extending;
use super::relation::{subsets_canonical, table_len, Relation};
use super::structure::FiniteStructure;
use crate::caps::{ensure, Caps};
use crate::error::{Error, Result};

/// Orbits of `Aut(m)` on `arity`-tuples, as sorted lists of table indices,
/// ordered by least member.
///
/// Automorphisms are found on demand: each one discovered merges every tuple
/// with its image, so only genuinely new orbit representatives cost a search.
pub fn tuple_orbits(m: &FiniteStructure, arity: usize, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    if arity == 0 {
        return Err(Error::InvalidArity);
    }
    let n = m.size();
    let len = table_len(arity, n).unwrap_or(usize::MAX);
    ensure(len <= caps.max_tuples, || {
        format!("{n}^{arity} tuples exceed the limit of {}", caps.max_tuples)
    })?;
    let shape = Relation::empty(arity, n)?;
    let mut parent: Vec<usize> = (0..len).collect();
    let mut reps: Vec<usize> = Vec::new();

    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    for u in 0..len {
        let ru = root(&mut parent, u);
        if reps.iter().any(|&r| root(&mut parent, r) == ru) {
            continue;
        }
        let target = shape.decode(u);
        let mut merged = false;
        for &r in &reps {
            let source = shape.decode(r);
            let pairs: Vec<(usize, usize)> = source.iter().copied().zip(target.iter().copied()).collect();
            if let Some(g) = find_isomorphism_extending(m, m, &pairs) {
                for t in 0..len {
                    let img: Vec<usize> = shape.decode(t).iter().map(|&e| g[e]).collect();
                    let (a, b) = (root(&mut parent, t), root(&mut parent, shape.index(&img)));
                    if a != b {
                        // keep the smaller index as root so representatives stay minimal
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi] = lo;
                    }
                }
                merged = true;
                break;
            }
        }
        if !merged {
            reps.push(u);
            ensure(reps.len() <= caps.max_orbits, || {
                format!("more than {} orbits on {arity}-tuples", caps.max_orbits)
            })?;
        }
    }
    let mut orbits: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
    for t in 0..len {
        let r = root(&mut parent, t);
        let k = reps
            .iter()
            .position(|&x| root(&mut parent, x) == r)
            .expect("every tuple joins a representative");
        orbits[k].push(t);
    }
    orbits.sort();
    Ok(orbits)
}

/// Every union of orbits on `arity`-tuples, in canonical order.
///
/// On a finite structure these are exactly the parameter-free definable
/// relations of that arity.
pub fn invariant_relations(m: &FiniteStructure, arity: usize, caps: &Caps) -> Result<Vec<Relation>> {
    let orbits = tuple_orbits(m, arity, caps)?;
    let picks: Vec<usize> = (0..orbits.len()).collect();
    let mut out: Vec<Relation> = subsets_canonical(&picks)
        .into_iter()
        .map(|sel| {
            let mut r = Relation::empty(arity, m.size()).expect("checked above");
            for o in sel {
                for &t in &orbits[o] {
                    r.set_index(t, true);
                }
            }
            r
        })
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// Whether `rel` is a union of the given orbits.
pub fn is_union_of(rel: &Relation, orbits: &[Vec<usize>]) -> bool {
    orbits.iter().all(|o| {
        let inside = rel.contains_index(o[0]);
        o.iter().all(|&t| rel.contains_index(t) == inside)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;
    use std::collections::BTreeMap;

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c", "d", "e"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pure_set_has_two_unary_invariants() {
        let m = FiniteStructure::new(Signature::default(), names(3), BTreeMap::new()).unwrap();
        let inv = invariant_relations(&m, 1, &Caps::default()).unwrap();
        assert_eq!(inv.len(), 2);
        assert!(inv[0].is_empty());
        assert_eq!(inv[1].len(), 3);
        assert_eq!(tuple_orbits(&m, 2, &Caps::default()).unwrap().len(), 2);
    }

    #[test]
    fn colour_splits_the_set() {
        let m = FiniteStructure::from_named(Signature::of(&[("Color", 1)]), &["a", "b", "c"], &[("Color", &[&["a"]])])
            .unwrap();
        let inv: Vec<Vec<usize>> = invariant_relations(&m, 1, &Caps::default())
            .unwrap()
            .iter()
            .map(|r| r.elements())
            .collect();
        assert_eq!(inv, vec![vec![], vec![0], vec![1, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn caps_fail_loudly() {
        let m = FiniteStructure::new(Signature::default(), names(5), BTreeMap::new()).unwrap();
        let tight = Caps {
            max_tuples: 10,
            ..Caps::default()
        };
        assert!(matches!(tuple_orbits(&m, 2, &tight), Err(Error::CapExceeded(_))));
        assert_eq!(tuple_orbits(&m, 0, &tight), Err(Error::InvalidArity));
    }
}
