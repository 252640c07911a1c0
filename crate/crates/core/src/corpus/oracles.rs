//! Reference computations that share no search code with the engines they
//! check.

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::Result;
use crate::lab::{ModelTuple, SOStructure};
use crate::model::{all_tuples, check_congruence, check_equivalence, strong_model_check_among, FiniteStructure, Relation};
use crate::scheme::Scheme;

fn atomic_type(m: &FiniteStructure, t: &[usize]) -> Vec<bool> {
    let j = t.len();
    let mut out = Vec::new();
    for p in 0..j {
        for q in 0..j {
            out.push(t[p] == t[q]);
        }
    }
    for (name, arity) in m.signature().symbols() {
        let r = m.relation(name).expect("covers signature");
        for idx in all_tuples(j, arity).expect("small") {
            let args: Vec<usize> = idx.iter().map(|&i| t[i]).collect();
            out.push(r.contains(&args));
        }
    }
    out
}

/// Classes of `j`-tuples (over the disjoint union of `ms`) under agreement on
/// every formula of quantifier rank at most `r` in `j` free variables.
///
/// Formulas are taken up to Boolean combination: a class at rank `r + 1` is
/// cut out by the atomic diagram together with the sets `ex y. C` for classes
/// `C` of `(j + 1)`-tuples at rank `r`, since `ex` distributes over `|`.
/// Returns a class id per side and per tuple in lexicographic order.
pub fn rank_classes(ms: &[&FiniteStructure], j: usize, r: usize) -> Vec<Vec<usize>> {
    let next = (r > 0).then(|| rank_classes(ms, j + 1, r - 1));
    let mut ids: BTreeMap<(Vec<bool>, Vec<usize>), usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(ms.len());
    for (s, m) in ms.iter().enumerate() {
        let n = m.size();
        let mut side = Vec::new();
        for t in all_tuples(n, j).expect("small") {
            let mut reach = Vec::new();
            if let Some(next) = &next {
                let base = t.iter().fold(0, |acc, &e| acc * n + e);
                reach = (0..n).map(|b| next[s][base * n + b]).collect();
                reach.sort_unstable();
                reach.dedup();
            }
            let key = (atomic_type(m, &t), reach);
            let fresh = ids.len();
            side.push(*ids.entry(key).or_insert(fresh));
        }
        out.push(side);
    }
    out
}

/// Whether two structures satisfy the same sentences of rank at most `k`.
pub fn agree_up_to_rank(m1: &FiniteStructure, m2: &FiniteStructure, k: usize) -> bool {
    let c = rank_classes(&[m1, m2], 0, k);
    c[0][0] == c[1][0]
}

/// Subsets of the universe defined by some formula in one free variable of
/// rank at most `rank`, in canonical order.
pub fn definable_subsets(m: &FiniteStructure, rank: usize) -> Vec<Relation> {
    let cells = &rank_classes(&[m], 1, rank)[0];
    let mut distinct: Vec<usize> = cells.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut out: Vec<Relation> = (0..1usize << distinct.len())
        .map(|pick| {
            let mask: Vec<bool> = cells
                .iter()
                .map(|c| pick >> distinct.binary_search(c).expect("listed") & 1 == 1)
                .collect();
            Relation::from_mask(&mask)
        })
        .collect();
    out.sort_by(Relation::canonical_cmp);
    out
}

/// Finite linear orders of sizes `m` and `n` are indistinguishable in `k`
/// rounds iff they are equal or both have at least `2^k - 1` elements.
pub fn linear_order_law(m: usize, n: usize, k: u32) -> bool {
    m == n || m.min(n) + 1 >= 1 << k
}

fn eq_symbol(tau: &Scheme) -> String {
    (0..)
        .map(|i| if i == 0 { "Eq".to_owned() } else { format!("Eq{i}") })
        .find(|s| !tau.sig().contains(s))
        .expect("a free name")
}

/// Strong models by brute force: every tuple of classes is materialized as a
/// standalone structure and handed to the strong-model checker, with `Y`
/// ranging over the unary classes inside the domain.
pub fn x_strong_models_naive(so: &SOStructure, tau: &Scheme, caps: &Caps) -> Result<Vec<ModelTuple>> {
    let n = so.ground.size();
    let sym = eq_symbol(tau);
    let unary = so.classes.members(1, n, caps)?;
    let binary = so.classes.members(2, n, caps)?;
    let symbols: Vec<(String, usize)> = tau.sig().symbols().map(|(s, a)| (s.to_owned(), a)).collect();
    let mut pools = Vec::new();
    for (_, arity) in &symbols {
        pools.push(so.classes.members(*arity, n, caps)?);
    }
    let mut out = Vec::new();
    for dom_rel in &unary {
        let dom = dom_rel.elements();
        if dom.is_empty() {
            continue;
        }
        let mut inside = vec![false; n];
        dom.iter().for_each(|&e| inside[e] = true);
        let pos: BTreeMap<usize, usize> = dom.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let ys: Vec<Vec<usize>> = unary
            .iter()
            .filter(|y| y.within(&inside))
            .map(|y| y.elements().iter().map(|e| pos[e]).collect())
            .collect();
        let local: Vec<Vec<&Relation>> = pools.iter().map(|p| p.iter().filter(|r| r.within(&inside)).collect()).collect();
        for eq in binary.iter().filter(|r| r.within(&inside)) {
            let probe = ModelTuple {
                dom: dom.clone(),
                eq: eq.clone(),
                rels: BTreeMap::new(),
            }
            .materialize(&so.ground, &Default::default(), &sym)?;
            if check_equivalence(&probe, probe.relation(&sym).unwrap(), probe.elements()).is_err() {
                continue;
            }
            let total: usize = local.iter().map(Vec::len).product();
            for mut idx in 0..total {
                let mut rels = BTreeMap::new();
                for ((name, _), pool) in symbols.iter().zip(&local).rev() {
                    rels.insert(name.clone(), pool[idx % pool.len()].clone());
                    idx /= pool.len();
                }
                let tuple = ModelTuple {
                    dom: dom.clone(),
                    eq: eq.clone(),
                    rels,
                };
                let m = tuple.materialize(&so.ground, tau.sig(), &sym)?;
                let eqm = m.relation(&sym).unwrap();
                let congruent = symbols
                    .iter()
                    .all(|(name, _)| check_congruence(&m, name, m.relation(name).unwrap(), eqm).is_ok());
                if congruent && strong_model_check_among(&m, Some(&sym), tau, &ys)?.is_none() {
                    out.push(tuple);
                }
            }
        }
    }
    Ok(out)
}
