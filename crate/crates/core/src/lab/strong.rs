use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{ModelTuple, SOStructure};
use crate::caps::{ensure, Caps};
use crate::error::{Error, Result};
use crate::model::{Compiled, Relation};
use crate::scheme::Scheme;

pub(crate) fn is_equivalence_on(eq: &Relation, dom: &[usize]) -> bool {
    dom.iter().all(|&a| eq.contains(&[a, a]))
        && eq.tuples().iter().all(|t| {
            eq.contains(&[t[1], t[0]]) && (0..eq.size()).all(|c| !eq.contains(&[t[1], c]) || eq.contains(&[t[0], c]))
        })
}

pub(crate) fn is_congruence(r: &Relation, eq: &Relation) -> bool {
    r.tuples().into_iter().all(|t| {
        (0..t.len()).all(|pos| {
            (0..r.size()).filter(|&b| eq.contains(&[t[pos], b])).all(|b| {
                let mut u = t.clone();
                u[pos] = b;
                r.contains(&u)
            })
        })
    })
}

pub(crate) fn is_invariant(y: &Relation, eq: &Relation) -> bool {
    y.indices().all(|a| (0..y.size()).all(|b| !eq.contains(&[a, b]) || y.contains(&[b])))
}

pub(crate) fn check_arities(so: &SOStructure, tau: &Scheme) -> Result<()> {
    let need = tau.sig().symbols().map(|(_, a)| a).max().unwrap_or(0).max(2);
    if so.classes.max_arity() < need {
        return Err(Error::SignatureMismatch(format!(
            "classes reach arity {}, the scheme over {} needs {need}",
            so.classes.max_arity(),
            tau.sig()
        )));
    }
    Ok(())
}

/// All `Y`-strong models of `tau` assembled from the classes: nonempty `dom`,
/// `eq` an equivalence on `dom` respected by every relation, and every
/// `eq`-invariant unary class inside `dom` satisfying the scheme body.
/// Ordered by `dom`, then `eq`, then relations in symbol order.
pub fn x_strong_models(so: &SOStructure, tau: &Scheme, caps: &Caps) -> Result<Vec<ModelTuple>> {
    check_arities(so, tau)?;
    let n = so.ground.size();
    let body = Compiled::new(tau.sig(), tau.body(), &[], true)?;
    let symbols: Vec<(String, usize)> = tau.sig().symbols().map(|(s, a)| (s.to_owned(), a)).collect();
    let mut out = Vec::new();
    for dom_rel in so.classes.members(1, n, caps)? {
        let dom = dom_rel.elements();
        if dom.is_empty() {
            continue;
        }
        let ys_all = so.classes.members_within(1, n, &dom, caps)?;
        let mut pools = Vec::with_capacity(symbols.len());
        for (_, arity) in &symbols {
            pools.push(so.classes.members_within(*arity, n, &dom, caps)?);
        }
        for eq in so.classes.members_within(2, n, &dom, caps)? {
            if !is_equivalence_on(&eq, &dom) {
                continue;
            }
            let ys: Vec<Vec<bool>> = ys_all
                .iter()
                .filter(|y| is_invariant(y, &eq))
                .map(|y| y.bits().to_vec())
                .collect();
            let cands: Vec<Vec<&Relation>> = pools
                .iter()
                .map(|p| p.iter().filter(|r| is_congruence(r, &eq)).collect())
                .collect();
            let total = cands.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
            ensure(total.is_some_and(|t| t <= caps.max_full), || {
                format!("relation combinations on one domain exceed the cap of {}", caps.max_full)
            })?;
            let found: Vec<ModelTuple> = (0..total.unwrap_or(0))
                .into_par_iter()
                .filter_map(|mut idx| {
                    let mut pick = vec![None; cands.len()];
                    for (slot, c) in pick.iter_mut().zip(&cands).rev() {
                        *slot = Some(c[idx % c.len()]);
                        idx /= c.len();
                    }
                    let table: Vec<&Relation> = pick.into_iter().map(Option::unwrap).collect();
                    let ok = ys.iter().all(|y| {
                        let frame = crate::model::Frame::new(&dom, &table).with_eq(Some(&eq)).with_pred(Some(y));
                        body.eval(&frame, &[])
                    });
                    ok.then(|| ModelTuple {
                        dom: dom.clone(),
                        eq: eq.clone(),
                        rels: symbols.iter().map(|(s, _)| s.clone()).zip(table.into_iter().cloned()).collect::<BTreeMap<_, _>>(),
                    })
                })
                .collect();
            out.extend(found);
        }
    }
    Ok(out)
}
