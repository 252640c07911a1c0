use rayon::prelude::*;
use serde::Serialize;

use super::strong::x_strong_models;
use super::witness::{find_witness, WitnessSide};
use super::{Counterexample, ModelTuple, SOStructure, Verdict};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{Compiled, Relation};
use crate::scheme::{mk_definiteness_statement, DefinitenessKind, Goal, Guard, Scheme};
use crate::syntax::{print, Formula};

/// The part of a strong model carved out by a height formula, with the order
/// given by the scheme's first binary symbol.
struct Height {
    dom: Vec<usize>,
    order: Relation,
}

fn height(m: &ModelTuple, tau: &Scheme, ord: &Formula) -> Result<Height> {
    let symbol = tau
        .sig()
        .symbols()
        .find(|&(_, a)| a == 2)
        .map(|(s, _)| s.to_owned())
        .ok_or_else(|| Error::HeightIllFormed(format!("no binary symbol in {} to order by", tau.sig())))?;
    let c = Compiled::of(tau.sig(), ord, false)?;
    let rels = m.rel_table();
    let frame = m.frame(&rels);
    let dom: Vec<usize> = m.dom.iter().copied().filter(|&e| c.eval(&frame, &[e])).collect();
    let r = &m.rels[&symbol];
    let eq = |a: usize, b: usize| m.eq.contains(&[a, b]);
    for &a in &dom {
        for &b in &dom {
            let (ab, ba) = (r.contains(&[a, b]), r.contains(&[b, a]));
            if !eq(a, b) && !ab && !ba {
                return Err(Error::HeightIllFormed(format!("{symbol} does not compare elements {a} and {b}")));
            }
            if ab && ba && !eq(a, b) {
                return Err(Error::HeightIllFormed(format!("{symbol} is not antisymmetric at {a}, {b}")));
            }
            if ab && dom.iter().any(|&c| r.contains(&[b, c]) && !r.contains(&[a, c])) {
                return Err(Error::HeightIllFormed(format!("{symbol} is not transitive from {a} via {b}")));
            }
        }
    }
    Ok(Height { dom, order: r.clone() })
}

fn iso_witness(so: &SOStructure, a: &ModelTuple, b: &ModelTuple, caps: &Caps) -> Result<Option<Relation>> {
    let (ra, rb) = (a.rel_table(), b.rel_table());
    let sa = WitnessSide { dom: &a.dom, eq: &a.eq, rels: &ra };
    let sb = WitnessSide { dom: &b.dom, eq: &b.eq, rels: &rb };
    find_witness(&so.classes, so.ground.size(), &sa, &sb, caps)
}

/// Scans ordered pairs of strong models for one where every guard finds a
/// witness but the goal fails.
pub fn check_definite(so: &SOStructure, tau: &Scheme, kind: &DefinitenessKind, caps: &Caps) -> Result<Verdict> {
    let plan = mk_definiteness_statement(tau, kind)?;
    let models = x_strong_models(so, tau, caps)?;
    if models.is_empty() {
        return Ok(Verdict::pass(true, None));
    }
    let heights: Vec<Vec<Height>> = models
        .iter()
        .map(|m| {
            plan.guards
                .iter()
                .filter_map(|g| match g {
                    Guard::OrdIso(ord) => Some(height(m, tau, ord)),
                    Guard::Bijection => None,
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let eeq: Option<Vec<bool>> = match &plan.goal {
        Goal::Eeq(alpha) => Some(models.iter().map(|m| m.satisfies(tau.sig(), alpha)).collect::<Result<_>>()?),
        Goal::Iso => None,
    };
    let n = models.len();
    let size = so.ground.size();

    let pair_fails = |i: usize, j: usize| -> Result<bool> {
        let (a, b) = (&models[i], &models[j]);
        let mut h = 0;
        for g in &plan.guards {
            let found = match g {
                Guard::Bijection => {
                    let sa = WitnessSide { dom: &a.dom, eq: &a.eq, rels: &[] };
                    let sb = WitnessSide { dom: &b.dom, eq: &b.eq, rels: &[] };
                    find_witness(&so.classes, size, &sa, &sb, caps)?
                }
                Guard::OrdIso(_) => {
                    let (ha, hb) = (&heights[i][h], &heights[j][h]);
                    h += 1;
                    let (oa, ob) = ([&ha.order], [&hb.order]);
                    let sa = WitnessSide { dom: &ha.dom, eq: &a.eq, rels: &oa };
                    let sb = WitnessSide { dom: &hb.dom, eq: &b.eq, rels: &ob };
                    find_witness(&so.classes, size, &sa, &sb, caps)?
                }
            };
            if found.is_none() {
                return Ok(false);
            }
        }
        Ok(match &eeq {
            Some(v) => v[i] != v[j],
            None => iso_witness(so, a, b, caps)?.is_none(),
        })
    };

    let first = (0..n * n)
        .into_par_iter()
        .map(|p| pair_fails(p / n, p % n).map(|bad| bad.then_some(p)))
        .find_first(|r| !matches!(r, Ok(None)));
    match first {
        None => Ok(Verdict::pass(plan.vacuous, None)),
        Some(Err(e)) => Err(e),
        Some(Ok(p)) => {
            let p = p.expect("filtered");
            let tag = match &plan.goal {
                Goal::Iso => "goal:iso".to_owned(),
                Goal::Eeq(a) => format!("goal:eeq {}", print(a)),
            };
            Ok(Verdict::fail(Counterexample::Pair {
                left: models[p / n].clone(),
                right: models[p % n].clone(),
                tag,
            }))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub models: usize,
    pub comparisons: usize,
    pub violation_count: usize,
    /// The first few violations, in scan order.
    pub violations: Vec<String>,
}

const SHOWN: usize = 10;

/// For every pair of strong models and every replacement of one side by an
/// isomorphic strong model (isomorphic via a class), checks the goal value is
/// unchanged.
pub fn check_goal_invariance<G>(so: &SOStructure, tau: &Scheme, goal: G, caps: &Caps) -> Result<InvarianceReport>
where
    G: Fn(&ModelTuple, &ModelTuple) -> Result<bool> + Sync,
{
    let models = x_strong_models(so, tau, caps)?;
    let n = models.len();
    let iso: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|p| Ok(p / n == p % n || iso_witness(so, &models[p / n], &models[p % n], caps)?.is_some()))
        .collect::<Result<_>>()?;
    let value: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|p| goal(&models[p / n], &models[p % n]))
        .collect::<Result<_>>()?;
    let show = |i: usize| serde_json::to_string(&models[i].to_value(&so.ground)).expect("serializes");
    let mut report = InvarianceReport {
        models: n,
        comparisons: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    for i in 0..n {
        for j in 0..n {
            let lefts = (0..n).filter(|&k| k != i && iso[i * n + k]).map(|k| (k, j));
            let rights = (0..n).filter(|&k| k != j && iso[j * n + k]).map(|k| (i, k));
            for (a, b) in lefts.chain(rights) {
                report.comparisons += 1;
                if value[i * n + j] != value[a * n + b] {
                    report.violation_count += 1;
                    if report.violations.len() < SHOWN {
                        report.violations.push(format!(
                            "goal is {} on ({}, {}) but {} on ({}, {})",
                            value[i * n + j],
                            show(i),
                            show(j),
                            value[a * n + b],
                            show(a),
                            show(b)
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// [`check_goal_invariance`] for the goal of a definiteness kind.
pub fn check_iso_statement_invariance(
    so: &SOStructure,
    tau: &Scheme,
    kind: &DefinitenessKind,
    caps: &Caps,
) -> Result<InvarianceReport> {
    let plan = mk_definiteness_statement(tau, kind)?;
    match &plan.goal {
        Goal::Iso => check_goal_invariance(so, tau, |a, b| Ok(iso_witness(so, a, b, caps)?.is_some()), caps),
        Goal::Eeq(alpha) => check_goal_invariance(
            so,
            tau,
            |a, b| Ok(a.satisfies(tau.sig(), alpha)? == b.satisfies(tau.sig(), alpha)?),
            caps,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::ClassFamily;
    use crate::model::FiniteStructure;
    use crate::scheme::build_cycle;
    use crate::syntax::{parse_untyped, Signature};
    use std::collections::BTreeMap;

    fn so(n: usize) -> SOStructure {
        let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let g = FiniteStructure::new(Signature::default(), names, BTreeMap::new()).unwrap();
        SOStructure::new(g, ClassFamily::Full(2), &Caps::default()).unwrap()
    }

    fn pair(v: &Verdict) -> (&ModelTuple, &ModelTuple) {
        match &v.counterexample {
            Some(Counterexample::Pair { left, right, .. }) => (left, right),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cycle_scheme_on_three_set() {
        let caps = Caps::default();
        let so = so(3);
        let tau = build_cycle();
        let iso = check_definite(&so, &tau, &DefinitenessKind::Iso, &caps).unwrap();
        assert!(!iso.holds);
        let (l, r) = pair(&iso);
        assert_eq!((l.dom.len(), r.dom.len()), (1, 2));
        let iec = DefinitenessKind::InEveryCardinality(Box::new(DefinitenessKind::Iso));
        assert!(check_definite(&so, &tau, &iec, &caps).unwrap().holds);
        let loops = DefinitenessKind::Eeq(parse_untyped("ex x. Succ(x,x)").unwrap().0);
        let v = check_definite(&so, &tau, &loops, &caps).unwrap();
        assert!(!v.holds);
        assert_eq!(pair(&v).1.dom, vec![0, 1]);
    }

    #[test]
    fn empty_model_list_is_vacuous() {
        let caps = Caps::default();
        let tau = Scheme::parse(Signature::default(), "false").unwrap();
        let v = check_definite(&so(2), &tau, &DefinitenessKind::Iso, &caps).unwrap();
        assert!(v.holds && v.vacuous);
    }

    #[test]
    fn invariance_of_closed_and_open_goals() {
        let caps = Caps::default();
        let so = so(3);
        let tau = build_cycle();
        let iso = check_iso_statement_invariance(&so, &tau, &DefinitenessKind::Iso, &caps).unwrap();
        assert_eq!(iso.violation_count, 0);
        assert!(iso.comparisons > 0);
        let raw = check_goal_invariance(&so, &tau, |a, b| Ok(a.dom == b.dom), &caps).unwrap();
        assert!(raw.violation_count > 0);
    }
}
