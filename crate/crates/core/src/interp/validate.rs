use serde::Serialize;

use super::{delta_var, Translation};
use crate::error::Result;
use crate::model::{all_tuples, carve, check_target, eta_vars, rel_table, rel_vars, Compiled, FiniteStructure, Frame};
use crate::syntax::Var;

/// Semantic side conditions of a translation in one target model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Number of δ-tuples.
    pub domain_size: usize,
    /// Warning only: nothing satisfies δ.
    pub empty_domain: bool,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn show(m: &FiniteStructure, t: &[usize]) -> String {
    t.iter().map(|&e| m.name(e)).collect::<Vec<_>>().join(",")
}

pub fn validate_on_model(t: &Translation, m: &FiniteStructure) -> Result<ValidationReport> {
    check_target(m, t)?;
    let n = t.dim();
    let sig = m.signature();
    let rels = rel_table(m);
    let frame = Frame::new(m.elements(), &rels);
    let delta = Compiled::new(sig, t.delta(), &(1..=n).map(delta_var).collect::<Vec<Var>>(), false)?;
    let everything = all_tuples(m.size(), n)?;
    let in_dom: Vec<bool> = everything.iter().map(|x| delta.eval(&frame, x)).collect();
    let mut violations = Vec::new();

    let eta = Compiled::new(sig, t.eta(), &eta_vars(n), false)?;
    'eta: for (i, a) in everything.iter().enumerate() {
        for (j, b) in everything.iter().enumerate() {
            if (!in_dom[i] || !in_dom[j]) && eta.eval(&frame, &[a.as_slice(), b.as_slice()].concat()) {
                violations.push(format!("eta holds of ({}), ({}) outside the domain", show(m, a), show(m, b)));
                break 'eta;
            }
        }
    }

    for (name, arity) in t.source().symbols() {
        let phi = Compiled::new(sig, t.relation(name).expect("covers source"), &rel_vars(n, arity), false)?;
        let outside = all_tuples(everything.len(), arity)?.into_iter().find(|pos| {
            pos.iter().any(|&p| !in_dom[p]) && {
                let values: Vec<usize> = pos.iter().flat_map(|&p| everything[p].iter().copied()).collect();
                phi.eval(&frame, &values)
            }
        });
        if let Some(pos) = outside {
            let args: Vec<String> = pos.iter().map(|&p| format!("({})", show(m, &everything[p]))).collect();
            violations.push(format!("{name} holds of {} outside the domain", args.join(", ")));
        }
    }

    let carved = carve(m, t)?;
    let d = carved.tuples.len();
    let named = |i: usize| format!("({})", show(m, &carved.tuples[i]));
    let e = &carved.eta;
    if let Some(a) = (0..d).find(|&a| !e.contains(&[a, a])) {
        violations.push(format!("eta is not reflexive at {}", named(a)));
    }
    if let Some(t) = e.tuples().into_iter().find(|t| !e.contains(&[t[1], t[0]])) {
        violations.push(format!("eta is not symmetric at {}, {}", named(t[0]), named(t[1])));
    }
    let transitivity = e
        .tuples()
        .into_iter()
        .find_map(|t| (0..d).find(|&c| e.contains(&[t[1], c]) && !e.contains(&[t[0], c])).map(|c| (t, c)));
    if let Some((t, c)) = transitivity {
        violations.push(format!(
            "eta is not transitive at {}, {}, {}",
            named(t[0]),
            named(t[1]),
            named(c)
        ));
    }
    for (name, rel) in &carved.rels {
        'rel: for tuple in rel.tuples() {
            for pos in 0..tuple.len() {
                for b in (0..d).filter(|&b| b != tuple[pos] && e.contains(&[tuple[pos], b])) {
                    let mut u = tuple.clone();
                    u[pos] = b;
                    if !rel.contains(&u) {
                        let list = |v: &[usize]| v.iter().map(|&i| named(i)).collect::<Vec<_>>().join(", ");
                        violations.push(format!(
                            "{name} is not eta-invariant: holds of {} but not of {}",
                            list(&tuple),
                            list(&u)
                        ));
                        break 'rel;
                    }
                }
            }
        }
    }

    Ok(ValidationReport {
        domain_size: d,
        empty_domain: d == 0,
        violations,
    })
}
