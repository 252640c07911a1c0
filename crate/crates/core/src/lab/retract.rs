use std::collections::BTreeMap;

use super::{Counterexample, SOStructure, Verdict};
use crate::error::{Error, Result};
use crate::interp::{compose, iso_conditions, rel_var, star_var, validate_on_model, Translation};
use crate::model::{all_tuples, eval, rel_table, Assignment, Compiled, Frame, Relation};
use crate::syntax::{print, rename_free, Formula, Var};

fn ensure_valid(t: &Translation, so: &SOStructure, what: &str) -> Result<()> {
    let report = validate_on_model(t, &so.ground)?;
    if report.is_clean() {
        Ok(())
    } else {
        Err(Error::IllFormed(format!("{what} is not valid on the ground: {}", report.violations.join("; "))))
    }
}

/// Checks that `f_witness(x, v1_1, ..., v1_n)` defines an isomorphism from
/// the ground onto the internal model of `t` after `s_tr`, and that the
/// relation it defines is a class.
pub fn check_retract(so: &SOStructure, t: &Translation, s_tr: &Translation, f_witness: &Formula) -> Result<Verdict> {
    let composite = compose(t, s_tr)?;
    ensure_valid(t, so, "the outer translation")?;
    ensure_valid(&composite, so, "the composite translation")?;
    let sig = so.ground.signature();
    let n = composite.dim();
    let x = Var::from("x");
    let coords: Vec<Var> = (1..=n).map(|j| rel_var(1, j)).collect();
    let mut free = vec![x.clone()];
    free.extend(coords.iter().cloned());
    if let Some(v) = f_witness.free_vars().into_iter().find(|v| !free.contains(v)) {
        return Err(Error::ArityMismatch {
            symbol: format!("witness (free `{v}`)"),
            expected: n + 1,
            found: f_witness.free_vars().len(),
        });
    }
    let to_iota: BTreeMap<Var, Var> = std::iter::once((x, Var::from("x1")))
        .chain(coords.iter().cloned().zip((1..=n).map(star_var)))
        .collect();
    let iota = rename_free(f_witness, &to_iota);
    let conditions = iso_conditions(&Translation::identity(sig), &composite, &iota)?;
    for (i, c) in conditions.iter().enumerate() {
        if !eval(&so.ground, c, &Assignment::new())? {
            return Ok(Verdict::fail(Counterexample::Condition {
                tag: format!("condition {}", i + 1),
                detail: print(c),
            }));
        }
    }

    let c = Compiled::new(sig, f_witness, &free, false)?;
    let rels = rel_table(&so.ground);
    let frame = Frame::new(so.ground.elements(), &rels);
    let defined = Relation::from_tuples(
        n + 1,
        so.ground.size(),
        all_tuples(so.ground.size(), n + 1)?.into_iter().filter(|v| c.eval(&frame, v)),
    )?;
    if !so.classes.contains(&defined) {
        return Ok(Verdict::fail(Counterexample::Condition {
            tag: "membership".into(),
            detail: format!("the relation defined by {} is not a class", print(f_witness)),
        }));
    }
    Ok(Verdict::pass(false, Some(defined)))
}
