use std::collections::BTreeSet;

use super::enumerate::enumerate_formulas;
use super::{Scheme, Theory};
use crate::error::{Error, Result};
use crate::syntax::{fresh, relativize, replace_p, Formula, Signature, Var};

/// The sort predicates and membership of the one-sorted second-order encoding.
pub const CLASS_SORTS: [(&str, usize); 3] = [("Obj", 1), ("Cls", 1), ("In", 2)];

fn sorted_sig(s: &Scheme) -> Result<Signature> {
    let sorts = Signature::new(CLASS_SORTS)?;
    if let Some(name) = s.sig().clash_with(&sorts) {
        return Err(Error::SignatureClash(name));
    }
    s.sig().union(&sorts)
}

/// Replaces `P(v)` by `In(v, c)`.
fn as_member(f: &Formula, c: &Var) -> Formula {
    let params = BTreeSet::from([c.clone()]);
    let mut avoid = f.all_vars();
    avoid.insert(c.clone());
    let mut make = |v: &Var| Formula::atom_vars("In", vec![v.clone(), c.clone()]);
    replace_p(f, &mut make, &params, &mut avoid, &Default::default())
}

fn obj(v: &Var) -> Formula {
    Formula::atom_vars("Obj", vec![v.clone()])
}

fn cls(v: &Var) -> Formula {
    Formula::atom_vars("Cls", vec![v.clone()])
}

fn build(s: &Scheme, max_depth: usize, with_element: bool) -> Result<Theory> {
    if max_depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let sig = sorted_sig(s)?;
    let body = relativize(s.body(), "Obj");
    let vars = body.all_vars();
    let k = Var::from("c");
    let k = if vars.contains(&k) { fresh(&k, &vars) } else { k };
    // for every class, the scheme holds with P read as membership in it
    let mut axioms = vec![Formula::forall(k.clone(), Formula::implies(cls(&k), as_member(&body, &k)))];

    let (z, x, y, c) = (Var::from("z"), Var::from("x"), Var::from("y"), Var::from("c"));
    let pool: Vec<Var> = if with_element { vec![z.clone(), x.clone()] } else { vec![z.clone()] };
    for phi in enumerate_formulas(s.sig(), &pool, true, max_depth) {
        if !phi.free_vars().contains(&z) {
            continue;
        }
        let phi = as_member(&relativize(&phi, "Obj"), &c);
        let defines = Formula::forall(
            z.clone(),
            Formula::implies(
                obj(&z),
                Formula::iff(Formula::atom_vars("In", vec![z.clone(), y.clone()]), phi),
            ),
        );
        let mut inner = Formula::exists(y.clone(), Formula::and(cls(&y), defines));
        if with_element {
            inner = Formula::forall(x.clone(), Formula::implies(obj(&x), inner));
        }
        axioms.push(Formula::forall(c.clone(), Formula::implies(cls(&c), inner)));
    }
    Theory::new(sig, axioms)
}

/// Predicative comprehension with one class and one element parameter,
/// truncated to defining formulas of at most `max_depth` nodes.
pub fn build_pc(s: &Scheme, max_depth: usize) -> Result<Theory> {
    build(s, max_depth, true)
}

/// As [`build_pc`] with class parameters only.
pub fn build_spc(s: &Scheme, max_depth: usize) -> Result<Theory> {
    build(s, max_depth, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::build_ind;
    use crate::syntax::print;

    /// `all c.(Cls(c) -> all x.(Obj(x) -> R))` with `x` unused becomes `all c.(Cls(c) -> R)`.
    fn erase_element(f: &Formula) -> Option<Formula> {
        let Formula::Forall(c, body) = f else { return None };
        let Formula::Implies(guard, rest) = body.as_ref() else { return None };
        let Formula::Forall(x, inner) = rest.as_ref() else { return None };
        let Formula::Implies(og, r) = inner.as_ref() else { return None };
        if og.as_ref() != &obj(x) || r.free_vars().contains(x) {
            return None;
        }
        Some(Formula::forall(c.clone(), Formula::implies(guard.as_ref().clone(), r.as_ref().clone())))
    }

    #[test]
    fn spc_is_contained_in_pc() {
        let pc = build_pc(&build_ind(), 3).unwrap();
        let spc = build_spc(&build_ind(), 3).unwrap();
        assert_eq!(pc.axioms()[0], spc.axioms()[0]);
        let erased: Vec<Formula> = pc.axioms()[1..].iter().filter_map(erase_element).collect();
        for a in &spc.axioms()[1..] {
            assert!(erased.contains(a), "{}", print(a));
        }
        assert!(pc.axioms().iter().all(Formula::is_sentence));
    }

    #[test]
    fn first_axiom_is_the_class_form_of_the_scheme() {
        let pc = build_pc(&build_ind(), 1).unwrap();
        let first = print(&pc.axioms()[0]);
        assert!(first.starts_with("all c. (Cls(c) -> "), "{first}");
        assert!(first.contains("In(x,c)") && !first.contains("P("));
    }
}
