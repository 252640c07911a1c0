use std::collections::BTreeMap;

use super::eval::{eval_with, rel_table, Assignment, Compiled, Frame};
use super::quotient::quotient_by;
use super::relation::{table_len, Relation};
use super::structure::FiniteStructure;
use crate::error::{Error, Result};
use crate::interp::{delta_var, eta_var, rel_var, Translation};
use crate::syntax::{Formula, Var};

/// `t` evaluated in `m`, before naming: the δ-tuples and the η and φ_R
/// relations over their positions.
pub(crate) struct Carved {
    pub tuples: Vec<Vec<usize>>,
    pub eta: Relation,
    pub rels: BTreeMap<String, Relation>,
}

pub(crate) fn all_tuples(size: usize, dim: usize) -> Result<Vec<Vec<usize>>> {
    let n = table_len(dim, size)
        .ok_or_else(|| Error::CapExceeded(format!("{size}^{dim} tuples exceed the table limit")))?;
    Ok((0..n)
        .map(|mut i| {
            let mut t = vec![0; dim];
            for slot in t.iter_mut().rev() {
                *slot = i % size;
                i /= size;
            }
            t
        })
        .collect())
}

pub(crate) fn eta_vars(dim: usize) -> Vec<Var> {
    (1..=2).flat_map(|s| (1..=dim).map(move |j| eta_var(s, j))).collect()
}

pub(crate) fn rel_vars(dim: usize, arity: usize) -> Vec<Var> {
    (1..=arity).flat_map(|k| (1..=dim).map(move |j| rel_var(k, j))).collect()
}

pub(crate) fn check_target(m: &FiniteStructure, t: &Translation) -> Result<()> {
    if m.signature() != t.target() {
        return Err(Error::SignatureMismatch(format!(
            "structure is over {}, translation targets {}",
            m.signature(),
            t.target()
        )));
    }
    Ok(())
}

pub(crate) fn carve(m: &FiniteStructure, t: &Translation) -> Result<Carved> {
    check_target(m, t)?;
    let sig = m.signature();
    let n = t.dim();
    let rels = rel_table(m);
    let frame = Frame::new(m.elements(), &rels);

    let delta = Compiled::new(sig, t.delta(), &(1..=n).map(delta_var).collect::<Vec<_>>(), false)?;
    let tuples: Vec<Vec<usize>> = all_tuples(m.size(), n)?
        .into_iter()
        .filter(|x| delta.eval(&frame, x))
        .collect();
    let d = tuples.len();

    let eta_c = Compiled::new(sig, t.eta(), &eta_vars(n), false)?;
    let mut eta = Relation::empty(2, d)?;
    for (i, a) in tuples.iter().enumerate() {
        for (j, b) in tuples.iter().enumerate() {
            if eta_c.eval(&frame, &[a.as_slice(), b.as_slice()].concat()) {
                eta.insert(&[i, j]);
            }
        }
    }

    let mut out = BTreeMap::new();
    for (name, arity) in t.source().symbols() {
        let c = Compiled::new(sig, t.relation(name).expect("covers source"), &rel_vars(n, arity), false)?;
        let mut r = Relation::empty(arity, d)?;
        for pos in all_tuples(d, arity)? {
            let values: Vec<usize> = pos.iter().flat_map(|&p| tuples[p].iter().copied()).collect();
            if c.eval(&frame, &values) {
                r.insert(&pos);
            }
        }
        out.insert(name.to_owned(), r);
    }
    Ok(Carved { tuples, eta, rels: out })
}

/// An internal model: a structure over the source signature, with equality
/// read as `eq` when it is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalModel {
    pub structure: FiniteStructure,
    pub eq: Option<Relation>,
}

impl InternalModel {
    pub fn satisfies(&self, sentence: &Formula) -> Result<bool> {
        eval_with(&self.structure, sentence, &Assignment::new(), self.eq.as_ref(), None)
    }
}

/// Element names are the target elements at dimension 1, `(a,b,..)` above.
pub fn internal_model(m: &FiniteStructure, t: &Translation, quotient_eta: bool) -> Result<InternalModel> {
    let carved = carve(m, t)?;
    if carved.tuples.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let universe = carved
        .tuples
        .iter()
        .map(|x| match x.as_slice() {
            [e] => m.name(*e).to_owned(),
            _ => format!("({})", x.iter().map(|&e| m.name(e)).collect::<Vec<_>>().join(",")),
        })
        .collect();
    let structure = FiniteStructure::new(t.source().clone(), universe, carved.rels)?;
    if quotient_eta {
        return Ok(InternalModel {
            structure: quotient_by(&structure, &carved.eta)?,
            eq: None,
        });
    }
    let d = structure.size();
    let absolute = (0..d).all(|i| (0..d).all(|j| carved.eta.contains(&[i, j]) == (i == j)));
    Ok(InternalModel {
        structure,
        eq: (!absolute).then_some(carved.eta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{eval, find_isomorphism};
    use crate::syntax::{parse_untyped, Signature};

    fn leq() -> Signature {
        Signature::of(&[("Leq", 2)])
    }

    fn chain(n: usize) -> FiniteStructure {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let r = Relation::from_tuples(2, n, (0..n).flat_map(|i| (i..n).map(move |j| [i, j]))).unwrap();
        FiniteStructure::new(leq(), names, BTreeMap::from([("Leq".to_string(), r)])).unwrap()
    }

    #[test]
    fn identity_gives_back_the_model() {
        let m = chain(3);
        let im = internal_model(&m, &Translation::identity(&leq()), false).unwrap();
        assert_eq!(im.structure, m);
        assert!(im.eq.is_none());
    }

    #[test]
    fn lexicographic_square_of_two_chain() {
        let lex = Translation::parse(
            leq(),
            leq(),
            2,
            "x1 = x1 & x2 = x2",
            "x1_1 = x2_1 & x1_2 = x2_2",
            &[("Leq", "(Leq(v1_1,v2_1) & ~v1_1 = v2_1) | (v1_1 = v2_1 & Leq(v1_2,v2_2))")],
        )
        .unwrap();
        let im = internal_model(&chain(2), &lex, false).unwrap();
        assert_eq!(im.structure.universe()[1], "(e0,e1)");
        assert!(find_isomorphism(&im.structure, &chain(4)).is_some());
        let linear = parse_untyped("all x. all y. (Leq(x,y) | Leq(y,x))").unwrap().0;
        assert!(eval(&im.structure, &linear, &Assignment::new()).unwrap());
    }

    #[test]
    fn empty_domain_is_an_error() {
        let t = Translation::parse(leq(), leq(), 1, "~x1 = x1", "x1_1 = x2_1", &[("Leq", "Leq(v1_1,v2_1)")]).unwrap();
        assert_eq!(internal_model(&chain(2), &t, false), Err(Error::EmptyDomain));
    }
}
