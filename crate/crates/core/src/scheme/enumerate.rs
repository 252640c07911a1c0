use std::collections::{HashMap, HashSet};

use super::{mk_instance, Scheme};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature, Var, SCHEME_PREDICATE};

struct Gen<'a> {
    sig: &'a Signature,
    pool: &'a [Var],
    use_p: bool,
    memo: HashMap<(usize, usize), Vec<Formula>>,
}

impl Gen<'_> {
    fn vars(&self, depth: usize) -> Vec<Var> {
        let mut vs = self.pool.to_vec();
        vs.extend((0..depth).map(|d| Var::new(format!("w{d}"))));
        vs
    }

    fn atoms(&self, depth: usize) -> Vec<Formula> {
        let vs = self.vars(depth);
        let mut out = Vec::new();
        for (name, arity) in self.sig.symbols() {
            let mut idx = vec![0; arity];
            loop {
                out.push(Formula::atom_vars(name, idx.iter().map(|&i| vs[i].clone()).collect()));
                let Some(p) = (0..arity).rev().find(|&p| idx[p] + 1 < vs.len()) else {
                    break;
                };
                idx[p] += 1;
                idx[p + 1..].iter_mut().for_each(|i| *i = 0);
            }
        }
        for a in &vs {
            for b in &vs {
                out.push(Formula::Eq(a.clone(), b.clone()));
            }
        }
        if self.use_p {
            out.extend(vs.iter().map(|v| Formula::atom_vars(SCHEME_PREDICATE, vec![v.clone()])));
        }
        out
    }

    /// Formulas of exactly `size` nodes under `depth` enclosing binders.
    fn of_size(&mut self, size: usize, depth: usize) -> Vec<Formula> {
        if let Some(v) = self.memo.get(&(size, depth)) {
            return v.clone();
        }
        let out = if size == 1 {
            self.atoms(depth)
        } else {
            let mut out: Vec<Formula> = self.of_size(size - 1, depth).into_iter().map(Formula::not).collect();
            let w = Var::new(format!("w{depth}"));
            out.extend(
                self.of_size(size - 1, depth + 1)
                    .into_iter()
                    .map(|b| Formula::exists(w.clone(), b)),
            );
            for left in 1..size - 1 {
                let ls = self.of_size(left, depth);
                let rs = self.of_size(size - 1 - left, depth);
                for l in &ls {
                    out.extend(rs.iter().map(|r| Formula::and(l.clone(), r.clone())));
                }
            }
            out
        };
        self.memo.insert((size, depth), out.clone());
        out
    }
}

/// All formulas over `sig` built from atoms, `~`, `&` and `ex`, with at most
/// `max_size` nodes and free variables drawn from `pool`. Bound variables are
/// `w0, w1, ...` by nesting depth. Ordered by size; alpha-duplicates dropped.
pub fn enumerate_formulas(sig: &Signature, pool: &[Var], use_p: bool, max_size: usize) -> Vec<Formula> {
    let mut g = Gen {
        sig,
        pool,
        use_p,
        memo: HashMap::new(),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for size in 1..=max_size {
        for f in g.of_size(size, 0) {
            if seen.insert(f.canonical()) {
                out.push(f);
            }
        }
    }
    out
}

/// Instances of `s` for every `phi(x, y)` with at most `max_depth` nodes, in
/// enumeration order with alpha-duplicates removed. With `pf_only`, `phi` has
/// `x` as its only free variable.
pub fn instances_up_to(s: &Scheme, max_depth: usize, pf_only: bool) -> Result<Vec<Formula>> {
    if max_depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let x = Var::from("x");
    let pool = [x.clone(), Var::from("y")];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for phi in enumerate_formulas(s.sig(), &pool, false, max_depth) {
        let free = phi.free_vars();
        let keep = if pf_only { free == [x.clone()] } else { free.contains(&x) };
        if !keep {
            continue;
        }
        let inst = mk_instance(s, &phi, &x)?;
        if seen.insert(inst.canonical()) {
            out.push(inst);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::build_ind;

    #[test]
    fn pure_equality_formulas() {
        let pool = [Var::from("x")];
        let one = enumerate_formulas(&Signature::default(), &pool, false, 1);
        assert_eq!(one, vec![Formula::eq("x", "x")]);
        // size 2: ~(x = x), ex w0.(x = x), ex w0.(x = w0), ex w0.(w0 = x), ex w0.(w0 = w0)
        assert_eq!(enumerate_formulas(&Signature::default(), &pool, false, 2).len(), 6);
    }

    #[test]
    fn depth_zero_is_rejected() {
        assert_eq!(instances_up_to(&build_ind(), 0, false), Err(Error::InvalidDepth));
    }

    #[test]
    fn monotone_and_pf_subset() {
        let s = Scheme::parse(Signature::default(), "all x. (P(x) -> P(x))").unwrap();
        let small = instances_up_to(&s, 2, false).unwrap();
        let big = instances_up_to(&s, 3, false).unwrap();
        assert_eq!(&big[..small.len()], &small[..]);
        let pf = instances_up_to(&s, 3, true).unwrap();
        assert!(pf.iter().all(|f| big.contains(f)));
        assert!(pf.len() < big.len());
    }
}
