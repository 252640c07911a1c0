//! Translations between relational signatures as formula-to-formula passes.
//!
//! Variable conventions for the components of an `n`-dimensional translation:
//!
//! - domain `delta`: `x1, ..., xn`
//! - equality `eta`: `x1_1, ..., x1_n` and `x2_1, ..., x2_n`
//! - relation `R` of arity `k`: `v1_1, ..., v1_n, ..., vk_1, ..., vk_n`
//!
//! A source variable `w` becomes the target tuple `vw_1, ..., vw_n`.

mod validate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{alpha_equal, parse, print, rename_free, universal_closure, Formula, Signature, Var};

pub use validate::{validate_on_model, ValidationReport};

pub fn delta_var(j: usize) -> Var {
    Var::new(format!("x{j}"))
}

pub fn eta_var(side: usize, j: usize) -> Var {
    Var::new(format!("x{side}_{j}"))
}

pub fn rel_var(k: usize, j: usize) -> Var {
    Var::new(format!("v{k}_{j}"))
}

/// The `j`-th target coordinate of source variable `w`.
pub fn tuple_var(w: &Var, j: usize) -> Var {
    Var::new(format!("v{w}_{j}"))
}

/// Second tuple of an iso-condition formula: `x1s, ..., xms`.
pub fn star_var(j: usize) -> Var {
    Var::new(format!("x{j}s"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    source: Signature,
    target: Signature,
    dim: usize,
    delta: Formula,
    eta: Formula,
    relations: BTreeMap<String, Formula>,
}

#[derive(Serialize, Deserialize)]
struct TranslationFile {
    #[serde(default, skip_deserializing)]
    convention: String,
    source: Signature,
    target: Signature,
    dim: usize,
    delta: String,
    eta: String,
    relations: BTreeMap<String, String>,
}

const CONVENTION: &str = "delta(x1..xn); eta(x1_1..x1_n, x2_1..x2_n); R(v1_1..v1_n, ..., vk_1..vk_n)";

fn check_free(what: &str, f: &Formula, allowed: &BTreeSet<Var>) -> Result<()> {
    match f.free_vars().into_iter().find(|v| !allowed.contains(v)) {
        Some(v) => Err(Error::IllFormed(format!("{what} has unexpected free variable `{v}`"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TranslationFlags {
    pub dimension: usize,
    pub unrelativized: bool,
    pub identity_preserving: bool,
    pub direct: bool,
}

impl Translation {
    /// Components may leave some convention variables unused (`eta = true`
    /// is allowed), but may not mention any other free variable.
    pub fn new(
        source: Signature,
        target: Signature,
        dim: usize,
        delta: Formula,
        eta: Formula,
        relations: BTreeMap<String, Formula>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::IllFormed("dimension must be at least 1".into()));
        }
        delta.check(&target, false)?;
        eta.check(&target, false)?;
        check_free("delta", &delta, &(1..=dim).map(delta_var).collect())?;
        check_free(
            "eta",
            &eta,
            &(1..=2).flat_map(|s| (1..=dim).map(move |j| eta_var(s, j))).collect(),
        )?;
        for (name, arity) in source.symbols() {
            let phi = relations
                .get(name)
                .ok_or_else(|| Error::IllFormed(format!("no formula for source symbol `{name}`")))?;
            phi.check(&target, false)?;
            let allowed = (1..=arity).flat_map(|k| (1..=dim).map(move |j| rel_var(k, j))).collect();
            check_free(&format!("formula for `{name}`"), phi, &allowed)?;
        }
        if let Some(extra) = relations.keys().find(|n| !source.contains(n)) {
            return Err(Error::UnknownSymbol(extra.clone()));
        }
        Ok(Translation {
            source,
            target,
            dim,
            delta,
            eta,
            relations,
        })
    }

    /// Parses component texts against the target signature.
    pub fn parse(
        source: Signature,
        target: Signature,
        dim: usize,
        delta: &str,
        eta: &str,
        relations: &[(&str, &str)],
    ) -> Result<Self> {
        let delta = parse(delta, &target, false)?;
        let eta = parse(eta, &target, false)?;
        let rels = relations
            .iter()
            .map(|(n, t)| Ok((n.to_string(), parse(t, &target, false)?)))
            .collect::<Result<_>>()?;
        Self::new(source, target, dim, delta, eta, rels)
    }

    /// The one-dimensional identity on `sig`.
    pub fn identity(sig: &Signature) -> Self {
        let relations = sig
            .symbols()
            .map(|(name, arity)| {
                let args = (1..=arity).map(|k| rel_var(k, 1)).collect();
                (name.to_owned(), Formula::atom_vars(name, args))
            })
            .collect();
        Translation::new(
            sig.clone(),
            sig.clone(),
            1,
            Formula::Eq(delta_var(1), delta_var(1)),
            Formula::Eq(eta_var(1, 1), eta_var(2, 1)),
            relations,
        )
        .expect("identity is well formed")
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> &Formula {
        &self.delta
    }

    pub fn eta(&self) -> &Formula {
        &self.eta
    }

    pub fn relation(&self, symbol: &str) -> Option<&Formula> {
        self.relations.get(symbol)
    }

    pub fn relations(&self) -> &BTreeMap<String, Formula> {
        &self.relations
    }

    /// `delta` on the given tuple.
    pub fn delta_at(&self, xs: &[Var]) -> Formula {
        let map = (1..=self.dim).map(delta_var).zip(xs.iter().cloned()).collect();
        rename_free(&self.delta, &map)
    }

    /// `eta` on the given pair of tuples.
    pub fn eta_at(&self, a: &[Var], b: &[Var]) -> Formula {
        let map = (1..=self.dim)
            .map(|j| eta_var(1, j))
            .zip(a.iter().cloned())
            .chain((1..=self.dim).map(|j| eta_var(2, j)).zip(b.iter().cloned()))
            .collect();
        rename_free(&self.eta, &map)
    }

    /// The formula for `symbol` on the given tuples.
    pub fn relation_at(&self, symbol: &str, args: &[Vec<Var>]) -> Formula {
        let map = args
            .iter()
            .enumerate()
            .flat_map(|(k, xs)| (1..=self.dim).map(move |j| rel_var(k + 1, j)).zip(xs.iter().cloned()))
            .collect();
        rename_free(&self.relations[symbol], &map)
    }

    fn tuple(&self, w: &Var) -> Vec<Var> {
        (1..=self.dim).map(|j| tuple_var(w, j)).collect()
    }

    fn tr(&self, f: &Formula) -> Formula {
        match f {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Eq(a, b) => self.eta_at(&self.tuple(a), &self.tuple(b)),
            Formula::Atom(s, args) => {
                let tuples: Vec<Vec<Var>> = args.iter().map(|a| self.tuple(a)).collect();
                self.relation_at(s, &tuples)
            }
            Formula::Not(g) => Formula::not(self.tr(g)),
            Formula::And(a, b) => Formula::and(self.tr(a), self.tr(b)),
            Formula::Or(a, b) => Formula::or(self.tr(a), self.tr(b)),
            Formula::Implies(a, b) => Formula::implies(self.tr(a), self.tr(b)),
            Formula::Iff(a, b) => Formula::iff(self.tr(a), self.tr(b)),
            Formula::Exists(w, g) => {
                let xs = self.tuple(w);
                Formula::exists_many(&xs, Formula::and(self.delta_at(&xs), self.tr(g)))
            }
            // read as ~ex w. ~g
            Formula::Forall(w, g) => {
                let xs = self.tuple(w);
                Formula::not(Formula::exists_many(
                    &xs,
                    Formula::and(self.delta_at(&xs), Formula::not(self.tr(g))),
                ))
            }
        }
    }

    pub fn to_json(&self) -> String {
        let file = TranslationFile {
            convention: CONVENTION.to_owned(),
            source: self.source.clone(),
            target: self.target.clone(),
            dim: self.dim,
            delta: print(&self.delta),
            eta: print(&self.eta),
            relations: self.relations.iter().map(|(n, f)| (n.clone(), print(f))).collect(),
        };
        serde_json::to_string_pretty(&file).expect("translation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TranslationFile = serde_json::from_str(text)?;
        let rels: Vec<(&str, &str)> = file.relations.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
        Self::parse(file.source, file.target, file.dim, &file.delta, &file.eta, &rels)
    }
}

/// Translates a source formula; free source variables become free tuples.
pub fn apply(t: &Translation, f: &Formula) -> Result<Formula> {
    f.check(&t.source, false)
        .map_err(|e| Error::SignatureMismatch(format!("formula is not over the source signature {}: {e}", t.source)))?;
    Ok(t.tr(f))
}

/// The translation that first applies `u` (A to B) and then `t` (B to C).
pub fn compose(t: &Translation, u: &Translation) -> Result<Translation> {
    if u.target != t.source {
        return Err(Error::SignatureMismatch(format!(
            "inner target {} differs from outer source {}",
            u.target, t.source
        )));
    }
    let (m, n) = (t.dim, u.dim);
    // t sends a B-variable w to vw_1..vw_m; flatten (i, j) to coordinate (i-1)m+j
    let flatten = |inner: &dyn Fn(usize) -> Var, outer: &dyn Fn(usize) -> Var| -> BTreeMap<Var, Var> {
        (1..=n)
            .flat_map(|i| (1..=m).map(move |j| (i, j)))
            .map(|(i, j)| (tuple_var(&inner(i), j), outer((i - 1) * m + j)))
            .collect()
    };
    let through = |f: &Formula, map: &BTreeMap<Var, Var>| rename_free(&t.tr(f), map);

    let mut delta = through(&u.delta, &flatten(&delta_var, &delta_var));
    for i in 1..=n {
        let block: Vec<Var> = (1..=m).map(|j| delta_var((i - 1) * m + j)).collect();
        delta = Formula::and(delta, t.delta_at(&block));
    }
    let mut eta_map = flatten(&|i| eta_var(1, i), &|k| eta_var(1, k));
    eta_map.extend(flatten(&|i| eta_var(2, i), &|k| eta_var(2, k)));
    let eta = through(&u.eta, &eta_map);

    let mut relations = BTreeMap::new();
    for (name, arity) in u.source.symbols() {
        let mut map = BTreeMap::new();
        for k in 1..=arity {
            map.extend(flatten(&|i| rel_var(k, i), &|c| rel_var(k, c)));
        }
        relations.insert(name.to_owned(), through(&u.relations[name], &map));
    }
    Translation::new(u.source.clone(), t.target.clone(), m * n, delta, eta, relations)
}

/// Syntactic flags, by alpha-equality with the literal patterns.
pub fn flags(t: &Translation) -> TranslationFlags {
    let n = t.dim;
    let unrel = Formula::conj((1..=n).map(|j| Formula::Eq(delta_var(j), delta_var(j))));
    let ident = Formula::conj((1..=n).map(|j| Formula::Eq(eta_var(1, j), eta_var(2, j))));
    let unrelativized = alpha_equal(&t.delta, &unrel);
    let identity_preserving = alpha_equal(&t.eta, &ident);
    TranslationFlags {
        dimension: n,
        unrelativized,
        identity_preserving,
        direct: n == 1 && unrelativized && identity_preserving,
    }
}

fn vars(prefix: &str, suffix: &str, n: usize) -> Vec<Var> {
    (1..=n).map(|j| Var::new(format!("{prefix}{j}{suffix}"))).collect()
}

/// The five conditions under which `iota(x1..xn, x1s..xms)` defines an
/// isomorphism between the internal models of `t1` and `t2`, each universally
/// closed. The fifth is the conjunction over source symbols.
pub fn iso_conditions(t1: &Translation, t2: &Translation, iota: &Formula) -> Result<Vec<Formula>> {
    if t1.source != t2.source || t1.target != t2.target {
        return Err(Error::SignatureMismatch("the two translations must share source and target".into()));
    }
    iota.check(&t1.target, false)?;
    let (n, m) = (t1.dim, t2.dim);
    let xs = vars("x", "", n);
    let xss = vars("x", "s", m);
    let allowed: BTreeSet<Var> = xs.iter().chain(&xss).cloned().collect();
    if let Some(v) = iota.free_vars().into_iter().find(|v| !allowed.contains(v)) {
        return Err(Error::ArityMismatch {
            symbol: format!("iota (free `{v}`)"),
            expected: n + m,
            found: iota.free_vars().len(),
        });
    }
    let io = |a: &[Var], b: &[Var]| {
        let map = xs.iter().cloned().zip(a.iter().cloned()).chain(xss.iter().cloned().zip(b.iter().cloned())).collect();
        rename_free(iota, &map)
    };
    let ys = vars("y", "", n);
    let zss = vars("z", "s", m);
    let close = |f: Formula| universal_closure(&f);

    let c1 = close(Formula::implies(
        io(&xs, &xss),
        Formula::and(t1.delta_at(&xs), t2.delta_at(&xss)),
    ));
    let c2 = close(Formula::implies(
        t1.delta_at(&xs),
        Formula::exists_many(&xss, Formula::and(t2.delta_at(&xss), io(&xs, &xss))),
    ));
    let c3 = close(Formula::implies(
        t2.delta_at(&xss),
        Formula::exists_many(&xs, Formula::and(t1.delta_at(&xs), io(&xs, &xss))),
    ));
    let c4 = close(Formula::implies(
        io(&xs, &xss),
        Formula::and(
            Formula::iff(t1.eta_at(&xs, &ys), io(&ys, &xss)),
            Formula::iff(t2.eta_at(&xss, &zss), io(&xs, &zss)),
        ),
    ));
    let c5 = Formula::conj(t1.source.symbols().map(|(name, arity)| {
        let a: Vec<Vec<Var>> = (1..=arity).map(|i| vars(&format!("a{i}_"), "", n)).collect();
        let b: Vec<Vec<Var>> = (1..=arity).map(|i| vars(&format!("b{i}_"), "s", m)).collect();
        let links = Formula::conj(a.iter().zip(&b).map(|(p, q)| io(p, q)));
        close(Formula::implies(
            links,
            Formula::iff(t1.relation_at(name, &a), t2.relation_at(name, &b)),
        ))
    }));
    Ok(vec![c1, c2, c3, c4, c5])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_untyped;

    fn leq() -> Signature {
        Signature::of(&[("Leq", 2)])
    }

    fn reversal() -> Translation {
        Translation::parse(leq(), leq(), 1, "x1 = x1", "x1_1 = x2_1", &[("Leq", "Leq(v2_1,v1_1)")]).unwrap()
    }

    #[test]
    fn identity_is_transparent() {
        let f = parse_untyped("ex x. all y. Leq(x,y)").unwrap().0;
        let out = apply(&Translation::identity(&leq()), &f).unwrap();
        let expected = parse_untyped("ex vx_1. (vx_1 = vx_1 & ~ex vy_1. (vy_1 = vy_1 & ~Leq(vx_1,vy_1)))").unwrap().0;
        assert_eq!(out, expected);
        let p = parse_untyped("P(x)").unwrap().0;
        assert!(matches!(apply(&Translation::identity(&leq()), &p), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn flags_of_the_pool() {
        let id = flags(&Translation::identity(&leq()));
        assert!(id.direct && id.unrelativized && id.identity_preserving);
        assert!(flags(&reversal()).direct);
        let lex = Translation::parse(
            leq(),
            leq(),
            2,
            "x1 = x1 & x2 = x2",
            "x1_1 = x2_1 & x1_2 = x2_2",
            &[("Leq", "(Leq(v1_1,v2_1) & ~v1_1 = v2_1) | (v1_1 = v2_1 & Leq(v1_2,v2_2))")],
        )
        .unwrap();
        let f = flags(&lex);
        assert_eq!(f.dimension, 2);
        assert!(f.unrelativized && !f.direct);
    }

    #[test]
    fn composition_dimensions_and_identity() {
        let id = Translation::identity(&leq());
        let r = reversal();
        let c = compose(&id, &r).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(alpha_equal(c.relation("Leq").unwrap(), &parse_untyped("Leq(v2_1,v1_1)").unwrap().0));
        let lex = Translation::parse(leq(), leq(), 2, "x1 = x1 & x2 = x2", "x1_1 = x2_1 & x1_2 = x2_2", &[("Leq", "Leq(v1_1,v2_1)")]).unwrap();
        assert_eq!(compose(&lex, &r).unwrap().dim(), 2);
        assert_eq!(compose(&r, &lex).unwrap().dim(), 2);
    }

    #[test]
    fn components_are_checked() {
        assert!(Translation::parse(leq(), leq(), 1, "x2 = x2", "true", &[("Leq", "Leq(v1_1,v2_1)")]).is_err());
        assert!(Translation::parse(leq(), leq(), 1, "true", "true", &[]).is_err());
        assert!(Translation::parse(leq(), leq(), 0, "true", "true", &[("Leq", "true")]).is_err());
        let t = reversal();
        assert_eq!(Translation::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn iso_condition_shapes() {
        let id = Translation::identity(&leq());
        let iota = parse_untyped("x1 = x1s").unwrap().0;
        let cs = iso_conditions(&id, &reversal(), &iota).unwrap();
        assert_eq!(cs.len(), 5);
        assert!(cs.iter().all(Formula::is_sentence));
        let bad = parse_untyped("x1 = y").unwrap().0;
        assert!(matches!(iso_conditions(&id, &id, &bad), Err(Error::ArityMismatch { .. })));
    }
}
