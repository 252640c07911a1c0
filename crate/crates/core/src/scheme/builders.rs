use super::{Scheme, Theory};
use crate::error::{Error, Result};
use crate::syntax::{parse, relativize, Formula, Signature, Var, SCHEME_PREDICATE};

fn fixed(sig: Signature, text: &str) -> Scheme {
    Scheme::parse(sig, text).expect("builder text is well formed")
}

fn fixed_theory(sig: Signature, texts: &[&str]) -> Theory {
    Theory::parse(sig, texts).expect("builder text is well formed")
}

/// Induction over `{Zero:1, Succ:2}`.
pub fn build_ind() -> Scheme {
    fixed(
        Signature::of(&[("Zero", 1), ("Succ", 2)]),
        "((all z. (Zero(z) -> P(z))) & (all x. all y. ((P(x) & Succ(x,y)) -> P(y)))) -> all x. P(x)",
    )
}

/// Comprehension with classes and objects as one-sorted predicates.
pub fn build_com() -> Scheme {
    fixed(
        Signature::of(&[("Obj", 1), ("Cls", 1), ("In", 2)]),
        "ex y. (Cls(y) & all x. (Obj(x) -> (In(x,y) <-> P(x))))",
    )
}

/// Coding predicates of the satisfaction scheme, with arities.
pub const SAT_CODING: [(&str, usize); 7] = [
    ("Form", 1),
    ("Atomf", 1),
    ("ExQ", 2),
    ("Conj", 3),
    ("Neg", 2),
    ("Pair", 3),
    ("AtSat", 2),
];

// S(f, c): P holds of the code of the pair (f, c)
fn sat(f: &str, c: &str) -> String {
    format!("(ex p. (Pair({f},{c},p) & P(p)))")
}

/// Compositional clauses for a satisfaction predicate. `P` holds of codes
/// `Pair(f, c, p)` of formula/assignment pairs; `Pair` also codes assignment
/// extension in the existential clause. All coding symbols are uninterpreted.
pub fn build_sat(sig: &Signature) -> Result<Scheme> {
    let coding = Signature::new(SAT_CODING)?;
    if let Some(name) = sig.clash_with(&coding) {
        return Err(Error::SignatureClash(name));
    }
    let full = sig.union(&coding)?;
    let clauses = [
        format!("all f. all c. ((Form(f) & Atomf(f)) -> ({} <-> AtSat(f,c)))", sat("f", "c")),
        format!(
            "all f. all g. all c. ((Form(f) & ExQ(f,g)) -> ({} <-> ex d. ex e. (Pair(c,d,e) & {})))",
            sat("f", "c"),
            sat("g", "e")
        ),
        format!(
            "all f. all g. all h. all c. ((Form(f) & Conj(f,g,h)) -> ({} <-> ({} & {})))",
            sat("f", "c"),
            sat("g", "c"),
            sat("h", "c")
        ),
        format!(
            "all f. all g. all c. ((Form(f) & Neg(f,g)) -> ({} <-> ~{}))",
            sat("f", "c"),
            sat("g", "c")
        ),
    ];
    let parts = clauses.iter().map(|t| parse(t, &full, true)).collect::<Result<Vec<_>>>()?;
    Scheme::new(full, Formula::conj(parts))
}

/// The negated satisfaction scheme: `P` is not a satisfaction predicate.
pub fn build_tarski(sig: &Signature) -> Result<Scheme> {
    let s = build_sat(sig)?;
    Scheme::new(s.sig().clone(), Formula::not(s.body().clone()))
}

// p is the Kuratowski pair {{u}, {u, v}}
fn kpair(p: &str, u: &str, v: &str) -> String {
    format!(
        "(all q. (In(q,{p}) <-> ((all r. (In(r,q) <-> r = {u})) | (all r. (In(r,q) <-> (r = {u} | r = {v}))))))"
    )
}

// n is a von Neumann natural number: a transitive set of non-atoms, linearly
// ordered by membership, every nonempty member of n + 1 having a largest element
fn nat_num(n: &str) -> String {
    format!(
        "(~A({n}) & (all u. (In(u,{n}) -> (~A(u) & all v. (In(v,u) -> In(v,{n}))))) \
         & (all u. all v. ((In(u,{n}) & In(v,{n})) -> (In(u,v) | u = v | In(v,u)))) \
         & (all u. (((In(u,{n}) | u = {n}) & ex v. In(v,u)) -> ex m. (In(m,u) & all v. (In(v,u) -> (In(v,m) | v = m))))))"
    )
}

// f is a set of Kuratowski pairs forming a bijection from n onto x
fn bijection(f: &str, n: &str, x: &str) -> String {
    let kp = kpair;
    format!(
        "((all p. (In(p,{f}) -> ex u. ex v. ((In(u,{n}) & In(v,{x})) & {k1}))) \
         & (all u. (In(u,{n}) -> ex v. ex p. ((In(v,{x}) & In(p,{f})) & {k1}))) \
         & (all v. (In(v,{x}) -> ex u. ex p. ((In(u,{n}) & In(p,{f})) & {k1}))) \
         & (all p. all s. all u. all v. all w. ((In(p,{f}) & In(s,{f}) & {k1} & {k2}) -> v = w)) \
         & (all p. all s. all u. all v. all w. ((In(p,{f}) & In(s,{f}) & {k3} & {k4}) -> u = v)))",
        k1 = kp("p", "u", "v"),
        k2 = kp("s", "u", "w"),
        k3 = kp("p", "u", "w"),
        k4 = kp("s", "v", "w"),
    )
}

/// Hereditarily finite sets over atoms `A`, with `T` holding on the atoms.
pub fn build_hf(t: &Theory) -> Result<Scheme> {
    let own = Signature::of(&[("In", 2), ("A", 1)]);
    if let Some(name) = t.sig().clash_with(&own) {
        return Err(Error::SignatureClash(name));
    }
    let sig = t.sig().union(&own)?;
    let groups = [
        // replacement, with P a class of pairs
        format!(
            "all x. ((all u. (In(u,x) -> all v. all w. (((ex p. (P(p) & {puv})) & (ex s. (P(s) & {suw}))) -> v = w))) \
             -> ex y. (~A(y) & all v. (In(v,y) <-> ex u. (In(u,x) & ex p. (P(p) & {puv})))))",
            puv = kpair("p", "u", "v"),
            suw = kpair("s", "u", "w"),
        ),
        "(all x. ((all y. (In(y,x) -> P(y))) -> P(x))) -> all x. P(x)".to_string(),
        "all x. ex y. all z. (In(z,y) <-> (~A(z) & all w. (In(w,z) -> In(w,x))))".to_string(),
        "all x. ex y. (~A(y) & all z. (In(z,y) <-> ex w. (In(w,x) & In(z,w))))".to_string(),
        format!("all x. (~A(x) -> ex n. ex f. ({} & {}))", nat_num("n"), bijection("f", "n", "x")),
        "all x. all y. ((~A(x) & ~A(y)) -> ((all z. (In(z,x) <-> In(z,y))) -> x = y))".to_string(),
        "all x. (A(x) -> all y. ~In(y,x))".to_string(),
    ];
    let mut parts = groups.iter().map(|g| parse(g, &sig, true)).collect::<Result<Vec<_>>>()?;
    parts.extend(t.axioms().iter().map(|a| relativize(a, "A")));
    Scheme::new(sig, Formula::conj(parts))
}

fn check_q(alpha: &Scheme, q: &str) -> Result<Signature> {
    if q == SCHEME_PREDICATE || alpha.sig().contains(q) {
        return Err(Error::SymbolClash(q.to_owned()));
    }
    alpha.sig().with(q, 1)
}

/// `alpha -> all x.(Q(x) -> P(x))`.
pub fn build_mu(alpha: &Scheme, q: &str) -> Result<Scheme> {
    let sig = check_q(alpha, q)?;
    let inner = Formula::implies(Formula::atom(q, &["x"]), Formula::atom(SCHEME_PREDICATE, &["x"]));
    Scheme::new(sig, Formula::implies(alpha.body().clone(), Formula::forall(Var::from("x"), inner)))
}

/// `alpha -> all x.(P(x) -> Q(x))`.
pub fn build_nu(alpha: &Scheme, q: &str) -> Result<Scheme> {
    let sig = check_q(alpha, q)?;
    let inner = Formula::implies(Formula::atom(SCHEME_PREDICATE, &["x"]), Formula::atom(q, &["x"]));
    Scheme::new(sig, Formula::implies(alpha.body().clone(), Formula::forall(Var::from("x"), inner)))
}

/// Adjunctive set theory: an empty set, and adjunction of one element.
pub fn build_as() -> Theory {
    fixed_theory(
        Signature::of(&[("In", 2)]),
        &[
            "ex a. all x. ~In(x,a)",
            "all a. all b. ex c. all x. (In(x,c) <-> (In(x,a) | x = b))",
        ],
    )
}

/// Dense linear orders without endpoints over `{Less:2}`.
pub fn build_dlo() -> Theory {
    fixed_theory(
        Signature::of(&[("Less", 2)]),
        &[
            "all x. ~Less(x,x)",
            "all x. all y. all z. ((Less(x,y) & Less(y,z)) -> Less(x,z))",
            "all x. all y. (Less(x,y) | x = y | Less(y,x))",
            "all x. all y. (Less(x,y) -> ex z. (Less(x,z) & Less(z,y)))",
            "all x. ex y. Less(x,y)",
            "all x. ex y. Less(y,x)",
        ],
    )
}

/// Non-negative parts of discretely ordered rings, with the operations as
/// graph relations `Add(x,y,z)` for `x + y = z` and `Mul(x,y,z)` for `x * y = z`.
pub fn build_pa_minus() -> Theory {
    fixed_theory(
        Signature::of(&[("Zero", 1), ("One", 1), ("Add", 3), ("Mul", 3), ("Less", 2)]),
        &[
            "ex z. Zero(z)",
            "all z. all w. ((Zero(z) & Zero(w)) -> z = w)",
            "ex o. One(o)",
            "all o. all w. ((One(o) & One(w)) -> o = w)",
            "all x. all y. ex z. Add(x,y,z)",
            "all x. all y. all z. all w. ((Add(x,y,z) & Add(x,y,w)) -> z = w)",
            "all x. all y. ex z. Mul(x,y,z)",
            "all x. all y. all z. all w. ((Mul(x,y,z) & Mul(x,y,w)) -> z = w)",
            "all x. all y. all z. all u. all v. all w. ((Add(x,y,u) & Add(u,z,v) & Add(y,z,w)) -> Add(x,w,v))",
            "all x. all y. all z. (Add(x,y,z) -> Add(y,x,z))",
            "all x. all y. all z. all u. all v. all w. ((Mul(x,y,u) & Mul(u,z,v) & Mul(y,z,w)) -> Mul(x,w,v))",
            "all x. all y. all z. (Mul(x,y,z) -> Mul(y,x,z))",
            "all x. all y. all z. all u. all v. all w. all s. ((Add(y,z,u) & Mul(x,u,v) & Mul(x,y,w) & Mul(x,z,s)) -> Add(w,s,v))",
            "all z. all x. (Zero(z) -> Add(x,z,x))",
            "all z. all x. (Zero(z) -> Mul(x,z,z))",
            "all o. all x. (One(o) -> Mul(x,o,x))",
            "all x. ~Less(x,x)",
            "all x. all y. all z. ((Less(x,y) & Less(y,z)) -> Less(x,z))",
            "all x. all y. (Less(x,y) | x = y | Less(y,x))",
            "all x. all y. all z. all u. all v. ((Less(x,y) & Add(x,z,u) & Add(y,z,v)) -> Less(u,v))",
            "all x. all y. all z. all u. all v. all w. ((Zero(w) & Less(w,z) & Less(x,y) & Mul(x,z,u) & Mul(y,z,v)) -> Less(u,v))",
            "all x. all y. (Less(x,y) -> ex z. Add(x,z,y))",
            "all z. all o. (Zero(z) & One(o) -> Less(z,o))",
            "all z. all o. all x. ((Zero(z) & One(o) & Less(z,x)) -> (x = o | Less(o,x)))",
            "all z. all x. (Zero(z) -> (x = z | Less(z,x)))",
        ],
    )
}

/// `Succ` is the graph of a bijection, and every nonempty `Succ`-closed class
/// is everything: the strong models are the single cycles.
pub fn build_cycle() -> Scheme {
    fixed(
        Signature::of(&[("Succ", 2)]),
        "(all x. ex y. (Succ(x,y) & all z. (Succ(x,z) -> z = y))) \
         & (all y. ex x. (Succ(x,y) & all z. (Succ(z,y) -> z = x))) \
         & (((ex x. P(x)) & (all x. all y. ((P(x) & Succ(x,y)) -> P(y)))) -> all x. P(x))",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::print;

    #[test]
    fn sat_has_four_implications() {
        let s = build_sat(&Signature::of(&[("Leq", 2)])).unwrap();
        let parts = s.body().conjuncts();
        assert_eq!(parts.len(), 4);
        for p in parts {
            let mut f = p;
            while let Formula::Forall(_, b) = f {
                f = b;
            }
            assert!(matches!(f, Formula::Implies(..)));
        }
        let t = build_tarski(&Signature::of(&[("Leq", 2)])).unwrap();
        assert_eq!(t.body(), &Formula::not(s.body().clone()));
        assert_eq!(
            build_sat(&Signature::of(&[("Pair", 3)])),
            Err(Error::SignatureClash("Pair".into()))
        );
    }

    #[test]
    fn hf_group_counts() {
        let empty = build_hf(&Theory::empty()).unwrap();
        assert_eq!(empty.body().conjuncts().len(), 7);
        let dlo = build_hf(&build_dlo()).unwrap();
        assert_eq!(dlo.body().conjuncts().len(), 13);
        let clash = Theory::parse(Signature::of(&[("In", 2)]), &[]).unwrap();
        assert_eq!(build_hf(&clash), Err(Error::SignatureClash("In".into())));
    }

    #[test]
    fn mu_and_nu() {
        let alpha = Scheme::new(Signature::default(), Formula::True).unwrap();
        assert_eq!(print(build_mu(&alpha, "Q").unwrap().body()), "(true -> (all x. (Q(x) -> P(x))))");
        assert_eq!(print(build_nu(&alpha, "Q").unwrap().body()), "(true -> (all x. (P(x) -> Q(x))))");
        assert_eq!(build_mu(&alpha, "P"), Err(Error::SymbolClash("P".into())));
        let ind = build_ind();
        assert_eq!(build_nu(&ind, "Zero"), Err(Error::SymbolClash("Zero".into())));
    }

    #[test]
    fn as_has_two_closed_axioms() {
        let t = build_as();
        assert_eq!(t.axioms().len(), 2);
        assert!(t.axioms().iter().all(Formula::is_sentence));
    }
}
