use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::interp::Translation;
use crate::model::{FiniteStructure, Relation};
use crate::syntax::{Formula, Signature, Var};

pub fn element_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Each tuple present independently with probability `density`.
pub fn random_structure<R: Rng>(rng: &mut R, sig: &Signature, n: usize, density: f64) -> FiniteStructure {
    let rels = sig
        .symbols()
        .map(|(name, arity)| {
            let mut r = Relation::empty(arity, n).expect("small table");
            for i in 0..r.bits().len() {
                r.set_index(i, rng.gen_bool(density));
            }
            (name.to_owned(), r)
        })
        .collect();
    FiniteStructure::new(sig.clone(), element_names(n), rels).expect("well formed")
}

/// A random partition of `0..n` as a block index per element.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut blocks = Vec::with_capacity(n);
    let mut used = 0;
    for _ in 0..n {
        let b = rng.gen_range(0..=used);
        if b == used {
            used += 1;
        }
        blocks.push(b);
    }
    blocks
}

pub fn chain(n: usize, symbol: &str) -> FiniteStructure {
    let r = Relation::from_tuples(2, n, (0..n).flat_map(|i| (i..n).map(move |j| [i, j]))).expect("small");
    FiniteStructure::new(Signature::of(&[(symbol, 2)]), element_names(n), BTreeMap::from([(symbol.to_owned(), r)]))
        .expect("well formed")
}

/// A `{Leq:2}` structure: an arbitrary relation, a total preorder, or a chain.
pub fn random_leq<R: Rng>(rng: &mut R, n: usize) -> FiniteStructure {
    match rng.gen_range(0..3) {
        0 => random_structure(rng, &Signature::of(&[("Leq", 2)]), n, 0.5),
        1 => {
            let rank = random_partition(rng, n);
            let r = Relation::from_tuples(
                2,
                n,
                (0..n).flat_map(|i| (0..n).map(move |j| [i, j])).filter(|t| rank[t[0]] <= rank[t[1]]),
            )
            .expect("small");
            FiniteStructure::new(Signature::of(&[("Leq", 2)]), element_names(n), BTreeMap::from([("Leq".into(), r)]))
                .expect("well formed")
        }
        _ => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let tuples = (0..n).flat_map(|i| (i..n).map(move |j| [i, j])).map(|t| [perm[t[0]], perm[t[1]]]);
            let r = Relation::from_tuples(2, n, tuples).expect("small");
            FiniteStructure::new(Signature::of(&[("Leq", 2)]), element_names(n), BTreeMap::from([("Leq".into(), r)]))
                .expect("well formed")
        }
    }
}

/// A structure with an equivalence `E` that every other relation respects.
pub fn random_congruent<R: Rng>(rng: &mut R, sig: &Signature, n: usize) -> FiniteStructure {
    let block = random_partition(rng, n);
    let k = block.iter().max().map_or(0, |b| b + 1);
    let quotient = random_structure(rng, sig, k, 0.5);
    let mut rels: BTreeMap<String, Relation> = BTreeMap::new();
    for (name, arity) in sig.symbols() {
        let q = quotient.relation(name).unwrap();
        let mut r = Relation::empty(arity, n).expect("small");
        for i in 0..r.bits().len() {
            let t = r.decode(i);
            let image: Vec<usize> = t.iter().map(|&e| block[e]).collect();
            r.set_index(i, q.contains(&image));
        }
        rels.insert(name.to_owned(), r);
    }
    let eq = Relation::from_tuples(2, n, (0..n).flat_map(|i| (0..n).map(move |j| [i, j])).filter(|t| block[t[0]] == block[t[1]]))
        .expect("small");
    rels.insert("E".into(), eq);
    FiniteStructure::new(sig.with("E", 2).expect("E is free"), element_names(n), rels).expect("well formed")
}

fn atom<R: Rng>(rng: &mut R, sig: &Signature, bound: &[Var]) -> Formula {
    let symbols: Vec<(&str, usize)> = sig.symbols().collect();
    if symbols.is_empty() || rng.gen_bool(0.25) {
        let a = bound.choose(rng).unwrap().clone();
        let b = bound.choose(rng).unwrap().clone();
        return Formula::Eq(a, b);
    }
    let (name, arity) = *symbols.choose(rng).unwrap();
    Formula::atom_vars(name, (0..arity).map(|_| bound.choose(rng).unwrap().clone()).collect())
}

fn sentence_rec<R: Rng>(rng: &mut R, sig: &Signature, bound: &mut Vec<Var>, rank: usize, budget: usize) -> Formula {
    let quantify = rank > 0 && (bound.is_empty() || rng.gen_bool(0.45));
    if quantify {
        let v = Var::new(format!("x{}", bound.len()));
        bound.push(v.clone());
        let body = sentence_rec(rng, sig, bound, rank - 1, budget.saturating_sub(1));
        bound.pop();
        return if rng.gen_bool(0.5) {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        };
    }
    if bound.is_empty() {
        return if rng.gen_bool(0.5) { Formula::True } else { Formula::False };
    }
    if budget == 0 || rng.gen_bool(0.3) {
        return atom(rng, sig, bound);
    }
    let half = budget / 2;
    match rng.gen_range(0..5) {
        0 => Formula::not(sentence_rec(rng, sig, bound, rank, budget - 1)),
        1 => Formula::and(sentence_rec(rng, sig, bound, rank, half), sentence_rec(rng, sig, bound, rank, half)),
        2 => Formula::or(sentence_rec(rng, sig, bound, rank, half), sentence_rec(rng, sig, bound, rank, half)),
        3 => Formula::implies(sentence_rec(rng, sig, bound, rank, half), sentence_rec(rng, sig, bound, rank, half)),
        _ => Formula::iff(sentence_rec(rng, sig, bound, rank, half), sentence_rec(rng, sig, bound, rank, half)),
    }
}

/// A random sentence of quantifier rank at most `rank`.
pub fn random_sentence<R: Rng>(rng: &mut R, sig: &Signature, rank: usize) -> Formula {
    sentence_rec(rng, sig, &mut Vec::new(), rank, 8)
}

/// Translations from `{Leq:2}` to itself, with names.
pub fn translation_pool() -> Vec<(&'static str, Translation)> {
    let s = Signature::of(&[("Leq", 2)]);
    let t = |dim, delta, eta, leq| Translation::parse(s.clone(), s.clone(), dim, delta, eta, &[("Leq", leq)]).expect("pool entry parses");
    vec![
        ("identity", Translation::identity(&s)),
        ("reversal", t(1, "x1 = x1", "x1_1 = x2_1", "Leq(v2_1,v1_1)")),
        (
            "lex2",
            t(
                2,
                "x1 = x1 & x2 = x2",
                "x1_1 = x2_1 & x1_2 = x2_2",
                "(Leq(v1_1,v2_1) & ~v1_1 = v2_1) | (v1_1 = v2_1 & Leq(v1_2,v2_2))",
            ),
        ),
        ("strict", t(1, "x1 = x1", "x1_1 = x2_1", "Leq(v1_1,v2_1) & ~v1_1 = v2_1")),
        (
            "reflexive-part",
            t(1, "Leq(x1,x1)", "x1_1 = x2_1 & Leq(x1_1,x1_1)", "Leq(v1_1,v2_1) & Leq(v1_1,v1_1) & Leq(v2_1,v2_1)"),
        ),
        (
            "preorder-classes",
            t(
                1,
                "Leq(x1,x1)",
                "Leq(x1_1,x2_1) & Leq(x2_1,x1_1)",
                "Leq(v1_1,v2_1) & Leq(v1_1,v1_1) & Leq(v2_1,v2_1)",
            ),
        ),
        (
            "unordered-pairs",
            t(
                2,
                "x1 = x1 & x2 = x2",
                "(x1_1 = x2_1 & x1_2 = x2_2) | (x1_1 = x2_2 & x1_2 = x2_1)",
                "Leq(v1_1,v2_1) & Leq(v1_2,v2_2) & Leq(v1_1,v2_2) & Leq(v1_2,v2_1)",
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sentences_are_closed_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sig = Signature::of(&[("Leq", 2)]);
        for _ in 0..200 {
            let f = random_sentence(&mut rng, &sig, 3);
            assert!(f.is_sentence());
            assert!(f.quantifier_rank() <= 3);
        }
    }

    #[test]
    fn generators_are_seeded() {
        let sig = Signature::of(&[("A", 1), ("R", 2)]);
        let a = random_congruent(&mut ChaCha8Rng::seed_from_u64(1), &sig, 4);
        let b = random_congruent(&mut ChaCha8Rng::seed_from_u64(1), &sig, 4);
        assert_eq!(a, b);
        assert_eq!(translation_pool().len(), 7);
    }
}
