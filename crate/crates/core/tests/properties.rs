use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wb_core::corpus::gen::{random_structure, translation_pool};
use wb_core::interp::{compose, flags};
use wb_core::lab::{
    check_definite, find_witness, is_witness, x_strong_models, ClassFamily, Counterexample, ModelTuple, SOStructure,
    WitnessSide,
};
use wb_core::model::{
    eval, eval_with, find_isomorphism, invariant_relations, strong_model_check, Assignment, FiniteStructure,
};
use wb_core::scheme::{build_cycle, build_ind, instances_up_to, mk_instance, DefinitenessKind, Scheme};
use wb_core::syntax::{
    alpha_equal, parse, print, substitute_predicate, universal_closure, Formula, Signature, Var,
};
use wb_core::Caps;

fn sig() -> Signature {
    Signature::of(&[("A", 1), ("R", 2)])
}

fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(vec!["x", "y", "z"]).prop_map(Var::from)
}

fn formula(with_p: bool) -> impl Strategy<Value = Formula> {
    let mut leaves = vec![
        Just(Formula::True).boxed(),
        Just(Formula::False).boxed(),
        (var(), var()).prop_map(|(a, b)| Formula::Eq(a, b)).boxed(),
        var().prop_map(|a| Formula::atom_vars("A", vec![a])).boxed(),
        (var(), var()).prop_map(|(a, b)| Formula::atom_vars("R", vec![a, b])).boxed(),
    ];
    if with_p {
        leaves.push(var().prop_map(|a| Formula::atom_vars("P", vec![a])).boxed());
    }
    prop::strategy::Union::new(leaves).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            (var(), inner).prop_map(|(v, b)| Formula::exists(v, b)),
        ]
    })
}

fn structure() -> impl Strategy<Value = FiniteStructure> {
    (1..=3usize, any::<u64>()).prop_map(|(n, seed)| random_structure(&mut ChaCha8Rng::seed_from_u64(seed), &sig(), n, 0.5))
}

fn assignment(m: &FiniteStructure, values: [usize; 3]) -> Assignment {
    ["x", "y", "z"].iter().zip(values).map(|(v, i)| (Var::from(*v), i % m.size())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_round_trips(f in formula(true)) {
        let back = parse(&print(&f), &sig(), true).unwrap();
        prop_assert!(alpha_equal(&back, &f), "{} vs {}", print(&f), print(&back));
    }

    #[test]
    fn closures_are_sentences(f in formula(true)) {
        prop_assert!(universal_closure(&f).free_vars().is_empty());
    }

    #[test]
    fn substitution_agrees_with_reading_p(
        m in structure(),
        sigma in formula(true),
        phi in formula(false),
        values in any::<[usize; 3]>(),
    ) {
        let x = Var::from("x");
        let phi = Formula::and(phi, Formula::eq("x", "x"));
        let a = assignment(&m, values);
        let mask: Vec<bool> = (0..m.size())
            .map(|e| {
                let mut b = a.clone();
                b.insert(x.clone(), e);
                eval(&m, &phi, &b).unwrap()
            })
            .collect();
        let substituted = substitute_predicate(&sigma, &phi, &x).unwrap();
        prop_assert_eq!(
            eval(&m, &substituted, &a).unwrap(),
            eval_with(&m, &sigma, &a, None, Some(&mask)).unwrap()
        );
    }

    #[test]
    fn instances_agree_with_class_semantics(m in structure(), body in formula(true), phi in formula(false)) {
        let s = Scheme::new(sig(), universal_closure(&body)).unwrap();
        let phi = Formula::and(Formula::eq("x", "x"), phi);
        let phi = Formula::forall(Var::from("z"), phi);
        let x = Var::from("x");
        let instance = mk_instance(&s, &phi, &x).unwrap();
        let every_parameter = (0..m.size()).all(|p| {
            let mask: Vec<bool> = (0..m.size())
                .map(|e| eval(&m, &phi, &[(x.clone(), e), (Var::from("y"), p)].into()).unwrap())
                .collect();
            eval_with(&m, s.body(), &Assignment::new(), None, Some(&mask)).unwrap()
        });
        prop_assert_eq!(eval(&m, &instance, &Assignment::new()).unwrap(), every_parameter);
    }

    #[test]
    fn strong_models_satisfy_every_invariant_class(n in 1..=4usize, seed in any::<u64>()) {
        let ind = build_ind();
        let m = random_structure(&mut ChaCha8Rng::seed_from_u64(seed), ind.sig(), n, 0.4);
        let caps = Caps::default();
        if strong_model_check(&m, None, &ind, &caps).unwrap().is_none() {
            for y in invariant_relations(&m, 1, &caps).unwrap() {
                prop_assert!(eval_with(&m, ind.body(), &Assignment::new(), None, Some(y.bits())).unwrap());
            }
        }
    }
}

#[test]
fn instance_lists_grow_without_alpha_duplicates() {
    let ind = build_ind();
    let mut previous: Vec<Formula> = Vec::new();
    for depth in 1..=3 {
        let now = instances_up_to(&ind, depth, false).unwrap();
        for (i, f) in now.iter().enumerate() {
            assert!(now[..i].iter().all(|g| !alpha_equal(f, g)));
        }
        assert!(previous.iter().all(|f| now.iter().any(|g| alpha_equal(f, g))));
        previous = now;
    }
}

#[test]
fn composed_dimensions_multiply() {
    let pool = translation_pool();
    for (_, t) in &pool {
        for (_, u) in &pool {
            let tu = compose(t, u).unwrap();
            assert_eq!(flags(&tu).dimension, flags(t).dimension * flags(u).dimension);
        }
    }
}

fn pure_set(n: usize) -> FiniteStructure {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteStructure::from_named(Signature::default(), &names, &[]).unwrap()
}

fn side<'a>(t: &'a ModelTuple, rels: &'a [&'a wb_core::model::Relation]) -> WitnessSide<'a> {
    WitnessSide {
        dom: &t.dom,
        eq: &t.eq,
        rels,
    }
}

#[test]
fn iso_counterexamples_have_no_witness_in_the_family() {
    let caps = Caps::default();
    let so = SOStructure::new(pure_set(3), ClassFamily::Full(2), &caps).unwrap();
    let tau = build_cycle();
    let v = check_definite(&so, &tau, &DefinitenessKind::Iso, &caps).unwrap();
    let Some(Counterexample::Pair { left, right, .. }) = &v.counterexample else { panic!("iso should fail") };
    let (lr, rr) = (left.rel_table(), right.rel_table());
    let every_binary = ClassFamily::Full(2).members(2, 3, &caps).unwrap();
    assert!(every_binary.iter().all(|f| !is_witness(f, &side(left, &lr), &side(right, &rr))));
    let iec = DefinitenessKind::InEveryCardinality(Box::new(DefinitenessKind::Iso));
    assert!(check_definite(&so, &tau, &iec, &caps).unwrap().holds);
}

#[test]
fn full_families_find_witnesses_exactly_for_isomorphic_pairs() {
    let caps = Caps::default();
    let so = SOStructure::new(pure_set(3), ClassFamily::Full(2), &caps).unwrap();
    let tau = build_cycle();
    let absolute: Vec<ModelTuple> = x_strong_models(&so, &tau, &caps)
        .unwrap()
        .into_iter()
        .filter(|t| t.eq.len() == t.dom.len())
        .collect();
    assert!(absolute.len() > 2);
    for a in &absolute {
        for b in &absolute {
            let (ar, br) = (a.rel_table(), b.rel_table());
            let witness = find_witness(&so.classes, 3, &side(a, &ar), &side(b, &br), &caps).unwrap();
            let standalone = |t: &ModelTuple| t.materialize(&so.ground, tau.sig(), "Eq").unwrap().reduct(tau.sig()).unwrap();
            assert_eq!(witness.is_some(), find_isomorphism(&standalone(a), &standalone(b)).is_some());
        }
    }
}
