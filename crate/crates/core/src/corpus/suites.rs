use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gen::{chain, element_names, random_congruent, random_leq, random_sentence, random_structure, translation_pool};
use super::oracles::{agree_up_to_rank, definable_subsets, linear_order_law, x_strong_models_naive};
use super::{case_seed, run_cases, CorpusConfig, Outcome};
use crate::interp::{apply, compose, validate_on_model, Translation};
use crate::lab::{mk_defpf_family, x_strong_models, ClassFamily, SOStructure};
use crate::model::quotient as quotient_of;
use crate::model::{
    bf_system, ef_game, eval, eval_eta, find_isomorphism, internal_model, invariant_relations, Assignment,
    FiniteStructure, Player,
};
use crate::scheme::{build_cycle, build_ind, Scheme};
use crate::syntax::{parse, print, Signature};

fn rng(cfg: &CorpusConfig, suite: &str, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case_seed(cfg.seed, suite, i))
}

fn usable(m: &FiniteStructure, t: &Translation) -> bool {
    validate_on_model(t, m).is_ok_and(|r| r.is_clean() && !r.empty_domain)
}

/// A `{Leq:2}` structure of size `1..=max` on which `t` is a proper
/// interpretation; chains serve when sampling keeps missing.
fn sample_for<R: Rng>(rng: &mut R, t: &Translation, max: usize) -> FiniteStructure {
    for _ in 0..20 {
        let n = rng.gen_range(1..=max);
        let m = random_leq(rng, n);
        if usable(&m, t) {
            return m;
        }
    }
    chain(rng.gen_range(1..=max), "Leq")
}

pub(super) fn translation_lemma(cfg: &CorpusConfig, count: usize) -> Vec<Outcome> {
    let pool = translation_pool();
    let leq = Signature::of(&[("Leq", 2)]);
    run_cases(count, |i| {
        let mut rng = rng(cfg, "translation-lemma", i);
        let (name, t) = &pool[i % pool.len()];
        let m = sample_for(&mut rng, t, 5);
        let rank = rng.gen_range(0..=3);
        let sigma = random_sentence(&mut rng, &leq, rank);
        Outcome::settle((|| {
            let outer = eval(&m, &apply(t, &sigma)?, &Assignment::new())?;
            let inner = internal_model(&m, t, false)?.satisfies(&sigma)?;
            let collapsed = internal_model(&m, t, true)?.satisfies(&sigma)?;
            Ok((outer != inner || inner != collapsed).then(|| {
                format!("{name} on {} elements, `{}`: {outer} {inner} {collapsed}", m.size(), print(&sigma))
            }))
        })())
    })
}

pub(super) fn composition(cfg: &CorpusConfig, count: usize) -> Vec<Outcome> {
    let pool = translation_pool();
    let leq = Signature::of(&[("Leq", 2)]);
    run_cases(count, |i| {
        let mut rng = rng(cfg, "composition", i);
        let mut pick = None;
        for _ in 0..40 {
            let (tn, t) = &pool[rng.gen_range(0..pool.len())];
            let (un, u) = &pool[rng.gen_range(0..pool.len())];
            let max = if t.dim() * u.dim() >= 4 { 2 } else { 4 };
            let n = rng.gen_range(1..=max);
            let m = random_leq(&mut rng, n);
            if !usable(&m, t) {
                continue;
            }
            let Ok(mid) = internal_model(&m, t, true) else { continue };
            if usable(&mid.structure, u) {
                pick = Some((*tn, t, *un, u, m, mid.structure));
                break;
            }
        }
        let (tn, t, un, u, m, mid) = pick.unwrap_or_else(|| {
            let (tn, t) = &pool[0];
            let m = chain(3, "Leq");
            (*tn, t, *tn, t, m.clone(), m)
        });
        let rank = rng.gen_range(0..=if t.dim() * u.dim() >= 4 { 2 } else { 3 });
        let sigma = random_sentence(&mut rng, &leq, rank);
        Outcome::settle((|| {
            let tu = compose(t, u)?;
            let a = eval(&m, &apply(&tu, &sigma)?, &Assignment::new())?;
            let b = eval(&m, &apply(t, &apply(u, &sigma)?)?, &Assignment::new())?;
            if a != b {
                return Ok(Some(format!("{tn} after {un}, `{}`: {a} vs {b}", print(&sigma))));
            }
            let direct = internal_model(&m, &tu, true)?.structure;
            let nested = internal_model(&mid, u, true)?.structure;
            Ok(find_isomorphism(&direct, &nested)
                .is_none()
                .then(|| format!("{tn} after {un}: internal models of sizes {} and {} differ", direct.size(), nested.size())))
        })())
    })
}

/// The four chains followed by seeded random `{E:2}` structures.
pub(crate) fn ef_fixtures(seed: u64, count: usize) -> Vec<FiniteStructure> {
    let sig = Signature::of(&[("E", 2)]);
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, "ef-fixtures", 0));
    (0..count)
        .map(|i| {
            if i < 4 {
                chain(i + 1, "E")
            } else {
                let n = rng.gen_range(1..=4);
                let density = [0.25, 0.5, 0.75][i % 3];
                random_structure(&mut rng, &sig, n, density)
            }
        })
        .collect()
}

pub(super) fn ef_bridge(cfg: &CorpusConfig, count: usize) -> Vec<Outcome> {
    let fixtures = ef_fixtures(cfg.seed, count);
    let pairs: Vec<(usize, usize)> = (0..count).flat_map(|i| (i..count).map(move |j| (i, j))).collect();
    run_cases(pairs.len(), |c| {
        let (i, j) = pairs[c];
        let (a, b) = (&fixtures[i], &fixtures[j]);
        Outcome::settle((|| {
            for k in 0..=2 {
                let game = ef_game(a, b, k)?.winner == Player::Duplicator;
                if game != agree_up_to_rank(a, b, k) {
                    return Ok(Some(format!("fixtures {i} and {j}, {k} rounds: game says {game}")));
                }
            }
            let bf = bf_system(a, b, &cfg.caps)?.is_some();
            Ok((bf != find_isomorphism(a, b).is_some())
                .then(|| format!("fixtures {i} and {j}: back-and-forth says {bf}")))
        })())
    })
}

pub(super) fn linear_order(_cfg: &CorpusConfig, max: usize) -> Vec<Outcome> {
    let sizes: Vec<(usize, usize)> = (2..=max).flat_map(|m| (2..=max).map(move |n| (m, n))).collect();
    run_cases(sizes.len(), |c| {
        let (m, n) = sizes[c];
        Outcome::settle((|| {
            for k in 0..=3u32 {
                let game = ef_game(&chain(m, "Leq"), &chain(n, "Leq"), k as usize)?.winner == Player::Duplicator;
                if game != linear_order_law(m, n, k) {
                    return Ok(Some(format!("chains {m} and {n}, {k} rounds: game says {game}")));
                }
            }
            Ok(None)
        })())
    })
}

pub(crate) fn definability_signatures() -> Vec<Signature> {
    vec![
        Signature::default(),
        Signature::of(&[("A", 1)]),
        Signature::of(&[("A", 1), ("B", 1)]),
        Signature::of(&[("R", 2)]),
        Signature::of(&[("A", 1), ("R", 2)]),
        Signature::of(&[("A", 1), ("B", 1), ("R", 2)]),
    ]
}

pub(super) fn definability(cfg: &CorpusConfig, count: usize) -> Vec<Outcome> {
    let sigs = definability_signatures();
    run_cases(count, |i| {
        let mut rng = rng(cfg, "definability", i);
        let sig = &sigs[i % sigs.len()];
        let n = 1 + (i / sigs.len()) % 3;
        let m = random_structure(&mut rng, sig, n, 0.5);
        Outcome::settle((|| {
            let orbits = invariant_relations(&m, 1, &cfg.caps)?;
            let oracle = definable_subsets(&m, n);
            Ok((orbits != oracle).then(|| {
                format!("over {sig} with {n} elements: {} invariant vs {} definable", orbits.len(), oracle.len())
            }))
        })())
    })
}

pub(super) fn quotient(cfg: &CorpusConfig, count: usize) -> Vec<Outcome> {
    let sigs = [
        Signature::of(&[("A", 1)]),
        Signature::of(&[("R", 2)]),
        Signature::of(&[("A", 1), ("R", 2)]),
    ];
    let etas = ["E(x,y)", "E(y,x)", "E(x,y) & E(y,x)", "ex z. (E(x,z) & E(z,y))"];
    run_cases(count, |i| {
        let mut rng = rng(cfg, "quotient", i);
        let sig = &sigs[i % sigs.len()];
        let n = rng.gen_range(1..=5);
        let m = random_congruent(&mut rng, sig, n);
        let eta = parse(etas[rng.gen_range(0..etas.len())], m.signature(), false).expect("fixed text");
        let rank = rng.gen_range(0..=3);
        let sigma = random_sentence(&mut rng, m.signature(), rank);
        Outcome::settle((|| {
            let a = eval_eta(&m, &sigma, &eta)?;
            let b = eval(&quotient_of(&m, &eta)?, &sigma, &Assignment::new())?;
            Ok((a != b).then(|| format!("`{}` modulo `{}`: {a} vs {b}", print(&sigma), print(&eta))))
        })())
    })
}

fn cycle_ground(n: usize) -> FiniteStructure {
    let names = element_names(n);
    let succ: Vec<Vec<&str>> = (0..n).map(|i| vec![names[i].as_str(), names[(i + 1) % n].as_str()]).collect();
    let succ: Vec<&[&str]> = succ.iter().map(Vec::as_slice).collect();
    let mut sig = Signature::of(&[("Succ", 2)]);
    let mut rels: Vec<(&str, &[&[&str]])> = vec![("Succ", &succ)];
    let zero: [&[&str]; 1] = [&[names[0].as_str()]];
    if n == 3 {
        sig = sig.with("Zero", 1).expect("fresh");
        rels.push(("Zero", &zero));
    }
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteStructure::from_named(sig, &names, &rels).expect("well formed")
}

fn pure_set(n: usize) -> FiniteStructure {
    let names = element_names(n);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteStructure::from_named(Signature::default(), &names, &[]).expect("well formed")
}

/// Grounds, class families and schemes small enough for brute force.
pub(crate) fn enumeration_fixtures(cfg: &CorpusConfig) -> Vec<(String, SOStructure, Scheme)> {
    let full = |g: FiniteStructure| SOStructure::new(g, ClassFamily::Full(2), &cfg.caps);
    let defpf = |g: FiniteStructure| {
        let f = mk_defpf_family(&g, 2, &cfg.caps)?;
        SOStructure::new(g, f, &cfg.caps)
    };
    let entries = [
        ("cycle scheme, pure 2-set, Full(2)", full(pure_set(2)), build_cycle()),
        ("cycle scheme, pure 3-set, Full(2)", full(pure_set(3)), build_cycle()),
        ("induction, pure 3-set, Full(2)", full(pure_set(3)), build_ind()),
        ("induction, 3-cycle with zero, Defpf(2)", defpf(cycle_ground(3)), build_ind()),
        ("cycle scheme, pure 4-set, Defpf(2)", defpf(pure_set(4)), build_cycle()),
        ("cycle scheme, 4-cycle, Defpf(2)", defpf(cycle_ground(4)), build_cycle()),
    ];
    entries
        .into_iter()
        .filter_map(|(name, so, tau)| so.ok().map(|so| (name.to_owned(), so, tau)))
        .collect()
}

pub(super) fn enumeration(cfg: &CorpusConfig, count: usize) -> Vec<Outcome> {
    let fixtures = enumeration_fixtures(cfg);
    run_cases(fixtures.len().min(count), |i| {
        let (name, so, tau) = &fixtures[i];
        Outcome::settle((|| {
            let fast = x_strong_models(so, tau, &cfg.caps)?;
            let naive = x_strong_models_naive(so, tau, &cfg.caps)?;
            Ok((fast != naive).then(|| format!("{name}: {} models vs {} by brute force", fast.len(), naive.len())))
        })())
    })
}
