use std::collections::BTreeMap;

use super::eval::rel_table;
use super::relation::Relation;
use super::structure::FiniteStructure;

/// A map from the universe of one structure to another, by element index.
pub type Perm = Vec<usize>;

// (relation, position, colours of the co-arguments)
type Neighbour = (usize, usize, Vec<usize>);

/// Joint colour refinement of two structures over the same signature.
///
/// Colours are comparable across the two sides; refinement stops once a round
/// splits no class.
fn refine(rels: [&[&Relation]; 2], mut colours: [Vec<usize>; 2]) -> [Vec<usize>; 2] {
    let mut classes = count_classes(&colours);
    loop {
        let mut keys: [Vec<(usize, Vec<Neighbour>)>; 2] = Default::default();
        for side in 0..2 {
            let col = &colours[side];
            let mut key: Vec<_> = col.iter().map(|&c| (c, Vec::new())).collect();
            for (ri, rel) in rels[side].iter().enumerate() {
                for idx in rel.indices() {
                    let t = rel.decode(idx);
                    let pattern: Vec<usize> = t.iter().map(|&e| col[e]).collect();
                    for (pos, &e) in t.iter().enumerate() {
                        key[e].1.push((ri, pos, pattern.clone()));
                    }
                }
            }
            for k in &mut key {
                k.1.sort_unstable();
            }
            keys[side] = key;
        }
        let mut ids = BTreeMap::new();
        for k in keys.iter().flatten() {
            ids.entry(k).or_insert(0);
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let next = [0, 1].map(|s| keys[s].iter().map(|k| ids[k]).collect::<Vec<_>>());
        let n = count_classes(&next);
        colours = next;
        if n == classes {
            return colours;
        }
        classes = n;
    }
}

fn count_classes(colours: &[Vec<usize>; 2]) -> usize {
    let mut all: Vec<usize> = colours.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

struct Search<'a> {
    r1: Vec<&'a Relation>,
    r2: Vec<&'a Relation>,
    c1: Vec<usize>,
    c2: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Element `i` was just mapped; check every tuple over `0..=i` that uses it.
    fn consistent(&self, i: usize) -> bool {
        for (a, b) in self.r1.iter().zip(&self.r2) {
            let k = a.arity();
            let mut t = vec![0; k];
            loop {
                if t.contains(&i) {
                    let u: Vec<usize> = t.iter().map(|&e| self.map[e]).collect();
                    if a.contains(&t) != b.contains(&u) {
                        return false;
                    }
                }
                // odometer over {0..=i}^k
                let Some(p) = (0..k).rev().find(|&p| t[p] < i) else {
                    break;
                };
                t[p] += 1;
                t[p + 1..].iter_mut().for_each(|x| *x = 0);
            }
        }
        true
    }

    fn run(&mut self, i: usize, found: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == self.map.len() {
            return found(&self.map);
        }
        for j in 0..self.c2.len() {
            if self.used[j] || self.c1[i] != self.c2[j] {
                continue;
            }
            self.map[i] = j;
            if self.consistent(i) {
                self.used[j] = true;
                let stop = self.run(i + 1, found);
                self.used[j] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

/// Calls `found` on each isomorphism extending `pairs`, in lexicographic
/// order, until it returns `true`.
fn for_each_iso(
    m1: &FiniteStructure,
    m2: &FiniteStructure,
    pairs: &[(usize, usize)],
    found: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = m1.size();
    if n != m2.size() || m1.signature() != m2.signature() {
        return;
    }
    let mut init = [vec![0; n], vec![0; n]];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        if init[0][a] != 0 || init[1][b] != 0 {
            // a repeated element must pair with a repeated element
            if init[0][a] != init[1][b] {
                return;
            }
            continue;
        }
        init[0][a] = k + 1;
        init[1][b] = k + 1;
    }
    let (r1, r2) = (rel_table(m1), rel_table(m2));
    let [c1, c2] = refine([&r1, &r2], init);
    let mut s = Search {
        r1,
        r2,
        c1,
        c2,
        map: vec![0; n],
        used: vec![false; n],
    };
    s.run(0, found);
}

/// The lexicographically least isomorphism, if any.
pub fn find_isomorphism(m1: &FiniteStructure, m2: &FiniteStructure) -> Option<Perm> {
    find_isomorphism_extending(m1, m2, &[])
}

/// The least isomorphism sending each `a` to its `b`.
pub fn find_isomorphism_extending(
    m1: &FiniteStructure,
    m2: &FiniteStructure,
    pairs: &[(usize, usize)],
) -> Option<Perm> {
    let mut out = None;
    for_each_iso(m1, m2, pairs, &mut |f| {
        out = Some(f.to_vec());
        true
    });
    out
}

/// The full automorphism group, lexicographically sorted.
pub fn automorphisms(m: &FiniteStructure) -> Vec<Perm> {
    let mut out = Vec::new();
    for_each_iso(m, m, &[], &mut |f| {
        out.push(f.to_vec());
        false
    });
    out
}

pub fn is_isomorphism(m1: &FiniteStructure, m2: &FiniteStructure, f: &[usize]) -> bool {
    let n = m1.size();
    if n != m2.size() || f.len() != n || m1.signature() != m2.signature() {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in f {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return false;
        }
    }
    m1.relations().iter().all(|(name, a)| {
        let b = m2.relation(name).expect("same signature");
        (0..a.bits().len()).all(|idx| {
            let t = a.decode(idx);
            let u: Vec<usize> = t.iter().map(|&e| f[e]).collect();
            a.contains_index(idx) == b.contains(&u)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;

    fn cycle(n: usize) -> FiniteStructure {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let succ = Relation::from_tuples(2, n, (0..n).map(|i| [i, (i + 1) % n])).unwrap();
        FiniteStructure::new(
            Signature::of(&[("Succ", 2)]),
            names,
            [("Succ".to_string(), succ)].into(),
        )
        .unwrap()
    }

    fn chain(n: usize, reversed: bool) -> FiniteStructure {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let leq = Relation::from_tuples(
            2,
            n,
            (0..n).flat_map(|i| (i..n).map(move |j| if reversed { [j, i] } else { [i, j] })),
        )
        .unwrap();
        FiniteStructure::new(Signature::of(&[("Leq", 2)]), names, [("Leq".to_string(), leq)].into()).unwrap()
    }

    #[test]
    fn automorphism_groups() {
        let set = FiniteStructure::new(Signature::default(), vec!["a".into(), "b".into(), "c".into()], BTreeMap::new())
            .unwrap();
        assert_eq!(automorphisms(&set).len(), 6);
        assert_eq!(automorphisms(&chain(3, false)), vec![vec![0, 1, 2]]);
        assert_eq!(
            automorphisms(&cycle(3)),
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]
        );
    }

    #[test]
    fn isomorphism_search() {
        let c = chain(3, false);
        assert_eq!(find_isomorphism(&c, &c), Some(vec![0, 1, 2]));
        assert_eq!(find_isomorphism(&c, &chain(3, true)), Some(vec![2, 1, 0]));
        assert_eq!(find_isomorphism(&cycle(3), &cycle(4)), None);
        assert!(is_isomorphism(&c, &chain(3, true), &[2, 1, 0]));
        assert!(!is_isomorphism(&c, &chain(3, true), &[0, 1, 2]));
    }

    #[test]
    fn extending_a_prescribed_pair() {
        let c = cycle(4);
        assert_eq!(find_isomorphism_extending(&c, &c, &[(0, 2)]), Some(vec![2, 3, 0, 1]));
        assert_eq!(find_isomorphism_extending(&c, &c, &[(0, 0), (1, 2)]), None);
        // repeated entries must match up
        assert_eq!(find_isomorphism_extending(&c, &c, &[(0, 1), (0, 2)]), None);
    }
}
