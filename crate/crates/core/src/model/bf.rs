use std::collections::HashSet;

use serde::Serialize;

use super::ef::partial_iso;
use super::eval::rel_table;
use super::structure::FiniteStructure;
use crate::caps::{ensure, Caps};
use crate::error::{Error, Result};

/// A family of finite partial isomorphisms, each a list of pairs sorted by
/// left element, closed under the back and forth extension properties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackAndForthSystem {
    pub maps: Vec<Vec<(usize, usize)>>,
}

type Map = Vec<(usize, usize)>;

fn with_pair(p: &Map, pair: (usize, usize)) -> Map {
    let mut q = p.clone();
    let i = q.partition_point(|&(a, _)| a < pair.0);
    q.insert(i, pair);
    q
}

/// Forth and back for `p` against the candidate family `sys`.
fn extendable(p: &Map, sys: &HashSet<Map>, n1: usize, n2: usize) -> bool {
    let forth = (0..n1).all(|a| {
        p.iter().any(|&(x, _)| x == a) || (0..n2).any(|b| sys.contains(&with_pair(p, (a, b))))
    });
    let back = (0..n2).all(|b| {
        p.iter().any(|&(_, y)| y == b) || (0..n1).any(|a| sys.contains(&with_pair(p, (a, b))))
    });
    forth && back
}

impl BackAndForthSystem {
    /// Re-checks membership of partial isomorphisms and both extension properties.
    pub fn verify(&self, m1: &FiniteStructure, m2: &FiniteStructure) -> bool {
        let (r1, r2) = (rel_table(m1), rel_table(m2));
        let sys: HashSet<Map> = self.maps.iter().cloned().collect();
        self.maps
            .iter()
            .all(|p| partial_iso(&r1, &r2, p) && extendable(p, &sys, m1.size(), m2.size()))
    }
}

/// The greatest back-and-forth system between `m1` and `m2`, or `None` when
/// the empty map is expelled. Both universes must fit `caps.max_bf_len`, so
/// every total map is representable and a nonempty answer means isomorphic.
pub fn bf_system(m1: &FiniteStructure, m2: &FiniteStructure, caps: &Caps) -> Result<Option<BackAndForthSystem>> {
    if m1.signature() != m2.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", m1.signature(), m2.signature())));
    }
    let (n1, n2) = (m1.size(), m2.size());
    ensure(n1.max(n2) <= caps.max_bf_len, || {
        format!("universes of size {} exceed the partial-map length limit {}", n1.max(n2), caps.max_bf_len)
    })?;
    let (r1, r2) = (rel_table(m1), rel_table(m2));

    // all partial isomorphisms, grown by increasing left element
    let mut sys: HashSet<Map> = HashSet::new();
    let mut frontier: Vec<Map> = vec![Vec::new()];
    while let Some(p) = frontier.pop() {
        let next_a = p.last().map_or(0, |&(a, _)| a + 1);
        for a in next_a..n1 {
            for b in 0..n2 {
                if p.iter().any(|&(_, y)| y == b) {
                    continue;
                }
                let q = with_pair(&p, (a, b));
                if partial_iso(&r1, &r2, &q) {
                    frontier.push(q);
                }
            }
        }
        sys.insert(p);
    }

    loop {
        let drop: Vec<Map> = sys.iter().filter(|p| !extendable(p, &sys, n1, n2)).cloned().collect();
        if drop.is_empty() {
            break;
        }
        for p in drop {
            sys.remove(&p);
        }
    }
    if !sys.contains(&Vec::new()) {
        return Ok(None);
    }
    let mut maps: Vec<Map> = sys.into_iter().collect();
    maps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(Some(BackAndForthSystem { maps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Relation;
    use crate::syntax::Signature;

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
    fn isomorphic_chains_have_a_system() {
        let (a, b) = (chain(3, false), chain(3, true));
        let sys = bf_system(&a, &b, &Caps::default()).unwrap().expect("isomorphic");
        assert!(sys.verify(&a, &b));
        assert!(sys.maps.contains(&vec![(0, 2), (1, 1), (2, 0)]));
        // rigid chains: every surviving map is a restriction of the reversal
        assert_eq!(sys.maps.len(), 8);
    }

    #[test]
    fn different_lengths_empty_out() {
        assert_eq!(bf_system(&chain(3, false), &chain(4, false), &Caps::default()).unwrap(), None);
    }

    #[test]
    fn size_cap() {
        let c = chain(8, false);
        assert!(matches!(bf_system(&c, &c, &Caps::default()), Err(Error::CapExceeded(_))));
    }
}
