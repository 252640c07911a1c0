use super::ClassFamily;
use crate::caps::Caps;
use crate::error::Result;
use crate::model::Relation;

/// One side of a witness search: a domain, its equality and the relations
/// the witness must preserve (paired by position with the other side).
#[derive(Debug, Clone, Copy)]
pub struct WitnessSide<'a> {
    pub dom: &'a [usize],
    pub eq: &'a Relation,
    pub rels: &'a [&'a Relation],
}

fn preserves(a: &WitnessSide, b: &WitnessSide, image: &dyn Fn(usize) -> usize, args: &[usize]) -> bool {
    a.rels.iter().zip(b.rels).all(|(r, s)| {
        let k = r.arity();
        let mut idx = vec![0; k];
        loop {
            let t: Vec<usize> = idx.iter().map(|&i| args[i]).collect();
            let u: Vec<usize> = t.iter().map(|&e| image(e)).collect();
            if r.contains(&t) != s.contains(&u) {
                return false;
            }
            let Some(p) = (0..k).rev().find(|&p| idx[p] + 1 < args.len()) else {
                return true;
            };
            idx[p] += 1;
            idx[p + 1..].iter_mut().for_each(|i| *i = 0);
        }
    })
}

/// Whether `f` induces a bijection between the `eq`-classes of the two
/// domains that preserves the paired relations. `f` must relate every element
/// of `a.dom` to something in `b.dom`.
pub fn is_witness(f: &Relation, a: &WitnessSide, b: &WitnessSide) -> bool {
    let pairs: Vec<(usize, usize)> = f.tuples().into_iter().map(|t| (t[0], t[1])).collect();
    let inside = |d: &[usize], e: usize| d.contains(&e);
    if pairs.iter().any(|&(x, y)| !inside(a.dom, x) || !inside(b.dom, y)) {
        return false;
    }
    let first = |x: usize| pairs.iter().find(|p| p.0 == x).map(|p| p.1);
    if a.dom.iter().any(|&x| first(x).is_none()) {
        return false;
    }
    for &(x, y) in &pairs {
        for &(x2, y2) in &pairs {
            if a.eq.contains(&[x, x2]) != b.eq.contains(&[y, y2]) {
                return false;
            }
        }
    }
    if !b.dom.iter().all(|&y| pairs.iter().any(|&(_, y2)| b.eq.contains(&[y2, y]))) {
        return false;
    }
    let image = |e: usize| first(e).expect("total");
    preserves(a, b, &image, a.dom)
}

/// Depth-first search over functions in lexicographic order; the first hit is
/// the canonically least witness in a full family.
fn least_function(size: usize, a: &WitnessSide, b: &WitnessSide) -> Option<Relation> {
    fn go(i: usize, f: &mut Vec<usize>, a: &WitnessSide, b: &WitnessSide) -> bool {
        if i == a.dom.len() {
            return b.dom.iter().all(|&y| f.iter().any(|&z| b.eq.contains(&[z, y])));
        }
        for &y in b.dom {
            let x = a.dom[i];
            let consistent = (0..i).all(|j| a.eq.contains(&[a.dom[j], x]) == b.eq.contains(&[f[j], y]))
                && a.eq.contains(&[x, x]) == b.eq.contains(&[y, y]);
            if !consistent {
                continue;
            }
            f.push(y);
            let args = &a.dom[..=i];
            let image = |e: usize| f[a.dom.iter().position(|&d| d == e).expect("assigned")];
            // only tuples that mention the new element are new
            if preserves_new(a, b, &image, args) && go(i + 1, f, a, b) {
                return true;
            }
            f.pop();
        }
        false
    }
    let mut f = Vec::new();
    go(0, &mut f, a, b).then(|| {
        Relation::from_tuples(2, size, a.dom.iter().zip(&f).map(|(&x, &y)| [x, y])).expect("in range")
    })
}

fn preserves_new(a: &WitnessSide, b: &WitnessSide, image: &dyn Fn(usize) -> usize, args: &[usize]) -> bool {
    let last = args.len() - 1;
    a.rels.iter().zip(b.rels).all(|(r, s)| {
        let k = r.arity();
        let mut idx = vec![0; k];
        loop {
            if idx.contains(&last) {
                let t: Vec<usize> = idx.iter().map(|&i| args[i]).collect();
                let u: Vec<usize> = t.iter().map(|&e| image(e)).collect();
                if r.contains(&t) != s.contains(&u) {
                    return false;
                }
            }
            let Some(p) = (0..k).rev().find(|&p| idx[p] < last) else {
                return true;
            };
            idx[p] += 1;
            idx[p + 1..].iter_mut().for_each(|i| *i = 0);
        }
    })
}

/// The canonically least binary class that is a witness from `a` to `b`.
pub fn find_witness(
    classes: &ClassFamily,
    size: usize,
    a: &WitnessSide,
    b: &WitnessSide,
    caps: &Caps,
) -> Result<Option<Relation>> {
    match classes {
        ClassFamily::Full(k) if *k >= 2 => Ok(least_function(size, a, b)),
        ClassFamily::Full(_) => Ok(None),
        ClassFamily::Explicit(_) => {
            let mut span = a.dom.to_vec();
            span.extend_from_slice(b.dom);
            span.sort_unstable();
            span.dedup();
            Ok(classes
                .members_within(2, size, &span, caps)?
                .into_iter()
                .find(|f| is_witness(f, a, b)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn cycle(size: usize, dom: &[usize]) -> Relation {
        let k = dom.len();
        Relation::from_tuples(2, size, (0..k).map(|i| [dom[i], dom[(i + 1) % k]])).unwrap()
    }

    #[test]
    fn full_and_explicit_agree_on_cycles() {
        let caps = Caps::default();
        let (d1, d2) = ([0, 1, 2], [1, 2, 3]);
        let e1 = Relation::diagonal(4, &d1).unwrap();
        let e2 = Relation::diagonal(4, &d2).unwrap();
        let (c1, c2) = (cycle(4, &d1), cycle(4, &d2));
        let r1 = [&c1];
        let r2 = [&c2];
        let a = WitnessSide { dom: &d1, eq: &e1, rels: &r1 };
        let b = WitnessSide { dom: &d2, eq: &e2, rels: &r2 };
        let full = find_witness(&ClassFamily::Full(2), 4, &a, &b, &caps).unwrap().unwrap();
        assert_eq!(full.tuples(), vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert!(is_witness(&full, &a, &b));
        let all = ClassFamily::explicit(BTreeMap::from([(2, ClassFamily::Full(2).members(2, 4, &caps).unwrap())])).unwrap();
        assert_eq!(find_witness(&all, 4, &a, &b, &caps).unwrap(), Some(full));
        let none = ClassFamily::explicit(BTreeMap::from([(2, vec![])])).unwrap();
        assert_eq!(find_witness(&none, 4, &a, &b, &caps).unwrap(), None);
    }

    #[test]
    fn classes_modulo_equality() {
        // a 2-element domain collapsed to one class against a singleton
        let d1 = [0, 1];
        let d2 = [2];
        let e1 = Relation::full(2, 3).unwrap();
        let e1 = Relation::from_tuples(2, 3, e1.tuples().into_iter().filter(|t| t[0] < 2 && t[1] < 2)).unwrap();
        let e2 = Relation::diagonal(3, &d2).unwrap();
        let a = WitnessSide { dom: &d1, eq: &e1, rels: &[] };
        let b = WitnessSide { dom: &d2, eq: &e2, rels: &[] };
        let f = find_witness(&ClassFamily::Full(2), 3, &a, &b, &Caps::default()).unwrap().unwrap();
        assert_eq!(f.tuples(), vec![vec![0, 2], vec![1, 2]]);
        let back = find_witness(&ClassFamily::Full(2), 3, &b, &a, &Caps::default()).unwrap().unwrap();
        assert_eq!(back.tuples(), vec![vec![2, 0]]);
    }
}
