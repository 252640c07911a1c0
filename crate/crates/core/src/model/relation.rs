use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Largest dense table a relation may occupy.
pub const MAX_TABLE: usize = 1 << 24;

/// A k-ary relation over the elements `0..size`, stored as a dense table.
///
/// Table index of a tuple is its base-`size` numeral, so table order is
/// lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    size: usize,
    bits: Vec<bool>,
}

pub(crate) fn table_len(arity: usize, size: usize) -> Option<usize> {
    let mut n: usize = 1;
    for _ in 0..arity {
        n = n.checked_mul(size)?;
        if n > MAX_TABLE {
            return None;
        }
    }
    Some(n)
}

impl Relation {
    pub fn empty(arity: usize, size: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidArity);
        }
        let len = table_len(arity, size).ok_or_else(|| {
            Error::CapExceeded(format!("{size}^{arity} tuples exceed the table limit"))
        })?;
        Ok(Relation {
            arity,
            size,
            bits: vec![false; len],
        })
    }

    pub fn full(arity: usize, size: usize) -> Result<Self> {
        let mut r = Self::empty(arity, size)?;
        r.bits.iter_mut().for_each(|b| *b = true);
        Ok(r)
    }

    pub fn from_tuples<I>(arity: usize, size: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: AsRef<[usize]>,
    {
        let mut r = Self::empty(arity, size)?;
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity || t.iter().any(|&e| e >= size) {
                return Err(Error::InvalidStructure(format!(
                    "tuple {t:?} does not fit a {arity}-ary relation over {size} elements"
                )));
            }
            r.insert(t);
        }
        Ok(r)
    }

    /// Unary relation from a membership mask.
    pub fn from_mask(mask: &[bool]) -> Self {
        Relation {
            arity: 1,
            size: mask.len(),
            bits: mask.to_vec(),
        }
    }

    /// The identity relation on `elems`.
    pub fn diagonal(size: usize, elems: &[usize]) -> Result<Self> {
        Self::from_tuples(2, size, elems.iter().map(|&e| [e, e]))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &e| acc * self.size + e)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = idx % self.size;
            idx /= self.size;
        }
        t
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.bits[self.index(t)]
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits[idx]
    }

    pub fn insert(&mut self, t: &[usize]) {
        let i = self.index(t);
        self.bits[i] = true;
    }

    pub fn set_index(&mut self, idx: usize, value: bool) {
        self.bits[idx] = value;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Member table indices in increasing (lexicographic) order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        self.indices().map(|i| self.decode(i)).collect()
    }

    /// Elements of a unary relation.
    pub fn elements(&self) -> Vec<usize> {
        debug_assert_eq!(self.arity, 1);
        self.indices().collect()
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Every tuple has all entries in `dom`.
    pub fn within(&self, dom: &[bool]) -> bool {
        self.indices().all(|i| self.decode(i).iter().all(|&e| dom[e]))
    }

    /// Canonical order: fewer tuples first, then lexicographic on the
    /// sorted tuple lists.
    pub fn canonical_cmp(&self, other: &Relation) -> Ordering {
        self.arity
            .cmp(&other.arity)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

/// All subsets of `items`, by increasing size and then lexicographically.
pub(crate) fn subsets_canonical(items: &[usize]) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut out = Vec::with_capacity(1 << n.min(24));
    for k in 0..=n {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            out.push(comb.iter().map(|&i| items[i]).collect());
            // advance to the next k-combination in lex order
            let Some(i) = (0..k).rev().find(|&i| comb[i] != i + n - k) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    out
}
