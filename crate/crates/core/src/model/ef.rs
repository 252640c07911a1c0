use std::collections::HashMap;

use serde::Serialize;

use super::eval::rel_table;
use super::relation::Relation;
use super::structure::FiniteStructure;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Player {
    Duplicator,
    Spoiler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One round: Spoiler picks `spoiler` in `side`, Duplicator answers in the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Move {
    pub side: Side,
    pub spoiler: String,
    pub duplicator: String,
}

/// Game value with a principal line of play: Spoiler's first (or first
/// winning) move each round, answered by Duplicator's first winning (or
/// first) reply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EfOutcome {
    pub winner: Player,
    pub rounds: usize,
    pub trace: Vec<Move>,
}

type Pos = Vec<(usize, usize)>;

/// Whether the pairs form a partial isomorphism.
pub(crate) fn partial_iso(r1: &[&Relation], r2: &[&Relation], pairs: &[(usize, usize)]) -> bool {
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[..i] {
            if (a == c) != (b == d) {
                return false;
            }
        }
    }
    let p = pairs.len();
    for (x, y) in r1.iter().zip(r2) {
        let k = x.arity();
        if p == 0 {
            continue;
        }
        let mut sel = vec![0; k];
        loop {
            let t: Vec<usize> = sel.iter().map(|&i| pairs[i].0).collect();
            let u: Vec<usize> = sel.iter().map(|&i| pairs[i].1).collect();
            if x.contains(&t) != y.contains(&u) {
                return false;
            }
            let Some(q) = (0..k).rev().find(|&q| sel[q] + 1 < p) else {
                break;
            };
            sel[q] += 1;
            sel[q + 1..].iter_mut().for_each(|s| *s = 0);
        }
    }
    true
}

struct Game<'a> {
    r1: Vec<&'a Relation>,
    r2: Vec<&'a Relation>,
    n1: usize,
    n2: usize,
    memo: HashMap<(Pos, usize), bool>,
}

fn extend(pos: &Pos, pair: (usize, usize)) -> Pos {
    let mut next = pos.clone();
    if let Err(i) = next.binary_search(&pair) {
        next.insert(i, pair);
    }
    next
}

impl Game<'_> {
    fn duplicator_wins(&mut self, pos: &Pos, k: usize) -> bool {
        if let Some(&v) = self.memo.get(&(pos.clone(), k)) {
            return v;
        }
        let v = partial_iso(&self.r1, &self.r2, pos) && (k == 0 || self.survives_all(pos, k));
        self.memo.insert((pos.clone(), k), v);
        v
    }

    fn survives_all(&mut self, pos: &Pos, k: usize) -> bool {
        (0..self.n1).all(|a| self.reply(pos, k, Side::Left, a).is_some())
            && (0..self.n2).all(|b| self.reply(pos, k, Side::Right, b).is_some())
    }

    /// Duplicator's first winning reply to Spoiler playing `e` in `side`.
    fn reply(&mut self, pos: &Pos, k: usize, side: Side, e: usize) -> Option<usize> {
        let n = if side == Side::Left { self.n2 } else { self.n1 };
        (0..n).find(|&r| {
            let pair = if side == Side::Left { (e, r) } else { (r, e) };
            self.duplicator_wins(&extend(pos, pair), k - 1)
        })
    }
}

/// Solves the `k`-round Ehrenfeucht–Fraïssé game exactly.
pub fn ef_game(m1: &FiniteStructure, m2: &FiniteStructure, k: usize) -> Result<EfOutcome> {
    if m1.signature() != m2.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", m1.signature(), m2.signature())));
    }
    let mut g = Game {
        r1: rel_table(m1),
        r2: rel_table(m2),
        n1: m1.size(),
        n2: m2.size(),
        memo: HashMap::new(),
    };
    let start: Pos = Vec::new();
    let winner = if g.duplicator_wins(&start, k) {
        Player::Duplicator
    } else {
        Player::Spoiler
    };

    let mut trace = Vec::new();
    let mut pos = start;
    for left in (1..=k).rev() {
        if !partial_iso(&g.r1, &g.r2, &pos) {
            break;
        }
        let moves = (0..g.n1).map(|a| (Side::Left, a)).chain((0..g.n2).map(|b| (Side::Right, b)));
        let moves: Vec<(Side, usize)> = moves.collect();
        let chosen = match winner {
            Player::Duplicator => moves[0],
            Player::Spoiler => *moves
                .iter()
                .find(|&&(s, e)| g.reply(&pos, left, s, e).is_none())
                .expect("Spoiler has a winning move"),
        };
        let (side, e) = chosen;
        let r = g.reply(&pos, left, side, e).unwrap_or(0);
        let (a, b) = if side == Side::Left { (e, r) } else { (r, e) };
        trace.push(Move {
            side,
            spoiler: if side == Side::Left { m1.name(a) } else { m2.name(b) }.to_owned(),
            duplicator: if side == Side::Left { m2.name(b) } else { m1.name(a) }.to_owned(),
        });
        pos = extend(&pos, (a, b));
    }
    Ok(EfOutcome {
        winner,
        rounds: k,
        trace,
    })
}
