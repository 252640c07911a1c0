use std::collections::{BTreeMap, HashMap};

use super::relation::Relation;
use super::structure::FiniteStructure;
use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature, Var, SCHEME_PREDICATE};

pub type Assignment = BTreeMap<Var, usize>;

#[derive(Debug, Clone)]
enum Node {
    True,
    False,
    Atom(usize, Vec<usize>),
    Pred(usize),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// What a compiled formula is evaluated against.
///
/// `rels` follows the signature's name order. `eq` replaces equality by a
/// binary relation, `pred` interprets P, and quantifiers range over `domain`.
#[derive(Clone, Copy)]
pub struct Frame<'a> {
    pub domain: &'a [usize],
    pub rels: &'a [&'a Relation],
    pub eq: Option<&'a Relation>,
    pub pred: Option<&'a [bool]>,
}

impl<'a> Frame<'a> {
    pub fn new(domain: &'a [usize], rels: &'a [&'a Relation]) -> Self {
        Frame {
            domain,
            rels,
            eq: None,
            pred: None,
        }
    }

    pub fn with_eq(mut self, eq: Option<&'a Relation>) -> Self {
        self.eq = eq;
        self
    }

    pub fn with_pred(mut self, pred: Option<&'a [bool]>) -> Self {
        self.pred = pred;
        self
    }
}

/// A formula resolved against a signature, with its free variables bound to
/// the first slots in a caller-chosen order.
#[derive(Debug, Clone)]
pub struct Compiled {
    root: Node,
    slots: usize,
    free: Vec<Var>,
}

struct Compiler<'s> {
    sig: &'s Signature,
    index: HashMap<&'s str, usize>,
    allow_p: bool,
    slots: usize,
}

impl Compiler<'_> {
    fn node(&mut self, f: &Formula, scope: &mut Vec<(Var, usize)>) -> Result<Node> {
        let slot = |v: &Var, scope: &[(Var, usize)]| {
            scope
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|&(_, s)| s)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))
        };
        Ok(match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Atom(s, args) if s == SCHEME_PREDICATE => {
                if !self.allow_p {
                    return Err(Error::UnknownSymbol(s.clone()));
                }
                if args.len() != 1 {
                    return Err(Error::ArityMismatch {
                        symbol: s.clone(),
                        expected: 1,
                        found: args.len(),
                    });
                }
                Node::Pred(slot(&args[0], scope)?)
            }
            Formula::Atom(s, args) => {
                let arity = self
                    .sig
                    .arity(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: s.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let slots = args.iter().map(|a| slot(a, scope)).collect::<Result<_>>()?;
                Node::Atom(self.index[s.as_str()], slots)
            }
            Formula::Eq(a, b) => Node::Eq(slot(a, scope)?, slot(b, scope)?),
            Formula::Not(g) => Node::Not(Box::new(self.node(g, scope)?)),
            Formula::And(a, b) => Node::And(Box::new(self.node(a, scope)?), Box::new(self.node(b, scope)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.node(a, scope)?), Box::new(self.node(b, scope)?)),
            Formula::Implies(a, b) => {
                Node::Implies(Box::new(self.node(a, scope)?), Box::new(self.node(b, scope)?))
            }
            Formula::Iff(a, b) => Node::Iff(Box::new(self.node(a, scope)?), Box::new(self.node(b, scope)?)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let s = self.slots;
                self.slots += 1;
                scope.push((v.clone(), s));
                let inner = self.node(body, scope);
                scope.pop();
                let inner = Box::new(inner?);
                if matches!(f, Formula::Forall(..)) {
                    Node::Forall(s, inner)
                } else {
                    Node::Exists(s, inner)
                }
            }
        })
    }
}

impl Compiled {
    /// Compiles `f` with `free` occupying slots `0..free.len()`. Every free
    /// variable of `f` must be listed.
    pub fn new(sig: &Signature, f: &Formula, free: &[Var], allow_p: bool) -> Result<Self> {
        let mut c = Compiler {
            sig,
            index: sig.symbols().enumerate().map(|(i, (n, _))| (n, i)).collect(),
            allow_p,
            slots: free.len(),
        };
        let mut scope: Vec<(Var, usize)> = free.iter().cloned().zip(0..).collect();
        let root = c.node(f, &mut scope)?;
        Ok(Compiled {
            root,
            slots: c.slots,
            free: free.to_vec(),
        })
    }

    /// Compiles with the formula's own free variables in first-occurrence order.
    pub fn of(sig: &Signature, f: &Formula, allow_p: bool) -> Result<Self> {
        Self::new(sig, f, &f.free_vars(), allow_p)
    }

    pub fn free(&self) -> &[Var] {
        &self.free
    }

    /// Evaluates with `values[i]` assigned to the i-th free variable.
    pub fn eval(&self, frame: &Frame, values: &[usize]) -> bool {
        debug_assert_eq!(values.len(), self.free.len());
        let mut env = vec![0; self.slots];
        env[..values.len()].copy_from_slice(values);
        holds(&self.root, frame, &mut env)
    }
}

fn holds(n: &Node, fr: &Frame, env: &mut [usize]) -> bool {
    match n {
        Node::True => true,
        Node::False => false,
        Node::Atom(r, args) => {
            let rel = fr.rels[*r];
            let idx = args.iter().fold(0, |acc, &s| acc * rel.size() + env[s]);
            rel.contains_index(idx)
        }
        Node::Pred(s) => fr.pred.is_some_and(|p| p[env[*s]]),
        Node::Eq(a, b) => match fr.eq {
            Some(eq) => eq.contains(&[env[*a], env[*b]]),
            None => env[*a] == env[*b],
        },
        Node::Not(g) => !holds(g, fr, env),
        Node::And(a, b) => holds(a, fr, env) && holds(b, fr, env),
        Node::Or(a, b) => holds(a, fr, env) || holds(b, fr, env),
        Node::Implies(a, b) => !holds(a, fr, env) || holds(b, fr, env),
        Node::Iff(a, b) => holds(a, fr, env) == holds(b, fr, env),
        Node::Forall(s, body) => fr.domain.iter().all(|&e| {
            env[*s] = e;
            holds(body, fr, env)
        }),
        Node::Exists(s, body) => fr.domain.iter().any(|&e| {
            env[*s] = e;
            holds(body, fr, env)
        }),
    }
}

/// Relations of `m` in signature name order, ready for a [`Frame`].
pub fn rel_table(m: &FiniteStructure) -> Vec<&Relation> {
    m.signature()
        .symbols()
        .map(|(n, _)| m.relation(n).expect("structure covers its signature"))
        .collect()
}

fn values_for(c: &Compiled, a: &Assignment, size: usize) -> Result<Vec<usize>> {
    c.free()
        .iter()
        .map(|v| match a.get(v) {
            Some(&e) if e < size => Ok(e),
            Some(&e) => Err(Error::InvalidStructure(format!("element {e} is out of range"))),
            None => Err(Error::UnboundVariable(v.to_string())),
        })
        .collect()
}

/// Standard satisfaction.
pub fn eval(m: &FiniteStructure, f: &Formula, a: &Assignment) -> Result<bool> {
    eval_with(m, f, a, None, None)
}

/// Satisfaction with equality read as `eq` (η-semantics) and P read as `pred`.
pub fn eval_with(
    m: &FiniteStructure,
    f: &Formula,
    a: &Assignment,
    eq: Option<&Relation>,
    pred: Option<&[bool]>,
) -> Result<bool> {
    let c = Compiled::of(m.signature(), f, pred.is_some())?;
    let values = values_for(&c, a, m.size())?;
    let rels = rel_table(m);
    let frame = Frame::new(m.elements(), &rels).with_eq(eq).with_pred(pred);
    Ok(c.eval(&frame, &values))
}

/// Evaluates a sentence with "=" reinterpreted by the binary formula `eta(x, y)`.
pub fn eval_eta(m: &FiniteStructure, sentence: &Formula, eta: &Formula) -> Result<bool> {
    let eq = eta_relation(m, eta)?;
    eval_with(m, sentence, &Assignment::new(), Some(&eq), None)
}

/// The binary relation `{(a, b) : m ⊨ eta[a, b]}` with `eta` over free `x`, `y`.
pub fn eta_relation(m: &FiniteStructure, eta: &Formula) -> Result<Relation> {
    binary_relation(m, eta, &Var::from("x"), &Var::from("y"))
}

pub(crate) fn binary_relation(m: &FiniteStructure, f: &Formula, x: &Var, y: &Var) -> Result<Relation> {
    let c = Compiled::new(m.signature(), f, &[x.clone(), y.clone()], false)?;
    let rels = rel_table(m);
    let frame = Frame::new(m.elements(), &rels);
    let n = m.size();
    let mut r = Relation::empty(2, n)?;
    for a in 0..n {
        for b in 0..n {
            if c.eval(&frame, &[a, b]) {
                r.insert(&[a, b]);
            }
        }
    }
    Ok(r)
}

/// Extension `{e : m ⊨ f[e]}` of a formula in one variable.
pub fn extension(m: &FiniteStructure, f: &Formula, x: &Var) -> Result<Vec<bool>> {
    let c = Compiled::new(m.signature(), f, std::slice::from_ref(x), false)?;
    let rels = rel_table(m);
    let frame = Frame::new(m.elements(), &rels);
    Ok((0..m.size()).map(|e| c.eval(&frame, &[e])).collect())
}
