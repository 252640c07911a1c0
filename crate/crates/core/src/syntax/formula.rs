use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::signature::{Signature, SCHEME_PREDICATE};
use crate::error::{Error, Result};

/// An individual variable, `[a-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_owned())
    }
}

impl From<String> for Var {
    fn from(s: String) -> Self {
        Var(s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) const KEYWORDS: [&str; 4] = ["all", "ex", "true", "false"];

pub fn is_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&name)
}

/// Relational first-order formulas with equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Var>),
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(symbol: &str, args: &[&str]) -> Self {
        Formula::Atom(symbol.to_owned(), args.iter().map(|&a| Var::from(a)).collect())
    }

    pub fn atom_vars(symbol: &str, args: Vec<Var>) -> Self {
        Formula::Atom(symbol.to_owned(), args)
    }

    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn forall_many(vars: &[Var], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.clone(), acc))
    }

    pub fn exists_many(vars: &[Var], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.clone(), acc))
    }

    /// Splits a left-nested conjunction into its conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut out = a.conjuncts();
                out.push(b);
                out
            }
            other => vec![other],
        }
    }

    /// Variables with a free occurrence, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Var> {
        fn go(f: &Formula, bound: &mut Vec<Var>, seen: &mut BTreeSet<Var>, out: &mut Vec<Var>) {
            let mut note = |v: &Var, bound: &Vec<Var>| {
                if !bound.contains(v) && seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            };
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(_, args) => args.iter().for_each(|v| note(v, bound)),
                Formula::Eq(a, b) => {
                    note(a, bound);
                    note(b, bound);
                }
                Formula::Not(g) => go(g, bound, seen, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    go(a, bound, seen, out);
                    go(b, bound, seen, out);
                }
                Formula::Forall(v, g) | Formula::Exists(v, g) => {
                    bound.push(v.clone());
                    go(g, bound, seen, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut BTreeSet::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, args) => out.extend(args.iter().cloned()),
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Number of AST nodes; variables are not counted as nodes.
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 0,
            Formula::Not(g) => g.quantifier_rank(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => 1 + g.quantifier_rank(),
        }
    }

    /// Relation symbols used, with the argument counts seen.
    pub fn symbols(&self) -> BTreeMap<String, BTreeSet<usize>> {
        let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        self.visit(&mut |f| {
            if let Formula::Atom(s, args) = f {
                out.entry(s.clone()).or_default().insert(args.len());
            }
        });
        out
    }

    pub fn mentions(&self, symbol: &str) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if let Formula::Atom(s, _) = f {
                found |= s == symbol;
            }
        });
        found
    }

    pub fn mentions_p(&self) -> bool {
        self.mentions(SCHEME_PREDICATE)
    }

    /// Checks every atom against `sig` (plus unary `P` when `allow_p`).
    pub fn check(&self, sig: &Signature, allow_p: bool) -> Result<()> {
        let mut err = None;
        self.visit(&mut |f| {
            if err.is_some() {
                return;
            }
            if let Formula::Atom(s, args) = f {
                let expected = if s == SCHEME_PREDICATE && allow_p {
                    Some(1)
                } else {
                    sig.arity(s)
                };
                match expected {
                    None => err = Some(Error::UnknownSymbol(s.clone())),
                    Some(k) if k != args.len() => {
                        err = Some(Error::ArityMismatch {
                            symbol: s.clone(),
                            expected: k,
                            found: args.len(),
                        })
                    }
                    _ => {}
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Bound variables renamed to positional names, free variables untouched.
    /// Two formulas are alpha-equal iff their canonical forms are equal.
    pub fn canonical(&self) -> Formula {
        fn go(f: &Formula, env: &mut Vec<(Var, Var)>) -> Formula {
            let look = |v: &Var, env: &Vec<(Var, Var)>| {
                env.iter()
                    .rev()
                    .find(|(from, _)| from == v)
                    .map(|(_, to)| to.clone())
                    .unwrap_or_else(|| v.clone())
            };
            match f {
                Formula::True => Formula::True,
                Formula::False => Formula::False,
                Formula::Atom(s, args) => {
                    Formula::Atom(s.clone(), args.iter().map(|v| look(v, env)).collect())
                }
                Formula::Eq(a, b) => Formula::Eq(look(a, env), look(b, env)),
                Formula::Not(g) => Formula::not(go(g, env)),
                Formula::And(a, b) => Formula::and(go(a, env), go(b, env)),
                Formula::Or(a, b) => Formula::or(go(a, env), go(b, env)),
                Formula::Implies(a, b) => Formula::implies(go(a, env), go(b, env)),
                Formula::Iff(a, b) => Formula::iff(go(a, env), go(b, env)),
                Formula::Forall(v, g) | Formula::Exists(v, g) => {
                    // '#' cannot start a user variable, so positional names never collide
                    let name = Var::new(format!("#{}", env.len()));
                    env.push((v.clone(), name.clone()));
                    let body = go(g, env);
                    env.pop();
                    if matches!(f, Formula::Forall(..)) {
                        Formula::forall(name, body)
                    } else {
                        Formula::exists(name, body)
                    }
                }
            }
        }
        go(self, &mut Vec::new())
    }
}

/// True iff `f` and `g` differ only by a consistent renaming of bound variables.
pub fn alpha_equal(f: &Formula, g: &Formula) -> bool {
    f.canonical() == g.canonical()
}

/// Fully parenthesized concrete syntax, re-parseable by [`super::parse`].
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out, false);
    out
}

fn write_formula(f: &Formula, out: &mut String, operand: bool) {
    let binary = |a: &Formula, op: &str, b: &Formula, out: &mut String| {
        out.push('(');
        write_formula(a, out, true);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write_formula(b, out, true);
        out.push(')');
    };
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(s, args) => {
            out.push_str(s);
            out.push('(');
            for (i, v) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(v.as_str());
            }
            out.push(')');
        }
        Formula::Eq(a, b) => {
            out.push('(');
            out.push_str(a.as_str());
            out.push_str(" = ");
            out.push_str(b.as_str());
            out.push(')');
        }
        Formula::Not(g) => {
            out.push('~');
            write_formula(g, out, true);
        }
        Formula::And(a, b) => binary(a, "&", b, out),
        Formula::Or(a, b) => binary(a, "|", b, out),
        Formula::Implies(a, b) => binary(a, "->", b, out),
        Formula::Iff(a, b) => binary(a, "<->", b, out),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            // a quantifier body extends to the right, so operands need brackets
            if operand {
                out.push('(');
            }
            out.push_str(if matches!(f, Formula::Forall(..)) { "all " } else { "ex " });
            out.push_str(v.as_str());
            out.push_str(". ");
            write_formula(g, out, false);
            if operand {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_documented_shapes() {
        assert_eq!(print(&Formula::forall("x", Formula::eq("x", "x"))), "all x. (x = x)");
        assert_eq!(print(&Formula::not(Formula::atom("P", &["x"]))), "~P(x)");
        let nested = Formula::not(Formula::exists("y", Formula::atom("R", &["y", "y"])));
        assert_eq!(print(&nested), "~(ex y. R(y,y))");
    }

    #[test]
    fn free_vars_in_first_occurrence_order() {
        assert_eq!(
            Formula::eq("x", "y").free_vars(),
            vec![Var::from("x"), Var::from("y")]
        );
        let f = Formula::forall("x", Formula::atom("R", &["x", "y"]));
        assert_eq!(f.free_vars(), vec![Var::from("y")]);
        let g = Formula::and(Formula::eq("b", "a"), Formula::exists("b", Formula::eq("b", "c")));
        assert_eq!(g.free_vars(), vec![Var::from("b"), Var::from("a"), Var::from("c")]);
    }

    #[test]
    fn alpha_equality_respects_free_variables() {
        let a = Formula::forall("x", Formula::eq("x", "x"));
        let b = Formula::forall("y", Formula::eq("y", "y"));
        assert!(alpha_equal(&a, &b));
        let c = Formula::forall("x", Formula::atom("R", &["x", "y"]));
        let d = Formula::forall("x", Formula::atom("R", &["x", "z"]));
        assert!(!alpha_equal(&c, &d));
        // a bound name equal to a free name elsewhere must not be conflated
        let e = Formula::forall("y", Formula::atom("R", &["y", "x"]));
        let g = Formula::forall("x", Formula::atom("R", &["x", "x"]));
        assert!(!alpha_equal(&e, &g));
    }

    #[test]
    fn check_reports_unknown_and_arity() {
        let sig = Signature::of(&[("R", 2)]);
        assert_eq!(
            Formula::atom("S", &["x"]).check(&sig, false),
            Err(Error::UnknownSymbol("S".into()))
        );
        assert!(matches!(
            Formula::atom("R", &["x"]).check(&sig, false),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(Formula::atom("P", &["x"]).check(&sig, false).is_err());
        assert!(Formula::atom("P", &["x"]).check(&sig, true).is_ok());
    }

    #[test]
    fn counts_and_rank() {
        let f = Formula::exists("x", Formula::forall("y", Formula::atom("R", &["x", "y"])));
        assert_eq!(f.node_count(), 3);
        assert_eq!(f.quantifier_rank(), 2);
        assert_eq!(Formula::conj(vec![]), Formula::True);
    }
}
