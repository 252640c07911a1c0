//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := "all" var "." formula | "ex" var "." formula | iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | quant | atom
//! atom    := Name "(" var ("," var)* ")" | var "=" var | "(" formula ")"
//!          | "true" | "false"
//! ```
//!
//! `unary` also admits a quantifier, whose body extends as far right as
//! possible, so `A -> all x. B` reads as `A -> (all x. B)`. Positions in
//! errors are 1-based character columns.

use super::formula::{Formula, Var};
use super::signature::{is_symbol_name, Signature, SCHEME_PREDICATE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Var(String),
    All,
    Ex,
    True,
    False,
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) | Tok::Var(n) => format!("`{n}`"),
            Tok::All => "`all`".into(),
            Tok::Ex => "`ex`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Equals),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, pos));
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, pos));
            i += 2;
            continue;
        }
        if c == '<' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
            out.push((Tok::DoubleArrow, pos));
            i += 3;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "all" => Tok::All,
                "ex" => Tok::Ex,
                "true" => Tok::True,
                "false" => Tok::False,
                _ if c.is_ascii_uppercase() => Tok::Name(word),
                _ => Tok::Var(word),
            };
            out.push((tok, pos));
            continue;
        }
        return Err(Error::Syntax {
            pos,
            expected: "a token".into(),
            found: format!("`{c}`"),
        });
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
    allow_p: bool,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Var::new(v))
            }
            _ => self.fail("a variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::All | Tok::Ex => self.quantified(),
            _ => self.iff(),
        }
    }

    fn quantified(&mut self) -> Result<Formula> {
        let universal = matches!(self.bump(), Tok::All);
        let v = self.var()?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(v, body)
        } else {
            Formula::exists(v, body)
        })
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut left = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let right = self.imp()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::All | Tok::Ex => self.quantified(),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Var(_) => {
                let a = self.var()?;
                self.expect(Tok::Equals, "`=`")?;
                let b = self.var()?;
                Ok(Formula::Eq(a, b))
            }
            Tok::Name(name) => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let mut args = vec![self.var()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.var()?);
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                self.check_symbol(&name, args.len())?;
                Ok(Formula::Atom(name, args))
            }
            _ => self.fail("a formula"),
        }
    }

    fn check_symbol(&self, name: &str, found: usize) -> Result<()> {
        let expected = if name == SCHEME_PREDICATE && self.allow_p {
            1
        } else if let Some(a) = self.sig.arity(name) {
            a
        } else {
            return Err(Error::UnknownSymbol(name.to_owned()));
        };
        if expected != found {
            return Err(Error::ArityMismatch {
                symbol: name.to_owned(),
                expected,
                found,
            });
        }
        Ok(())
    }
}

/// Parses `text` against `sig`; `allow_p` admits the unary scheme predicate.
pub fn parse(text: &str, sig: &Signature, allow_p: bool) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
        allow_p,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(f)
}

/// Parses a formula whose signature is inferred from the atoms it uses.
/// `P` is admitted as the scheme predicate and left out of the result.
pub fn parse_untyped(text: &str) -> Result<(Formula, Signature)> {
    let toks = lex(text)?;
    let mut arities: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    for i in 0..toks.len().saturating_sub(1) {
        if let (Tok::Name(n), Tok::LParen) = (&toks[i].0, &toks[i + 1].0) {
            // atom arguments are plain variables, so the next `)` closes the atom
            let count = 1 + toks[i + 2..]
                .iter()
                .take_while(|(t, _)| *t != Tok::RParen && *t != Tok::End)
                .filter(|(t, _)| *t == Tok::Comma)
                .count();
            match arities.get(n) {
                Some(&k) if k != count => {
                    return Err(Error::ArityMismatch {
                        symbol: n.clone(),
                        expected: k,
                        found: count,
                    })
                }
                _ => {
                    arities.insert(n.clone(), count);
                }
            }
        }
    }
    arities.remove(SCHEME_PREDICATE);
    let sig = Signature::new(arities.into_iter().filter(|(n, _)| is_symbol_name(n)))?;
    let f = parse(text, &sig, true)?;
    Ok((f, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::formula::{alpha_equal, print, KEYWORDS};

    fn sig(rels: &[(&str, usize)]) -> Signature {
        Signature::of(rels)
    }

    #[test]
    fn parses_identity_case() {
        let f = parse("all x. x = x", &Signature::empty(), false).unwrap();
        assert_eq!(f, Formula::forall("x", Formula::eq("x", "x")));
    }

    #[test]
    fn parses_relational_induction_body() {
        let text = "P(z) & (all x. all y. (P(x) & Succ(x,y) -> P(y))) -> all x. P(x)";
        let f = parse(text, &sig(&[("Succ", 2)]), true).unwrap();
        let expected = Formula::implies(
            Formula::and(
                Formula::atom("P", &["z"]),
                Formula::forall(
                    "x",
                    Formula::forall(
                        "y",
                        Formula::implies(
                            Formula::and(Formula::atom("P", &["x"]), Formula::atom("Succ", &["x", "y"])),
                            Formula::atom("P", &["y"]),
                        ),
                    ),
                ),
            ),
            Formula::forall("x", Formula::atom("P", &["x"])),
        );
        assert_eq!(f, expected);
        assert_eq!(f.free_vars(), vec![Var::from("z")]);
    }

    #[test]
    fn reports_position_of_missing_variable() {
        let err = parse("all . P(x)", &Signature::empty(), true).unwrap_err();
        match err {
            Error::Syntax { pos, .. } => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symbol_errors() {
        assert_eq!(
            parse("Q(x)", &Signature::empty(), false),
            Err(Error::UnknownSymbol("Q".into()))
        );
        assert!(matches!(
            parse("R(x)", &sig(&[("R", 2)]), false),
            Err(Error::ArityMismatch { .. })
        ));
        assert_eq!(
            parse("P(x)", &Signature::empty(), false),
            Err(Error::UnknownSymbol("P".into()))
        );
        assert!(parse("P(x,y)", &Signature::empty(), true).is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        let s = sig(&[("A", 1), ("B", 1), ("C", 1)]);
        let f = parse("A(x) -> B(x) -> C(x)", &s, false).unwrap();
        assert!(matches!(&f, Formula::Implies(_, r) if matches!(**r, Formula::Implies(..))));
        let g = parse("A(x) | B(x) & C(x)", &s, false).unwrap();
        assert!(matches!(&g, Formula::Or(_, r) if matches!(**r, Formula::And(..))));
        let h = parse("~x = y", &s, false).unwrap();
        assert_eq!(h, Formula::not(Formula::eq("x", "y")));
        let k = parse("A(x) <-> B(x) <-> C(x)", &s, false).unwrap();
        assert!(matches!(&k, Formula::Iff(l, _) if matches!(**l, Formula::Iff(..))));
    }

    #[test]
    fn nested_and_chain_round_trips() {
        let s = sig(&[("A", 1), ("B", 1), ("C", 1)]);
        let f = parse("A(x) & B(x) & C(x) & ~ex y. A(y)", &s, false).unwrap();
        let printed = print(&f);
        assert_eq!(printed, "(((A(x) & B(x)) & C(x)) & ~(ex y. A(y)))");
        assert_eq!(parse(&printed, &s, false).unwrap(), f);
    }

    #[test]
    fn keywords_are_not_variables() {
        assert!(parse("all true. true", &Signature::empty(), false).is_err());
        assert!(KEYWORDS.contains(&"ex"));
    }

    #[test]
    fn untyped_parse_infers_signature() {
        let (f, s) = parse_untyped("ex x. Leq(x,y) & Zero(x) & P(y)").unwrap();
        assert_eq!(s, sig(&[("Leq", 2), ("Zero", 1)]));
        assert!(alpha_equal(&f, &parse("ex z. Leq(z,y) & Zero(z) & P(y)", &s, true).unwrap()));
        assert!(parse_untyped("R(x) & R(x,y)").is_err());
    }
}
