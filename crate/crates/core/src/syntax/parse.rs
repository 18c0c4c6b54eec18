//! Recursive-descent parser for the concrete syntax.
//!
//! ```text
//! Term    ::= "0" | "S(" Term ")" | "(" Term "+" Term ")" | "(" Term "*" Term ")" | "v" Nat
//! Formula ::= "(" Term "=" Term ")" | "~" Formula | "(" Formula "|" Formula ")"
//!           | "(" Formula "&" Formula ")" | "E v" Nat " " Formula | "A v" Nat " " Formula
//! ```
//!
//! Inside one pair of parentheses several infix operators may appear;
//! `*` binds tighter than `+`, then `=`, `&`, `|`, each grouping to the
//! left, so `(S(0) + 0 = S(0))` is an equation. The printer brackets every
//! binary node, which this grammar reads back unchanged. Whitespace
//! between tokens is ignored.

use super::{Formula, Syntax, Term, VarId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Zero,
    Succ,
    LParen,
    RParen,
    Plus,
    Star,
    EqSign,
    Tilde,
    Bar,
    Amp,
    Exists,
    Forall,
    Var(u64),
}

fn describe(t: Option<Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Var(n)) => format!("variable v{n}"),
        Some(t) => format!("{t:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0' => Tok::Zero,
            b'S' => Tok::Succ,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'=' => Tok::EqSign,
            b'~' => Tok::Tilde,
            b'|' => Tok::Bar,
            b'&' => Tok::Amp,
            b'E' => Tok::Exists,
            b'A' => Tok::Forall,
            b'v' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits_start == i {
                    return Err(Error::Parse {
                        offset: digits_start,
                        message: "expected variable index after 'v'".into(),
                    });
                }
                let n: u64 = text[digits_start..i].parse().map_err(|_| Error::Parse {
                    offset: digits_start,
                    message: "variable index out of range".into(),
                })?;
                out.push((Tok::Var(n), start));
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

fn combine(op: Tok, left_at: usize, left: Syntax, right_at: usize, right: Syntax) -> Result<Syntax> {
    let sort_err = |at: usize, want: &str| Error::Parse {
        offset: at,
        message: format!("expected a {want} operand"),
    };
    Ok(match (op, left, right) {
        (Tok::Plus, Syntax::Term(l), Syntax::Term(r)) => Syntax::Term(Term::add(l, r)),
        (Tok::Star, Syntax::Term(l), Syntax::Term(r)) => Syntax::Term(Term::mul(l, r)),
        (Tok::EqSign, Syntax::Term(l), Syntax::Term(r)) => Syntax::Formula(Formula::eq(l, r)),
        (Tok::Bar, Syntax::Formula(l), Syntax::Formula(r)) => Syntax::Formula(Formula::or(l, r)),
        (Tok::Amp, Syntax::Formula(l), Syntax::Formula(r)) => Syntax::Formula(Formula::and(l, r)),
        (Tok::Plus | Tok::Star | Tok::EqSign, l, _) => {
            return Err(if matches!(l, Syntax::Formula(_)) {
                sort_err(left_at, "term")
            } else {
                sort_err(right_at, "term")
            })
        }
        (_, l, _) => {
            return Err(if matches!(l, Syntax::Term(_)) {
                sort_err(left_at, "formula")
            } else {
                sort_err(right_at, "formula")
            })
        }
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!(
                "expected {}, found {}",
                describe(Some(want)),
                describe(self.peek())
            ))
        }
    }

    fn any(&mut self) -> Result<Syntax> {
        match self.peek() {
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(Syntax::Term(Term::zero()))
            }
            Some(Tok::Var(n)) => {
                self.pos += 1;
                Ok(Syntax::Term(Term::var(VarId(n))))
            }
            Some(Tok::Succ) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Syntax::Term(Term::succ(inner)))
            }
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Syntax::Formula(Formula::not(self.formula()?)))
            }
            Some(q @ (Tok::Exists | Tok::Forall)) => {
                self.pos += 1;
                let v = match self.peek() {
                    Some(Tok::Var(n)) => VarId(n),
                    other => {
                        return self.fail(format!("expected variable after quantifier, found {}", describe(other)))
                    }
                };
                self.pos += 1;
                let body = self.formula()?;
                Ok(Syntax::Formula(if q == Tok::Exists {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let mut items = vec![(self.offset(), self.any()?)];
                let mut ops = Vec::new();
                loop {
                    match self.peek() {
                        Some(Tok::RParen) if !ops.is_empty() => break,
                        Some(op @ (Tok::Plus | Tok::Star | Tok::EqSign | Tok::Bar | Tok::Amp)) => {
                            self.pos += 1;
                            ops.push((op, self.offset() - 1));
                            items.push((self.offset(), self.any()?));
                        }
                        other => return self.fail(format!("expected infix operator, found {}", describe(other))),
                    }
                }
                self.expect(Tok::RParen)?;
                // binding strength, tightest first; every level groups to the left
                for level in [Tok::Star, Tok::Plus, Tok::EqSign, Tok::Amp, Tok::Bar] {
                    let mut i = 0;
                    while i < ops.len() {
                        if ops[i].0 != level {
                            i += 1;
                            continue;
                        }
                        if level == Tok::EqSign && ops.get(i + 1).is_some_and(|o| o.0 == Tok::EqSign) {
                            return Err(Error::Parse {
                                offset: ops[i + 1].1,
                                message: "chained equations".into(),
                            });
                        }
                        ops.remove(i);
                        let (right_at, right) = items.remove(i + 1);
                        let (left_at, left) = items[i].clone();
                        items[i] = (left_at, combine(level, left_at, left, right_at, right)?);
                    }
                }
                Ok(items.pop().expect("one item left").1)
            }
            other => self.fail(format!("unexpected {}", describe(other))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let at = self.offset();
        match self.any()? {
            Syntax::Term(t) => Ok(t),
            Syntax::Formula(_) => Err(Error::Parse {
                offset: at,
                message: "expected a term, found a formula".into(),
            }),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let at = self.offset();
        match self.any()? {
            Syntax::Formula(f) => Ok(f),
            Syntax::Term(_) => Err(Error::Parse {
                offset: at,
                message: "expected a formula, found a term".into(),
            }),
        }
    }
}

/// Parse a term or a formula.
pub fn parse(text: &str) -> Result<Syntax> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let out = p.any()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(out)
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    match parse(text)? {
        Syntax::Formula(f) => Ok(f),
        Syntax::Term(_) => Err(Error::WrongSort {
            expected: "formula",
            found: "term",
        }),
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    match parse(text)? {
        Syntax::Term(t) => Ok(t),
        Syntax::Formula(_) => Err(Error::WrongSort {
            expected: "term",
            found: "formula",
        }),
    }
}
