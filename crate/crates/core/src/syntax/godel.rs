//! Gödel coding by tagged Cantor pairing.
//!
//! Term codes are even, formula codes odd. Inside each sort a node is
//! `pair(tag, payload)` where the payload is the child code, the pair of
//! child codes, or `pair(var, body)` for quantifiers. Every child code is
//! strictly smaller than its parent, so decoding terminates.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Formula, FormulaKind, Syntax, Term, TermKind, VarId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GodelCode(pub BigUint);

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for GodelCode {
    fn from(n: u64) -> Self {
        GodelCode(BigUint::from(n))
    }
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    ((&s * (&s + 1u32)) >> 1usize) + b
}

/// Inverse of [`pair`].
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let disc: BigUint = (z << 3usize) + 1u32;
    let w = (disc.sqrt() - 1u32) >> 1usize;
    let t = (&w * (&w + 1u32)) >> 1usize;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

mod tag {
    pub const ZERO: u32 = 0;
    pub const VAR: u32 = 1;
    pub const SUCC: u32 = 2;
    pub const ADD: u32 = 3;
    pub const MUL: u32 = 4;

    pub const EQ: u32 = 0;
    pub const NOT: u32 = 1;
    pub const OR: u32 = 2;
    pub const AND: u32 = 3;
    pub const EXISTS: u32 = 4;
    pub const FORALL: u32 = 5;
}

fn node(tag: u32, payload: BigUint) -> BigUint {
    pair(&BigUint::from(tag), &payload)
}

fn term_code(t: &Term) -> BigUint {
    let inner = match t.kind() {
        TermKind::Zero => node(tag::ZERO, BigUint::zero()),
        TermKind::Var(v) => node(tag::VAR, BigUint::from(v.0)),
        TermKind::Succ(s) => node(tag::SUCC, term_code(s)),
        TermKind::Add(l, r) => node(tag::ADD, pair(&term_code(l), &term_code(r))),
        TermKind::Mul(l, r) => node(tag::MUL, pair(&term_code(l), &term_code(r))),
    };
    inner << 1
}

fn formula_code(f: &Formula) -> BigUint {
    let inner = match f.kind() {
        FormulaKind::Eq(l, r) => node(tag::EQ, pair(&term_code(l), &term_code(r))),
        FormulaKind::Not(g) => node(tag::NOT, formula_code(g)),
        FormulaKind::Or(l, r) => node(tag::OR, pair(&formula_code(l), &formula_code(r))),
        FormulaKind::And(l, r) => node(tag::AND, pair(&formula_code(l), &formula_code(r))),
        FormulaKind::Exists(v, g) => node(tag::EXISTS, pair(&BigUint::from(v.0), &formula_code(g))),
        FormulaKind::Forall(v, g) => node(tag::FORALL, pair(&BigUint::from(v.0), &formula_code(g))),
    };
    (inner << 1) + 1u32
}

impl GodelCode {
    pub fn of_term(t: &Term) -> GodelCode {
        GodelCode(term_code(t))
    }

    pub fn of_formula(f: &Formula) -> GodelCode {
        GodelCode(formula_code(f))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

pub fn godel_encode(x: &Syntax) -> GodelCode {
    match x {
        Syntax::Term(t) => GodelCode::of_term(t),
        Syntax::Formula(f) => GodelCode::of_formula(f),
    }
}

fn decode_term(c: &BigUint) -> Option<Term> {
    if c.bit(0) {
        return None;
    }
    let (tag, payload) = unpair(&(c >> 1));
    let t = tag.to_u32()?;
    Some(match t {
        tag::ZERO if payload.is_zero() => Term::zero(),
        tag::VAR => Term::var(VarId(payload.to_u64()?)),
        tag::SUCC => Term::succ(decode_term(&payload)?),
        tag::ADD | tag::MUL => {
            let (l, r) = unpair(&payload);
            let (l, r) = (decode_term(&l)?, decode_term(&r)?);
            if t == tag::ADD {
                Term::add(l, r)
            } else {
                Term::mul(l, r)
            }
        }
        _ => return None,
    })
}

fn decode_formula(c: &BigUint) -> Option<Formula> {
    if !c.bit(0) {
        return None;
    }
    let (tag, payload) = unpair(&(c >> 1));
    let t = tag.to_u32()?;
    Some(match t {
        tag::EQ => {
            let (l, r) = unpair(&payload);
            Formula::eq(decode_term(&l)?, decode_term(&r)?)
        }
        tag::NOT => Formula::not(decode_formula(&payload)?),
        tag::OR | tag::AND => {
            let (l, r) = unpair(&payload);
            let (l, r) = (decode_formula(&l)?, decode_formula(&r)?);
            if t == tag::OR {
                Formula::or(l, r)
            } else {
                Formula::and(l, r)
            }
        }
        tag::EXISTS | tag::FORALL => {
            let (v, body) = unpair(&payload);
            let v = VarId(v.to_u64()?);
            let body = decode_formula(&body)?;
            if t == tag::EXISTS {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
        _ => return None,
    })
}

/// Decode a code back into syntax; `None` for naturals outside the range
/// of the coding.
pub fn godel_decode(c: &GodelCode) -> Option<Syntax> {
    if c.0.bit(0) {
        decode_formula(&c.0).map(Syntax::Formula)
    } else {
        decode_term(&c.0).map(Syntax::Term)
    }
}

/// Convenience: decode `n` and keep it only if it is a sentence.
pub fn decode_sentence(n: u64) -> Option<Formula> {
    match godel_decode(&GodelCode::from(n))? {
        Syntax::Formula(f) if f.is_sentence() => Some(f),
        _ => None,
    }
}
