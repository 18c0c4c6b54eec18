//! Two-sorted formulas for iterated truth biconditionals: a number sort
//! with the arithmetical language, and an index sort with `≺` and the
//! indexed truth predicate `T_β(x)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::syntax::{pair, GodelCode, Term, VarId};

/// An index-sort variable, printed `b<n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexVar(pub u64);

impl fmt::Display for IndexVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ItbFormula {
    Eq(Term, Term),
    IndexLess(IndexVar, IndexVar),
    TruthAt(IndexVar, Term),
    Not(Box<ItbFormula>),
    Or(Box<ItbFormula>, Box<ItbFormula>),
    And(Box<ItbFormula>, Box<ItbFormula>),
    NumExists(VarId, Box<ItbFormula>),
    NumForall(VarId, Box<ItbFormula>),
    IdxExists(IndexVar, Box<ItbFormula>),
    IdxForall(IndexVar, Box<ItbFormula>),
}

use ItbFormula as I;

impl ItbFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: ItbFormula) -> ItbFormula {
        I::Not(Box::new(f))
    }

    pub fn or(l: ItbFormula, r: ItbFormula) -> ItbFormula {
        I::Or(Box::new(l), Box::new(r))
    }

    pub fn and(l: ItbFormula, r: ItbFormula) -> ItbFormula {
        I::And(Box::new(l), Box::new(r))
    }

    pub fn imp(l: ItbFormula, r: ItbFormula) -> ItbFormula {
        I::or(I::not(l), r)
    }

    pub fn iff(l: ItbFormula, r: ItbFormula) -> ItbFormula {
        I::and(I::imp(l.clone(), r.clone()), I::imp(r, l))
    }

    pub fn num_exists(v: VarId, f: ItbFormula) -> ItbFormula {
        I::NumExists(v, Box::new(f))
    }

    pub fn num_forall(v: VarId, f: ItbFormula) -> ItbFormula {
        I::NumForall(v, Box::new(f))
    }

    pub fn idx_exists(b: IndexVar, f: ItbFormula) -> ItbFormula {
        I::IdxExists(b, Box::new(f))
    }

    pub fn idx_forall(b: IndexVar, f: ItbFormula) -> ItbFormula {
        I::IdxForall(b, Box::new(f))
    }

    fn walk(&self, visit: &mut dyn FnMut(&ItbFormula)) {
        visit(self);
        match self {
            I::Eq(..) | I::IndexLess(..) | I::TruthAt(..) => {}
            I::Not(f) | I::NumExists(_, f) | I::NumForall(_, f) | I::IdxExists(_, f) | I::IdxForall(_, f) => {
                f.walk(visit)
            }
            I::Or(l, r) | I::And(l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
        }
    }

    /// Free number-sort variables.
    pub fn free_number_vars(&self) -> BTreeSet<VarId> {
        match self {
            I::Eq(l, r) => l.vars().union(r.vars()).copied().collect(),
            I::IndexLess(..) => BTreeSet::new(),
            I::TruthAt(_, t) => t.vars().clone(),
            I::Not(f) | I::IdxExists(_, f) | I::IdxForall(_, f) => f.free_number_vars(),
            I::Or(l, r) | I::And(l, r) => {
                let mut s = l.free_number_vars();
                s.extend(r.free_number_vars());
                s
            }
            I::NumExists(v, f) | I::NumForall(v, f) => {
                let mut s = f.free_number_vars();
                s.remove(v);
                s
            }
        }
    }

    /// Free index-sort variables.
    pub fn free_index_vars(&self) -> BTreeSet<IndexVar> {
        match self {
            I::Eq(..) => BTreeSet::new(),
            I::IndexLess(a, b) => [*a, *b].into_iter().collect(),
            I::TruthAt(b, _) => [*b].into_iter().collect(),
            I::Not(f) | I::NumExists(_, f) | I::NumForall(_, f) => f.free_index_vars(),
            I::Or(l, r) | I::And(l, r) => {
                let mut s = l.free_index_vars();
                s.extend(r.free_index_vars());
                s
            }
            I::IdxExists(b, f) | I::IdxForall(b, f) => {
                let mut s = f.free_index_vars();
                s.remove(b);
                s
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_number_vars().is_empty() && self.free_index_vars().is_empty()
    }

    /// Index variables bound anywhere in the formula.
    pub fn bound_index_vars(&self) -> BTreeSet<IndexVar> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let I::IdxExists(b, _) | I::IdxForall(b, _) = f {
                out.insert(*b);
            }
        });
        out
    }

    /// Every index variable mentioned anywhere.
    pub fn index_vars(&self) -> BTreeSet<IndexVar> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            I::IndexLess(a, b) => {
                out.insert(*a);
                out.insert(*b);
            }
            I::TruthAt(b, _) | I::IdxExists(b, _) | I::IdxForall(b, _) => {
                out.insert(*b);
            }
            _ => {}
        });
        out
    }

    /// Every number variable mentioned anywhere, free or bound.
    pub fn number_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            I::Eq(l, r) => {
                out.extend(l.vars());
                out.extend(r.vars());
            }
            I::TruthAt(_, t) => out.extend(t.vars()),
            I::NumExists(v, _) | I::NumForall(v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    pub fn has_index_quantifier(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| found |= matches!(f, I::IdxExists(..) | I::IdxForall(..)));
        found
    }
}

impl fmt::Display for ItbFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            I::Eq(l, r) => write!(f, "({l} = {r})"),
            I::IndexLess(a, b) => write!(f, "({a} < {b})"),
            I::TruthAt(b, t) => write!(f, "T[{b}]({t})"),
            I::Not(g) => write!(f, "~{g}"),
            I::Or(l, r) => write!(f, "({l} | {r})"),
            I::And(l, r) => write!(f, "({l} & {r})"),
            I::NumExists(v, g) => write!(f, "E {v} {g}"),
            I::NumForall(v, g) => write!(f, "A {v} {g}"),
            I::IdxExists(b, g) => write!(f, "E {b} {g}"),
            I::IdxForall(b, g) => write!(f, "A {b} {g}"),
        }
    }
}

/// `ψ^{≺α}`: bound every index quantifier by `≺ α`.
///
/// `∀β ψ` becomes `∀β (β ≺ α → ψ)` and `∃β ψ` becomes `∃β (β ≺ α ∧ ψ)`;
/// number quantifiers are untouched.
pub fn relativize(f: &ItbFormula, alpha: IndexVar) -> Result<ItbFormula> {
    if f.bound_index_vars().contains(&alpha) {
        return Err(Error::VariableClash(format!("{alpha} is bound in {f}")));
    }
    Ok(relativize_unchecked(f, alpha))
}

fn relativize_unchecked(f: &ItbFormula, alpha: IndexVar) -> ItbFormula {
    let r = |g: &ItbFormula| relativize_unchecked(g, alpha);
    match f {
        I::Eq(..) | I::IndexLess(..) | I::TruthAt(..) => f.clone(),
        I::Not(g) => I::not(r(g)),
        I::Or(a, b) => I::or(r(a), r(b)),
        I::And(a, b) => I::and(r(a), r(b)),
        I::NumExists(v, g) => I::num_exists(*v, r(g)),
        I::NumForall(v, g) => I::num_forall(*v, r(g)),
        I::IdxExists(b, g) => I::idx_exists(*b, I::and(I::IndexLess(*b, alpha), r(g))),
        I::IdxForall(b, g) => I::idx_forall(*b, I::imp(I::IndexLess(*b, alpha), r(g))),
    }
}

/// Injective code of a two-sorted formula, by the same tagged pairing as
/// arithmetical syntax (tags disjoint from nothing else: the codes only
/// ever meet each other).
pub fn itb_code(f: &ItbFormula) -> BigUint {
    let node = |tag: u32, payload: BigUint| pair(&BigUint::from(tag), &payload);
    let term = |t: &Term| GodelCode::of_term(t).0;
    match f {
        I::Eq(l, r) => node(0, pair(&term(l), &term(r))),
        I::IndexLess(a, b) => node(1, pair(&BigUint::from(a.0), &BigUint::from(b.0))),
        I::TruthAt(b, t) => node(2, pair(&BigUint::from(b.0), &term(t))),
        I::Not(g) => node(3, itb_code(g)),
        I::Or(l, r) => node(4, pair(&itb_code(l), &itb_code(r))),
        I::And(l, r) => node(5, pair(&itb_code(l), &itb_code(r))),
        I::NumExists(v, g) => node(6, pair(&BigUint::from(v.0), &itb_code(g))),
        I::NumForall(v, g) => node(7, pair(&BigUint::from(v.0), &itb_code(g))),
        I::IdxExists(b, g) => node(8, pair(&BigUint::from(b.0), &itb_code(g))),
        I::IdxForall(b, g) => node(9, pair(&BigUint::from(b.0), &itb_code(g))),
    }
}

/// A closed term denoting `n` in binary: `0`, `S(0)`, then `t·2` or
/// `S(t·2)` per further bit. Codes are far too large for unary numerals.
pub fn code_term(n: &BigUint) -> Term {
    let bits = n.bits();
    if bits == 0 {
        return Term::zero();
    }
    let two = Term::numeral(2);
    let mut t = Term::numeral(1);
    for i in (0..bits - 1).rev() {
        let doubled = Term::mul(t, two.clone());
        t = if n.bit(i) { Term::succ(doubled) } else { doubled };
    }
    t
}

/// `∀α (T_α(⌜φ⌝) ↔ φ^{≺α})`.
pub fn biconditional(phi: &ItbFormula, alpha: IndexVar) -> Result<ItbFormula> {
    if !phi.is_sentence() {
        return Err(Error::Invalid(format!("{phi} is not an ITB sentence")));
    }
    let rel = relativize(phi, alpha)?;
    Ok(I::idx_forall(
        alpha,
        I::iff(I::TruthAt(alpha, code_term(&itb_code(phi))), rel),
    ))
}

/// A fixed list of ITB sentences used when no other fragment is given.
pub fn default_gamma(n: usize) -> Vec<ItbFormula> {
    let b0 = IndexVar(0);
    let b1 = IndexVar(1);
    let zero_eq = I::Eq(Term::zero(), Term::zero());
    let catalogue = vec![
        zero_eq.clone(),
        I::idx_forall(b0, I::TruthAt(b0, code_term(&itb_code(&zero_eq)))),
        I::idx_exists(b0, I::idx_forall(b1, I::not(I::IndexLess(b1, b0)))),
        I::idx_forall(b0, I::num_exists(VarId(0), I::TruthAt(b0, Term::var(VarId(0))))),
    ];
    catalogue.into_iter().take(n).collect()
}
