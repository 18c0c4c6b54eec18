//! Terms and formulas of the arithmetical language `{0, S, +, ×, =}`,
//! their concrete syntax, Gödel coding and the trivialisation machinery.

mod formula;
mod godel;
mod parse;
mod term;
mod trivial;

use std::collections::BTreeSet;
use std::fmt;

pub use formula::{Formula, FormulaKind};
pub use godel::{decode_sentence, godel_decode, godel_encode, pair, unpair, GodelCode};
pub use parse::{parse, parse_formula, parse_term};
pub use term::{Term, TermKind, VarId};
pub use trivial::{ext_equiv, similar, trivialise, Template};

use crate::error::Result;
use crate::eval::Assignment;

/// Either sort of syntax object, as produced by the parser.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Syntax {
    Term(Term),
    Formula(Formula),
}

impl Syntax {
    pub fn free_vars(&self) -> &BTreeSet<VarId> {
        match self {
            Syntax::Term(t) => t.vars(),
            Syntax::Formula(f) => f.free_vars(),
        }
    }
}

impl fmt::Display for Syntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Syntax::Term(t) => t.fmt(f),
            Syntax::Formula(g) => g.fmt(f),
        }
    }
}

impl From<Term> for Syntax {
    fn from(t: Term) -> Self {
        Syntax::Term(t)
    }
}

impl From<Formula> for Syntax {
    fn from(f: Formula) -> Self {
        Syntax::Formula(f)
    }
}

pub fn free_vars(x: &Syntax) -> BTreeSet<VarId> {
    x.free_vars().clone()
}

pub fn numeral(n: u64) -> Term {
    Term::numeral(n)
}

pub fn subst_closed(f: &Formula, v: VarId, t: &Term) -> Result<Formula> {
    f.subst_closed(v, t)
}

/// `φ[α]`: replace every free variable by the numeral of its value.
pub fn apply_assignment(f: &Formula, a: &Assignment) -> Result<Formula> {
    a.require_covers(f.free_vars())?;
    let numerals: Vec<(VarId, Term)> = f
        .free_vars()
        .iter()
        .map(|v| (*v, Term::numeral_big(a.get(*v).expect("covered"))))
        .collect();
    Ok(f.replace_free(&|v| numerals.iter().find(|(w, _)| *w == v).map(|(_, t)| t.clone())))
}

/// Lowest variable index not in `used`.
pub(crate) fn lowest_unused(used: &BTreeSet<VarId>) -> VarId {
    let mut i = 0;
    while used.contains(&VarId(i)) {
        i += 1;
    }
    VarId(i)
}

#[cfg(test)]
mod tests;
