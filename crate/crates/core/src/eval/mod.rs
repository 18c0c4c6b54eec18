//! Standard-model semantics over ℕ.

mod partial;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::syntax::{Formula, FormulaKind, Term, TermKind, VarId};

pub use partial::check_partial_truth_predicate;

/// A finite map from variables to naturals.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<VarId, BigUint>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_pairs<I, N>(pairs: I) -> Assignment
    where
        I: IntoIterator<Item = (VarId, N)>,
        N: Into<BigUint>,
    {
        Assignment(pairs.into_iter().map(|(v, n)| (v, n.into())).collect())
    }

    pub fn get(&self, v: VarId) -> Option<&BigUint> {
        self.0.get(&v)
    }

    pub fn insert(&mut self, v: VarId, n: impl Into<BigUint>) {
        self.0.insert(v, n.into());
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &BigUint)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.keys().copied()
    }

    pub fn require_covers(&self, vars: &BTreeSet<VarId>) -> Result<()> {
        match vars.iter().find(|v| !self.0.contains_key(v)) {
            Some(v) => Err(Error::MissingVariable(*v)),
            None => Ok(()),
        }
    }

    /// The assignment cut down to `vars`.
    pub fn restrict(&self, vars: &BTreeSet<VarId>) -> Assignment {
        Assignment(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, n)| (*v, n.clone()))
                .collect(),
        )
    }

    /// A copy with `v` mapped to `n`.
    pub fn with(&self, v: VarId, n: impl Into<BigUint>) -> Assignment {
        let mut out = self.clone();
        out.insert(v, n);
        out
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{n}")?;
        }
        f.write_str("}")
    }
}

/// Three-valued verdict of the bounded evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth3 {
    True,
    False,
    Unknown,
}

impl Truth3 {
    fn from_bool(b: bool) -> Truth3 {
        if b {
            Truth3::True
        } else {
            Truth3::False
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Truth3 {
        match self {
            Truth3::True => Truth3::False,
            Truth3::False => Truth3::True,
            Truth3::Unknown => Truth3::Unknown,
        }
    }

    pub fn or(self, other: Truth3) -> Truth3 {
        match (self, other) {
            (Truth3::True, _) | (_, Truth3::True) => Truth3::True,
            (Truth3::False, Truth3::False) => Truth3::False,
            _ => Truth3::Unknown,
        }
    }

    pub fn and(self, other: Truth3) -> Truth3 {
        self.not().or(other.not()).not()
    }
}

impl fmt::Display for Truth3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth3::True => "true",
            Truth3::False => "false",
            Truth3::Unknown => "unknown",
        })
    }
}

/// Value of a closed term.
pub fn val(t: &Term) -> Result<BigUint> {
    t.value().cloned().ok_or(Error::OpenTerm)
}

/// Value of a term under an assignment covering its variables.
pub fn term_eval(t: &Term, a: &Assignment) -> Result<BigUint> {
    if let Some(v) = t.value() {
        return Ok(v.clone());
    }
    Ok(match t.kind() {
        TermKind::Var(v) => a.get(*v).cloned().ok_or(Error::MissingVariable(*v))?,
        TermKind::Zero => BigUint::default(),
        TermKind::Succ(s) => term_eval(s, a)? + 1u32,
        TermKind::Add(l, r) => term_eval(l, a)? + term_eval(r, a)?,
        TermKind::Mul(l, r) => term_eval(l, a)? * term_eval(r, a)?,
    })
}

/// Truth of a quantifier-free sentence.
pub fn tr0(s: &Formula) -> Result<bool> {
    s.require_sentence()?;
    if !s.is_quantifier_free() {
        return Err(Error::Quantified);
    }
    Ok(tr0_unchecked(s))
}

// Left-leaning chains of ∨/∧ (the shape of every big connective) are walked
// iteratively so that long disjunctions do not recurse per disjunct.
fn tr0_unchecked(s: &Formula) -> bool {
    match s.kind() {
        FormulaKind::Eq(l, r) => l.value() == r.value(),
        FormulaKind::Not(f) => !tr0_unchecked(f),
        FormulaKind::Or(..) => {
            let (leftmost, rights) = left_spine(s, true);
            tr0_unchecked(leftmost) || rights.iter().rev().any(|r| tr0_unchecked(r))
        }
        FormulaKind::And(..) => {
            let (leftmost, rights) = left_spine(s, false);
            tr0_unchecked(leftmost) && rights.iter().rev().all(|r| tr0_unchecked(r))
        }
        FormulaKind::Exists(..) | FormulaKind::Forall(..) => unreachable!("checked quantifier-free"),
    }
}

/// Split `((a ∘ b) ∘ c) ∘ d` into `a` and `[d, c, b]`.
pub(crate) fn left_spine(f: &Formula, or: bool) -> (&Formula, Vec<&Formula>) {
    let mut rights = Vec::new();
    let mut cur = f;
    loop {
        match (cur.kind(), or) {
            (FormulaKind::Or(l, r), true) | (FormulaKind::And(l, r), false) => {
                rights.push(r);
                cur = l;
            }
            _ => return (cur, rights),
        }
    }
}

/// Truth of `f` under an assignment covering the variables it consults,
/// evaluated left to right with short-circuiting. Fails with
/// [`Error::Quantified`] only when a quantified subformula must be consulted.
pub fn lazy_truth(f: &Formula, a: &Assignment) -> Result<bool> {
    match f.kind() {
        FormulaKind::Eq(l, r) => Ok(term_eval(l, a)? == term_eval(r, a)?),
        FormulaKind::Not(g) => Ok(!lazy_truth(g, a)?),
        FormulaKind::Or(..) | FormulaKind::And(..) => {
            let or = matches!(f.kind(), FormulaKind::Or(..));
            let (leftmost, rights) = left_spine(f, or);
            // the disjunction (conjunction) is decided by the first operand equal to `or`
            if lazy_truth(leftmost, a)? == or {
                return Ok(or);
            }
            for r in rights.iter().rev() {
                if lazy_truth(r, a)? == or {
                    return Ok(or);
                }
            }
            Ok(!or)
        }
        FormulaKind::Exists(..) | FormulaKind::Forall(..) => Err(Error::Quantified),
    }
}

/// Bounded strong-Kleene evaluation of a sentence. Quantifiers search
/// witnesses `0..=bound`; without a decisive witness they are `Unknown`.
pub fn std_truth(s: &Formula, bound: u64) -> Result<Truth3> {
    s.require_sentence()?;
    Ok(std_truth_inner(s, bound))
}

fn std_truth_inner(s: &Formula, bound: u64) -> Truth3 {
    if s.is_quantifier_free() {
        return Truth3::from_bool(tr0_unchecked(s));
    }
    match s.kind() {
        FormulaKind::Eq(..) => unreachable!("equations are quantifier-free"),
        FormulaKind::Not(f) => std_truth_inner(f, bound).not(),
        FormulaKind::Or(l, r) => std_truth_inner(l, bound).or(std_truth_inner(r, bound)),
        FormulaKind::And(l, r) => std_truth_inner(l, bound).and(std_truth_inner(r, bound)),
        FormulaKind::Exists(v, body) => {
            let mut n = Term::zero();
            for _ in 0..=bound {
                let inst = body.subst_closed(*v, &n).expect("numerals are closed");
                if std_truth_inner(&inst, bound) == Truth3::True {
                    return Truth3::True;
                }
                n = Term::succ(n);
            }
            Truth3::Unknown
        }
        FormulaKind::Forall(v, body) => {
            let mut n = Term::zero();
            for _ in 0..=bound {
                let inst = body.subst_closed(*v, &n).expect("numerals are closed");
                if std_truth_inner(&inst, bound) == Truth3::False {
                    return Truth3::False;
                }
                n = Term::succ(n);
            }
            Truth3::Unknown
        }
    }
}
