//! Trivialisation of formulas and the two relations built on it:
//! syntactic similarity and extensional equivalence.

use std::collections::BTreeSet;

use super::{Formula, FormulaKind, Term, TermKind, VarId};
use crate::error::Result;
use crate::eval::{term_eval, Assignment};

/// A formula split into a skeleton and the terms that were abstracted out
/// of it. `skeleton` has exactly one free occurrence of each
/// `param_vars[i]`, and substituting `params[i]` for it gives back the
/// original formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub skeleton: Formula,
    pub params: Vec<Term>,
    pub param_vars: Vec<VarId>,
}

impl Template {
    /// Fill the parameter slots with `terms`. Terms are inserted verbatim,
    /// so they must not mention variables bound at the slot positions.
    pub fn instantiate(&self, terms: &[Term]) -> Formula {
        assert_eq!(terms.len(), self.param_vars.len(), "parameter count mismatch");
        let vars = &self.param_vars;
        self.skeleton
            .replace_free(&|v| vars.iter().position(|p| *p == v).map(|i| terms[i].clone()))
    }

    /// The original formula.
    pub fn reconstruct(&self) -> Formula {
        self.instantiate(&self.params)
    }
}

struct Abstractor {
    binders: BTreeSet<VarId>,
    next: u64,
    params: Vec<Term>,
    param_vars: Vec<VarId>,
}

impl Abstractor {
    fn fresh(&mut self) -> VarId {
        while self.binders.contains(&VarId(self.next)) {
            self.next += 1;
        }
        let v = VarId(self.next);
        self.next += 1;
        v
    }

    fn term(&mut self, t: &Term, bound: &[VarId]) -> Term {
        if !t.vars().iter().any(|v| bound.contains(v)) {
            let p = self.fresh();
            self.params.push(t.clone());
            self.param_vars.push(p);
            return Term::var(p);
        }
        match t.kind() {
            TermKind::Var(_) => t.clone(),
            TermKind::Zero => unreachable!("closed terms are abstracted"),
            TermKind::Succ(s) => Term::succ(self.term(s, bound)),
            TermKind::Add(l, r) => {
                let l = self.term(l, bound);
                Term::add(l, self.term(r, bound))
            }
            TermKind::Mul(l, r) => {
                let l = self.term(l, bound);
                Term::mul(l, self.term(r, bound))
            }
        }
    }

    fn formula(&mut self, f: &Formula, bound: &mut Vec<VarId>) -> Formula {
        match f.kind() {
            FormulaKind::Eq(l, r) => {
                let l = self.term(l, bound);
                Formula::eq(l, self.term(r, bound))
            }
            FormulaKind::Not(g) => Formula::not(self.formula(g, bound)),
            FormulaKind::Or(l, r) => {
                let l = self.formula(l, bound);
                Formula::or(l, self.formula(r, bound))
            }
            FormulaKind::And(l, r) => {
                let l = self.formula(l, bound);
                Formula::and(l, self.formula(r, bound))
            }
            FormulaKind::Exists(v, g) | FormulaKind::Forall(v, g) => {
                bound.push(*v);
                let body = self.formula(g, bound);
                bound.pop();
                if matches!(f.kind(), FormulaKind::Exists(..)) {
                    Formula::exists(*v, body)
                } else {
                    Formula::forall(*v, body)
                }
            }
        }
    }
}

/// Abstract every maximal subterm that mentions no variable bound at its
/// position. Parameters are named by the lowest indices not used as
/// binders, in left-to-right order of occurrence, which fixes a canonical
/// representative.
pub fn trivialise(f: &Formula) -> Template {
    let mut a = Abstractor {
        binders: f.binders(),
        next: 0,
        params: Vec::new(),
        param_vars: Vec::new(),
    };
    let skeleton = a.formula(f, &mut Vec::new());
    Template {
        skeleton,
        params: a.params,
        param_vars: a.param_vars,
    }
}

/// Syntactic similarity: equal trivialisations.
pub fn similar(f1: &Formula, f2: &Formula) -> bool {
    trivialise(f1).skeleton == trivialise(f2).skeleton
}

/// Extensional equivalence of formula/assignment pairs: similar formulas
/// whose abstracted parameters take pointwise equal values.
pub fn ext_equiv(f1: &Formula, a1: &Assignment, f2: &Formula, a2: &Assignment) -> Result<bool> {
    a1.require_covers(f1.free_vars())?;
    a2.require_covers(f2.free_vars())?;
    let (t1, t2) = (trivialise(f1), trivialise(f2));
    if t1.skeleton != t2.skeleton {
        return Ok(false);
    }
    for (p, q) in t1.params.iter().zip(&t2.params) {
        if term_eval(p, a1)? != term_eval(q, a2)? {
            return Ok(false);
        }
    }
    Ok(true)
}
