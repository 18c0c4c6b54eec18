//! The interpretations `ι_a` of a finite ITB fragment in one-sorted arithmetic.

use std::collections::HashMap;

use super::itb::{code_term, itb_code, IndexVar, ItbFormula};
use super::schemes::{big_or_or_false, le_formula, lt_formula};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Term, VarId};

pub const MAX_A: u64 = 4;
pub const MAX_N: usize = 4;

/// Shared data of one family `ι_0, ι_1, …` for a fixed `phi` and fragment.
pub struct Iota<'a> {
    phi: &'a Formula,
    phi_var: Option<VarId>,
    gamma: &'a [ItbFormula],
    codes: Vec<Term>,
    base: u64,
    memo: HashMap<(u64, usize), Formula>,
}

impl<'a> Iota<'a> {
    /// Index variable `β_k` is read as number variable `v_{base+k}`, with
    /// `base` above every number variable of `phi`, `gamma` and `extra`.
    pub fn new(phi: &'a Formula, gamma: &'a [ItbFormula], extra: &[&ItbFormula]) -> Result<Iota<'a>> {
        if gamma.len() > MAX_N {
            return Err(Error::CapExceeded(format!("n = {} > {MAX_N}", gamma.len())));
        }
        if phi.free_vars().len() > 1 {
            return Err(Error::Invalid(format!("{phi} has more than one free variable")));
        }
        if let Some(g) = gamma.iter().find(|g| !g.is_sentence()) {
            return Err(Error::Invalid(format!("{g} is not an ITB sentence")));
        }
        let base = phi
            .all_vars()
            .into_iter()
            .chain(gamma.iter().flat_map(|g| g.number_vars()))
            .chain(extra.iter().flat_map(|g| g.number_vars()))
            .map(|v| v.0 + 1)
            .max()
            .unwrap_or(0);
        Ok(Iota {
            phi,
            phi_var: phi.free_vars().iter().next().copied(),
            gamma,
            codes: gamma.iter().map(|g| code_term(&itb_code(g))).collect(),
            base,
            memo: HashMap::new(),
        })
    }

    pub fn index_var(&self, b: IndexVar) -> VarId {
        VarId(self.base + b.0)
    }

    /// `phi(t)` for a closed `t`.
    pub fn phi_at(&self, t: &Term) -> Result<Formula> {
        match self.phi_var {
            Some(v) => self.phi.subst_closed(v, t),
            None => Ok(self.phi.clone()),
        }
    }

    /// `phi(y)` for a variable `y`.
    fn phi_at_var(&self, y: VarId) -> Result<Formula> {
        match self.phi_var {
            Some(v) => self.phi.rename_free(v, y),
            None => Ok(self.phi.clone()),
        }
    }

    /// `d_a(y) = y ≤ a ∧ phi(y)`.
    pub fn domain(&self, y: VarId, a: u64) -> Result<Formula> {
        Ok(Formula::and(le_formula(&Term::var(y), a), self.phi_at_var(y)?))
    }

    /// `ι_j(γ_i)`, memoised.
    pub fn gamma_at(&mut self, j: u64, i: usize) -> Result<Formula> {
        if let Some(f) = self.memo.get(&(j, i)) {
            return Ok(f.clone());
        }
        let g = &self.gamma[i];
        let out = self.translate(g, j)?;
        self.memo.insert((j, i), out.clone());
        Ok(out)
    }

    /// `⋁_{i<n} (x = ⌜γ_i⌝ ∧ ⋁_{j<a} ((α = j̄ ∧ phi(j̄)) ∧ ι_j(γ_i)))`.
    pub fn truth_clause(&mut self, alpha: &Term, x: &Term, a: u64) -> Result<Formula> {
        let mut outer = Vec::with_capacity(self.gamma.len());
        for i in 0..self.gamma.len() {
            let mut inner = Vec::with_capacity(a as usize);
            for j in 0..a {
                let jn = Term::numeral(j);
                let guard = Formula::and(Formula::eq(alpha.clone(), jn.clone()), self.phi_at(&jn)?);
                inner.push(Formula::and(guard, self.gamma_at(j, i)?));
            }
            outer.push(Formula::and(
                Formula::eq(x.clone(), self.codes[i].clone()),
                big_or_or_false(&inner),
            ));
        }
        Ok(big_or_or_false(&outer))
    }

    /// `ι_a(f)`.
    pub fn translate(&mut self, f: &ItbFormula, a: u64) -> Result<Formula> {
        if a > MAX_A {
            return Err(Error::CapExceeded(format!("a = {a} > {MAX_A}")));
        }
        Ok(match f {
            ItbFormula::Eq(l, r) => Formula::eq(l.clone(), r.clone()),
            ItbFormula::IndexLess(b, c) => lt_formula(&Term::var(self.index_var(*b)), &Term::var(self.index_var(*c))),
            ItbFormula::TruthAt(b, t) => {
                let alpha = Term::var(self.index_var(*b));
                self.truth_clause(&alpha, t, a)?
            }
            ItbFormula::Not(g) => Formula::not(self.translate(g, a)?),
            ItbFormula::Or(l, r) => Formula::or(self.translate(l, a)?, self.translate(r, a)?),
            ItbFormula::And(l, r) => Formula::and(self.translate(l, a)?, self.translate(r, a)?),
            ItbFormula::NumExists(v, g) => Formula::exists(*v, self.translate(g, a)?),
            ItbFormula::NumForall(v, g) => Formula::forall(*v, self.translate(g, a)?),
            ItbFormula::IdxExists(b, g) => {
                let y = self.index_var(*b);
                Formula::exists(y, Formula::and(self.domain(y, a)?, self.translate(g, a)?))
            }
            ItbFormula::IdxForall(b, g) => {
                let y = self.index_var(*b);
                Formula::forall(y, Formula::imp(self.domain(y, a)?, self.translate(g, a)?))
            }
        })
    }
}

/// `ι_a(f)` for the fragment `gamma` and index-domain formula `phi`.
///
/// Number quantifiers range over everything, index quantifiers over
/// `d_a`, `≺` becomes `<`, and `T(β, x)` unfolds into the nested case
/// distinction over the fragment's sentences and the levels `j < a`.
pub fn iota_translate(f: &ItbFormula, a: u64, phi: &Formula, gamma: &[ItbFormula]) -> Result<Formula> {
    Iota::new(phi, gamma, &[f])?.translate(f, a)
}
