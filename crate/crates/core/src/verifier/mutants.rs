//! Deliberately wrong constructions. A suite run on one of these must
//! fail; that is what keeps a passing run from being vacuous.

use crate::constructions::{
    big_and_or_true, case_distinction, permute_seq, stopping_disjunction, value_cases, Permutation,
};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Term};

/// Stopping disjunction with the branch roles swapped:
/// `D_i = (¬α_i ∧ β_i) ∨ (α_i ∧ D_{i+1})`. Agrees with the real one at
/// `c = 0` only.
pub fn swapped_stopping(alphas: &[Formula], betas: &[Formula]) -> Result<Formula> {
    if alphas.len() != betas.len() {
        return Err(Error::LengthMismatch {
            left: alphas.len(),
            right: betas.len(),
        });
    }
    let c = alphas.len().checked_sub(1).ok_or(Error::EmptySequence)?;
    let mut acc = Formula::and(alphas[c].clone(), betas[c].clone());
    for i in (0..c).rev() {
        acc = Formula::or(
            Formula::and(Formula::not(alphas[i].clone()), betas[i].clone()),
            Formula::and(alphas[i].clone(), acc),
        );
    }
    Ok(acc)
}

/// The corollary without its `Unique` antecedent.
pub fn corollary_without_unique(alphas: &[Formula], betas: &[Formula]) -> Result<Formula> {
    Ok(Formula::iff(
        stopping_disjunction(alphas, betas, 0)?,
        case_distinction(alphas, betas)?,
    ))
}

/// Introduction with the wrong disjunct: `(t = ā ∧ φ_{a+1}) → ⋁ (t = ī ∧ φ_i)`.
pub fn misaligned_introduction(t: &Term, phis: &[Formula], a: usize) -> Result<Formula> {
    let cases = value_cases(t, phis.len() - 1);
    let wrong = (a + 1) % phis.len();
    Ok(Formula::imp(
        Formula::and(cases[a].clone(), phis[wrong].clone()),
        case_distinction(&cases, phis)?,
    ))
}

/// Refutation missing the conjunct `¬ t = 0`.
pub fn partial_refutation(t: &Term, phis: &[Formula]) -> Result<Formula> {
    let cases = value_cases(t, phis.len() - 1);
    let negs: Vec<Formula> = cases[1..].iter().cloned().map(Formula::not).collect();
    Ok(Formula::imp(
        big_and_or_true(&negs),
        Formula::not(case_distinction(&cases, phis)?),
    ))
}

/// Permutation equivalence that permutes the cases but not the `φ_i`.
pub fn misaligned_permutation(t: &Term, phis: &[Formula], sigma: &Permutation) -> Result<Formula> {
    let cases = value_cases(t, phis.len() - 1);
    Ok(Formula::iff(
        case_distinction(&cases, phis)?,
        case_distinction(&permute_seq(&cases, sigma)?, phis)?,
    ))
}
