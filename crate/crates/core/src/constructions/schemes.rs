use std::ops::Deref;

use crate::error::{Error, Result};
use crate::syntax::{decode_sentence, lowest_unused, Formula, Term, VarId};

/// A list of sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceSeq(Vec<Formula>);

impl SentenceSeq {
    pub fn new(fs: Vec<Formula>) -> Result<SentenceSeq> {
        require_sentences(&fs)?;
        Ok(SentenceSeq(fs))
    }

    pub fn into_inner(self) -> Vec<Formula> {
        self.0
    }
}

impl Deref for SentenceSeq {
    type Target = [Formula];

    fn deref(&self) -> &[Formula] {
        &self.0
    }
}

fn require_sentences(fs: &[Formula]) -> Result<()> {
    fs.iter().try_for_each(Formula::require_sentence)
}

fn require_non_empty(fs: &[Formula]) -> Result<()> {
    if fs.is_empty() {
        Err(Error::EmptySequence)
    } else {
        Ok(())
    }
}

fn fold_left(fs: &[Formula], join: fn(Formula, Formula) -> Formula) -> Result<Formula> {
    require_non_empty(fs)?;
    let mut acc = fs[0].clone();
    for f in &fs[1..] {
        acc = join(acc, f.clone());
    }
    Ok(acc)
}

/// `((f₀ ∨ f₁) ∨ f₂) ∨ …`
pub fn big_or_left(fs: &[Formula]) -> Result<Formula> {
    fold_left(fs, Formula::or)
}

/// `((f₀ ∧ f₁) ∧ f₂) ∧ …`
pub fn big_and_left(fs: &[Formula]) -> Result<Formula> {
    fold_left(fs, Formula::and)
}

/// Left-grouped disjunction, with the empty disjunction read as `¬(0=0)`.
pub fn big_or_or_false(fs: &[Formula]) -> Formula {
    big_or_left(fs).unwrap_or_else(|_| Formula::falsum())
}

/// Left-grouped conjunction, with the empty conjunction read as `0=0`.
pub fn big_and_or_true(fs: &[Formula]) -> Formula {
    big_and_left(fs).unwrap_or_else(|_| Formula::verum())
}

/// Disjunction of `betas` with stopping condition `alphas`, from index `j`:
///
/// ```text
/// D_c = α_c ∧ β_c
/// D_i = (α_i ∧ β_i) ∨ (¬α_i ∧ D_{i+1})
/// ```
pub fn stopping_disjunction(alphas: &[Formula], betas: &[Formula], j: usize) -> Result<Formula> {
    if alphas.len() != betas.len() {
        return Err(Error::LengthMismatch {
            left: alphas.len(),
            right: betas.len(),
        });
    }
    require_non_empty(alphas)?;
    let c = alphas.len() - 1;
    if j > c {
        return Err(Error::IndexOutOfRange { index: j, max: c });
    }
    let mut acc = Formula::and(alphas[c].clone(), betas[c].clone());
    for i in (j..c).rev() {
        acc = Formula::or(
            Formula::and(alphas[i].clone(), betas[i].clone()),
            Formula::and(Formula::not(alphas[i].clone()), acc),
        );
    }
    Ok(acc)
}

/// `⋁_i (α_i ∧ ⋀_{j≠i} ¬α_j)`: exactly one of the `alphas` holds.
pub fn unique(alphas: &[Formula]) -> Result<Formula> {
    require_non_empty(alphas)?;
    let disjuncts: Vec<Formula> = (0..alphas.len())
        .map(|i| {
            let others: Vec<Formula> = alphas
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, a)| Formula::not(a.clone()))
                .collect();
            Formula::and(alphas[i].clone(), big_and_or_true(&others))
        })
        .collect();
    big_or_left(&disjuncts)
}

/// Pairwise conjunctions `α_i ∧ β_i`, disjoined to the left.
pub fn case_distinction(alphas: &[Formula], betas: &[Formula]) -> Result<Formula> {
    if alphas.len() != betas.len() {
        return Err(Error::LengthMismatch {
            left: alphas.len(),
            right: betas.len(),
        });
    }
    let pairs: Vec<Formula> = alphas
        .iter()
        .zip(betas)
        .map(|(a, b)| Formula::and(a.clone(), b.clone()))
        .collect();
    big_or_left(&pairs)
}

/// The atoms `t = ī` for `i = 0..=c`.
pub fn value_cases(t: &Term, c: usize) -> Vec<Formula> {
    let mut n = Term::zero();
    let mut out = Vec::with_capacity(c + 1);
    for _ in 0..=c {
        out.push(Formula::eq(t.clone(), n.clone()));
        n = Term::succ(n);
    }
    out
}

/// `⋁_{i≤c} (t = ī ∧ φ_i)`, left-grouped.
pub fn acdc_lhs(t: &Term, phis: &[Formula]) -> Result<Formula> {
    if !t.is_closed() {
        return Err(Error::OpenTerm);
    }
    require_non_empty(phis)?;
    require_sentences(phis)?;
    case_distinction(&value_cases(t, phis.len() - 1), phis)
}

/// `Unique(α) → (stopping(α, β) ↔ ⋁ (α_i ∧ β_i))`.
pub fn corollary_formula(alphas: &[Formula], betas: &[Formula]) -> Result<Formula> {
    let stop = stopping_disjunction(alphas, betas, 0)?;
    let cases = case_distinction(alphas, betas)?;
    Ok(Formula::imp(unique(alphas)?, Formula::iff(stop, cases)))
}

/// The free variable of [`theta_c`].
pub const THETA_VAR: VarId = VarId(0);

/// `Θ_c(x) = ⋁_{i≤c} (x = ī ∧ φ_i)` where `φ_i` is the sentence coded by
/// `i`, or `¬(0=0)` when `i` codes no sentence.
pub fn theta_c(c: u64) -> Formula {
    let x = Term::var(THETA_VAR);
    let mut n = Term::zero();
    let mut acc: Option<Formula> = None;
    for i in 0..=c {
        let phi = decode_sentence(i).unwrap_or_else(Formula::falsum);
        let disjunct = Formula::and(Formula::eq(x.clone(), n.clone()), phi);
        acc = Some(match acc {
            None => disjunct,
            Some(a) => Formula::or(a, disjunct),
        });
        n = Term::succ(n);
    }
    acc.expect("c + 1 >= 1 disjuncts")
}

/// `x ≤ a` as `∃z (z + x = ā)` with `z` the lowest index not in `x`.
pub fn le_formula(x: &Term, a: u64) -> Formula {
    let z = lowest_unused(x.vars());
    Formula::exists(z, Formula::eq(Term::add(Term::var(z), x.clone()), Term::numeral(a)))
}

/// `x < y` as `∃z (S(z) + x = y)`.
pub fn lt_formula(x: &Term, y: &Term) -> Formula {
    let used = x.vars().union(y.vars()).copied().collect();
    let z = lowest_unused(&used);
    Formula::exists(
        z,
        Formula::eq(Term::add(Term::succ(Term::var(z)), x.clone()), y.clone()),
    )
}

/// A bijection on `{0, …, c}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Permutation> {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            if i >= map.len() || seen[i] {
                return Err(Error::InvalidPermutation(format!("{map:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(map))
    }

    pub fn identity(len: usize) -> Permutation {
        Permutation((0..len).collect())
    }

    /// Transposition of `i` and `j` on `{0, …, len-1}`.
    pub fn swap(len: usize, i: usize, j: usize) -> Result<Permutation> {
        let mut map: Vec<usize> = (0..len).collect();
        if i >= len || j >= len {
            return Err(Error::InvalidPermutation(format!("swap({i}, {j}) on {len} points")));
        }
        map.swap(i, j);
        Ok(Permutation(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Entry `i` of the result is `fs[σ(i)]`.
pub fn permute_seq(fs: &[Formula], sigma: &Permutation) -> Result<Vec<Formula>> {
    if fs.len() != sigma.len() {
        return Err(Error::LengthMismatch {
            left: fs.len(),
            right: sigma.len(),
        });
    }
    Ok((0..fs.len()).map(|i| fs[sigma.apply(i)].clone()).collect())
}
