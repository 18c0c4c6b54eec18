use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use super::term::{mix, Term, VarId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaKind {
    Eq(Term, Term),
    Not(Formula),
    Or(Formula, Formula),
    And(Formula, Formula),
    Exists(VarId, Formula),
    Forall(VarId, Formula),
}

#[derive(Debug)]
struct FormulaNode {
    kind: FormulaKind,
    hash: u64,
    size: u64,
    free: BTreeSet<VarId>,
    quantifier_free: bool,
    // connectives plus quantifiers
    logical: u64,
}

// Long connective chains are released with an explicit stack; the
// placeholder left behind in each node is a shared `0 = 0`.
impl Drop for FormulaNode {
    fn drop(&mut self) {
        let unique = |f: &Formula| Arc::strong_count(&f.0) == 1;
        let any_unique = match &self.kind {
            FormulaKind::Eq(..) => false,
            FormulaKind::Not(f) | FormulaKind::Exists(_, f) | FormulaKind::Forall(_, f) => unique(f),
            FormulaKind::Or(l, r) | FormulaKind::And(l, r) => unique(l) || unique(r),
        };
        if !any_unique {
            return;
        }
        let mut stack = Vec::new();
        take_children(&mut self.kind, &mut stack);
        while let Some(f) = stack.pop() {
            if let Ok(mut node) = Arc::try_unwrap(f.0) {
                take_children(&mut node.kind, &mut stack);
            }
        }
    }
}

fn placeholder() -> FormulaKind {
    static ZERO: OnceLock<Term> = OnceLock::new();
    let z = ZERO.get_or_init(Term::zero);
    FormulaKind::Eq(z.clone(), z.clone())
}

fn take_children(kind: &mut FormulaKind, stack: &mut Vec<Formula>) {
    if matches!(kind, FormulaKind::Eq(..)) {
        return;
    }
    match std::mem::replace(kind, placeholder()) {
        FormulaKind::Not(f) | FormulaKind::Exists(_, f) | FormulaKind::Forall(_, f) => stack.push(f),
        FormulaKind::Or(l, r) | FormulaKind::And(l, r) => {
            stack.push(l);
            stack.push(r);
        }
        FormulaKind::Eq(..) => {}
    }
}

/// An arithmetical formula. Immutable, cheaply clonable, with cached
/// free variables, size and hash.
#[derive(Clone)]
pub struct Formula(Arc<FormulaNode>);

impl Formula {
    fn build(kind: FormulaKind) -> Formula {
        let (hash, size, free, quantifier_free, logical) = match &kind {
            FormulaKind::Eq(l, r) => (
                mix(mix(11, l.hash_code()), r.hash_code()),
                l.size() + r.size() + 1,
                l.vars().union(r.vars()).copied().collect(),
                true,
                0,
            ),
            FormulaKind::Not(f) => (
                mix(12, f.hash_code()),
                f.size() + 1,
                f.free_vars().clone(),
                f.is_quantifier_free(),
                f.logical_count() + 1,
            ),
            FormulaKind::Or(l, r) | FormulaKind::And(l, r) => {
                let tag = if matches!(kind, FormulaKind::Or(..)) { 13 } else { 14 };
                let free = if l.free_vars().is_empty() {
                    r.free_vars().clone()
                } else {
                    l.free_vars().union(r.free_vars()).copied().collect()
                };
                (
                    mix(mix(tag, l.hash_code()), r.hash_code()),
                    l.size() + r.size() + 1,
                    free,
                    l.is_quantifier_free() && r.is_quantifier_free(),
                    l.logical_count() + r.logical_count() + 1,
                )
            }
            FormulaKind::Exists(v, f) | FormulaKind::Forall(v, f) => {
                let tag = if matches!(kind, FormulaKind::Exists(..)) {
                    15
                } else {
                    16
                };
                let mut free = f.free_vars().clone();
                free.remove(v);
                (
                    mix(mix(tag, v.0), f.hash_code()),
                    f.size() + 1,
                    free,
                    false,
                    f.logical_count() + 1,
                )
            }
        };
        Formula(Arc::new(FormulaNode {
            kind,
            hash,
            size,
            free,
            quantifier_free,
            logical,
        }))
    }

    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::build(FormulaKind::Eq(l, r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::build(FormulaKind::Not(f))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::build(FormulaKind::Or(l, r))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::build(FormulaKind::And(l, r))
    }

    pub fn exists(v: VarId, f: Formula) -> Formula {
        Formula::build(FormulaKind::Exists(v, f))
    }

    pub fn forall(v: VarId, f: Formula) -> Formula {
        Formula::build(FormulaKind::Forall(v, f))
    }

    /// `l → r`, expanded to `¬l ∨ r`.
    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::or(Formula::not(l), r)
    }

    /// `l ↔ r`, expanded to `(¬l ∨ r) ∧ (¬r ∨ l)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    /// The sentence `0 = 0`.
    pub fn verum() -> Formula {
        Formula::eq(Term::zero(), Term::zero())
    }

    /// The sentence `¬(0 = 0)`.
    pub fn falsum() -> Formula {
        Formula::not(Formula::verum())
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub(crate) fn hash_code(&self) -> u64 {
        self.0.hash
    }

    /// Node count, including term nodes.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn free_vars(&self) -> &BTreeSet<VarId> {
        &self.0.free
    }

    pub fn is_sentence(&self) -> bool {
        self.0.free.is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.0.quantifier_free
    }

    /// Total number of connectives and quantifiers.
    pub fn logical_count(&self) -> u64 {
        self.0.logical
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn require_sentence(&self) -> Result<()> {
        if self.is_sentence() {
            Ok(())
        } else {
            let vars: Vec<String> = self.free_vars().iter().map(|v| v.to_string()).collect();
            Err(Error::NotSentence(vars.join(", ")))
        }
    }

    /// Direct subformulas, left to right. Quantifier bodies keep their
    /// bound variable free.
    pub fn children(&self) -> Vec<&Formula> {
        match self.kind() {
            FormulaKind::Eq(..) => vec![],
            FormulaKind::Not(f) | FormulaKind::Exists(_, f) | FormulaKind::Forall(_, f) => vec![f],
            FormulaKind::Or(l, r) | FormulaKind::And(l, r) => vec![l, r],
        }
    }

    /// Every variable used as a quantifier binder anywhere in the formula.
    pub fn binders(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let FormulaKind::Exists(v, _) | FormulaKind::Forall(v, _) = f.kind() {
                out.insert(*v);
            }
            stack.extend(f.children());
        }
        out
    }

    /// Every variable occurring anywhere, free, bound or as a binder.
    pub fn all_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f.kind() {
                FormulaKind::Eq(l, r) => {
                    out.extend(l.vars());
                    out.extend(r.vars());
                }
                FormulaKind::Exists(v, _) | FormulaKind::Forall(v, _) => {
                    out.insert(*v);
                }
                _ => {}
            }
            stack.extend(f.children());
        }
        out
    }

    /// Replace free occurrences of variables by terms, without any renaming.
    /// The caller guarantees no capture: either the replacement terms are
    /// closed, or their variables are not bound on the path to the
    /// replaced occurrence.
    pub(crate) fn replace_free(&self, map: &dyn Fn(VarId) -> Option<Term>) -> Formula {
        if self.free_vars().iter().all(|v| map(*v).is_none()) {
            return self.clone();
        }
        match self.kind() {
            FormulaKind::Eq(l, r) => Formula::eq(l.replace_vars(map), r.replace_vars(map)),
            FormulaKind::Not(f) => Formula::not(f.replace_free(map)),
            FormulaKind::Or(l, r) => Formula::or(l.replace_free(map), r.replace_free(map)),
            FormulaKind::And(l, r) => Formula::and(l.replace_free(map), r.replace_free(map)),
            FormulaKind::Exists(v, f) | FormulaKind::Forall(v, f) => {
                let bound = *v;
                let inner = f.replace_free(&|w| if w == bound { None } else { map(w) });
                if matches!(self.kind(), FormulaKind::Exists(..)) {
                    Formula::exists(bound, inner)
                } else {
                    Formula::forall(bound, inner)
                }
            }
        }
    }

    /// Substitute a closed term for every free occurrence of `v`.
    pub fn subst_closed(&self, v: VarId, t: &Term) -> Result<Formula> {
        if !t.is_closed() {
            return Err(Error::OpenTerm);
        }
        Ok(self.replace_free(&|w| (w == v).then(|| t.clone())))
    }

    /// Rename the free variable `from` to `to`. Fails when `to` would be
    /// captured by a binder above an occurrence of `from`.
    pub fn rename_free(&self, from: VarId, to: VarId) -> Result<Formula> {
        if from == to {
            return Ok(self.clone());
        }
        fn captured(f: &Formula, from: VarId, to: VarId, under_to: bool) -> bool {
            if !f.free_vars().contains(&from) {
                return false;
            }
            match f.kind() {
                FormulaKind::Eq(..) => under_to,
                FormulaKind::Exists(v, g) | FormulaKind::Forall(v, g) => captured(g, from, to, under_to || *v == to),
                _ => f.children().into_iter().any(|g| captured(g, from, to, under_to)),
            }
        }
        if captured(self, from, to, false) {
            return Err(Error::VariableClash(format!(
                "renaming {from} to {to} would be captured"
            )));
        }
        let target = Term::var(to);
        Ok(self.replace_free(&|w| (w == from).then(|| target.clone())))
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        self.0.kind == other.0.kind
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        self.0
            .hash
            .cmp(&other.0.hash)
            .then(self.0.size.cmp(&other.0.size))
            .then_with(|| match (self.kind(), other.kind()) {
                (FormulaKind::Eq(a, b), FormulaKind::Eq(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
                (FormulaKind::Not(a), FormulaKind::Not(b)) => a.cmp(b),
                (FormulaKind::Or(a, b), FormulaKind::Or(c, d)) | (FormulaKind::And(a, b), FormulaKind::And(c, d)) => {
                    a.cmp(c).then_with(|| b.cmp(d))
                }
                (FormulaKind::Exists(v, a), FormulaKind::Exists(w, b))
                | (FormulaKind::Forall(v, a), FormulaKind::Forall(w, b)) => v.cmp(w).then_with(|| a.cmp(b)),
                (a, b) => formula_rank(a).cmp(&formula_rank(b)),
            })
    }
}

fn formula_rank(k: &FormulaKind) -> u8 {
    match k {
        FormulaKind::Eq(..) => 0,
        FormulaKind::Not(_) => 1,
        FormulaKind::Or(..) => 2,
        FormulaKind::And(..) => 3,
        FormulaKind::Exists(..) => 4,
        FormulaKind::Forall(..) => 5,
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FormulaKind::Eq(l, r) => write!(f, "({l} = {r})"),
            FormulaKind::Not(g) => write!(f, "~{g}"),
            FormulaKind::Or(l, r) => write!(f, "({l} | {r})"),
            FormulaKind::And(l, r) => write!(f, "({l} & {r})"),
            FormulaKind::Exists(v, g) => write!(f, "E {v} {g}"),
            FormulaKind::Forall(v, g) => write!(f, "A {v} {g}"),
        }
    }
}
