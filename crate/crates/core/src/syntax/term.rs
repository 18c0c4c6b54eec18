use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero as _};

/// A first-order variable `v<index>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u64);

impl VarId {
    pub fn index(self) -> u64 {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

pub(crate) fn mix(seed: u64, value: u64) -> u64 {
    // splitmix64 finaliser over the running state
    let mut z = seed ^ value.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(seed << 6);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermKind {
    Var(VarId),
    Zero,
    Succ(Term),
    Add(Term, Term),
    Mul(Term, Term),
}

#[derive(Debug)]
struct TermNode {
    kind: TermKind,
    hash: u64,
    size: u64,
    vars: BTreeSet<VarId>,
    // value of the term when it is closed
    value: Option<BigUint>,
}

// Deep terms (long numerals) are released with an explicit stack instead
// of recursive drops.
impl Drop for TermNode {
    fn drop(&mut self) {
        let unique = |t: &Term| Arc::strong_count(&t.0) == 1;
        let any_unique = match &self.kind {
            TermKind::Succ(t) => unique(t),
            TermKind::Add(l, r) | TermKind::Mul(l, r) => unique(l) || unique(r),
            TermKind::Var(_) | TermKind::Zero => false,
        };
        if !any_unique {
            return;
        }
        let mut stack = Vec::new();
        take_children(&mut self.kind, &mut stack);
        while let Some(t) = stack.pop() {
            if let Ok(mut node) = Arc::try_unwrap(t.0) {
                take_children(&mut node.kind, &mut stack);
            }
        }
    }
}

fn take_children(kind: &mut TermKind, stack: &mut Vec<Term>) {
    match std::mem::replace(kind, TermKind::Zero) {
        TermKind::Succ(t) => stack.push(t),
        TermKind::Add(l, r) | TermKind::Mul(l, r) => {
            stack.push(l);
            stack.push(r);
        }
        TermKind::Var(_) | TermKind::Zero => {}
    }
}

/// An arithmetical term over `{0, S, +, ×}`.
///
/// Terms are immutable and cheaply clonable; structurally equal subterms may
/// be shared. Each node caches its hash, size, variable set and (for closed
/// terms) its value, so none of these require walking deep numerals.
#[derive(Clone)]
pub struct Term(Arc<TermNode>);

impl Term {
    fn build(kind: TermKind) -> Term {
        let (hash, size, vars, value) = match &kind {
            TermKind::Var(v) => {
                let mut vars = BTreeSet::new();
                vars.insert(*v);
                (mix(1, v.0), 1, vars, None)
            }
            TermKind::Zero => (mix(2, 0), 1, BTreeSet::new(), Some(BigUint::zero())),
            TermKind::Succ(t) => (
                mix(3, t.hash_code()),
                t.size() + 1,
                t.vars().clone(),
                t.value().map(|v| v + BigUint::one()),
            ),
            TermKind::Add(l, r) => (
                mix(mix(4, l.hash_code()), r.hash_code()),
                l.size() + r.size() + 1,
                l.vars().union(r.vars()).copied().collect(),
                l.value().zip(r.value()).map(|(a, b)| a + b),
            ),
            TermKind::Mul(l, r) => (
                mix(mix(5, l.hash_code()), r.hash_code()),
                l.size() + r.size() + 1,
                l.vars().union(r.vars()).copied().collect(),
                l.value().zip(r.value()).map(|(a, b)| a * b),
            ),
        };
        Term(Arc::new(TermNode {
            kind,
            hash,
            size,
            vars,
            value,
        }))
    }

    pub fn var(v: VarId) -> Term {
        Term::build(TermKind::Var(v))
    }

    pub fn zero() -> Term {
        Term::build(TermKind::Zero)
    }

    pub fn succ(t: Term) -> Term {
        Term::build(TermKind::Succ(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(l: Term, r: Term) -> Term {
        Term::build(TermKind::Add(l, r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(l: Term, r: Term) -> Term {
        Term::build(TermKind::Mul(l, r))
    }

    /// The canonical numeral `S…S(0)` with `n` successors.
    pub fn numeral(n: u64) -> Term {
        let mut t = Term::zero();
        for _ in 0..n {
            t = Term::succ(t);
        }
        t
    }

    /// Numeral for an arbitrary-precision natural. Only sensible for values
    /// that fit in memory as a unary chain.
    pub fn numeral_big(n: &BigUint) -> Term {
        let n: u64 = n.try_into().expect("numeral too large to build as a unary chain");
        Term::numeral(n)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub(crate) fn hash_code(&self) -> u64 {
        self.0.hash
    }

    /// Number of nodes in the term tree (shared subterms counted per use).
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// The set of variables occurring in the term.
    pub fn vars(&self) -> &BTreeSet<VarId> {
        &self.0.vars
    }

    pub fn is_closed(&self) -> bool {
        self.0.vars.is_empty()
    }

    /// Value of a closed term, `None` for open terms.
    pub fn value(&self) -> Option<&BigUint> {
        self.0.value.as_ref()
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// If the term is a canonical numeral, the number it denotes.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        loop {
            match cur.kind() {
                TermKind::Zero => return Some(n),
                TermKind::Succ(t) => {
                    n += 1;
                    cur = t;
                }
                _ => return None,
            }
        }
    }

    /// Simultaneously replace variables by terms. No capture can happen
    /// inside a term, so this is total.
    pub fn replace_vars(&self, map: &dyn Fn(VarId) -> Option<Term>) -> Term {
        if self.vars().iter().all(|v| map(*v).is_none()) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(v) => map(*v).unwrap_or_else(|| self.clone()),
            TermKind::Zero => self.clone(),
            TermKind::Succ(t) => Term::succ(t.replace_vars(map)),
            TermKind::Add(l, r) => Term::add(l.replace_vars(map), r.replace_vars(map)),
            TermKind::Mul(l, r) => Term::mul(l.replace_vars(map), r.replace_vars(map)),
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        // numerals are compared without recursion
        if let (Some(a), Some(b)) = (self.as_numeral(), other.as_numeral()) {
            return a == b;
        }
        self.0.kind == other.0.kind
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    /// Orders by cached hash first; ties fall back to structure, so the
    /// order is total and agrees with `==`.
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
                (TermKind::Var(a), TermKind::Var(b)) => a.cmp(b),
                (TermKind::Zero, TermKind::Zero) => Ordering::Equal,
                (TermKind::Succ(a), TermKind::Succ(b)) => a.cmp(b),
                (TermKind::Add(a, b), TermKind::Add(c, d)) | (TermKind::Mul(a, b), TermKind::Mul(c, d)) => {
                    a.cmp(c).then_with(|| b.cmp(d))
                }
                (a, b) => term_rank(a).cmp(&term_rank(b)),
            })
    }
}

fn term_rank(k: &TermKind) -> u8 {
    match k {
        TermKind::Var(_) => 0,
        TermKind::Zero => 1,
        TermKind::Succ(_) => 2,
        TermKind::Add(..) => 3,
        TermKind::Mul(..) => 4,
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TermKind::Var(v) => write!(f, "{v}"),
            TermKind::Zero => f.write_str("0"),
            TermKind::Succ(t) => write!(f, "S({t})"),
            TermKind::Add(l, r) => write!(f, "({l} + {r})"),
            TermKind::Mul(l, r) => write!(f, "({l} * {r})"),
        }
    }
}
