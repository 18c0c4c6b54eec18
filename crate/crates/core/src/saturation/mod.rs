//! A finite satisfaction predicate built by staged saturation over a
//! family of formulas, with assignments drawn from a finite domain.
//!
//! Membership of a pair is decided once per similarity class, classes
//! being visited in `⊴` order so that the subformula classes a clause
//! reads are already final when it is evaluated.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::eval::{term_eval, Assignment};
use crate::report::{Failure, Report};
use crate::syntax::{parse_formula, trivialise, Formula, FormulaKind, VarId};

/// Non-empty finite set of naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain(Vec<BigUint>);

impl Domain {
    pub fn new<I: IntoIterator<Item = u64>>(values: I) -> Result<Domain> {
        let set: BTreeSet<u64> = values.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Invalid("empty domain".into()));
        }
        Ok(Domain(set.into_iter().map(BigUint::from).collect()))
    }

    /// `{lo, …, hi}`.
    pub fn range(lo: u64, hi: u64) -> Result<Domain> {
        Domain::new(lo..=hi)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every assignment of domain values to `vars`, in lexicographic order.
    pub fn assignments(&self, vars: &BTreeSet<VarId>) -> Vec<Assignment> {
        let mut out = vec![Assignment::new()];
        for v in vars {
            out = out
                .iter()
                .flat_map(|a| self.0.iter().map(move |d| a.with(*v, d.clone())))
                .collect();
        }
        out
    }
}

/// Accepts `lo..hi` (inclusive) or a comma-separated list.
impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Domain> {
        let bad = || Error::Invalid(format!("bad domain {s:?}; expected e.g. 0..7 or 0,2,5"));
        let s = s.trim();
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            return Domain::range(lo, hi);
        }
        let values: Vec<u64> = s
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Domain::new(values)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `(skeleton, parameter values)`: two pairs are extensionally equivalent
/// exactly when their keys coincide.
pub type ExtKey = (Formula, Vec<BigUint>);

pub fn ext_key(f: &Formula, a: &Assignment) -> Result<ExtKey> {
    let t = trivialise(f);
    let values = t.params.iter().map(|p| term_eval(p, a)).collect::<Result<_>>()?;
    Ok((t.skeleton, values))
}

/// A set of pairs `(φ, α)` with `α` defined exactly on the free variables
/// of `φ`, over a fixed family of formulas and domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSatPredicate {
    pub domain: Domain,
    pub family: Vec<Formula>,
    pairs: BTreeSet<(Formula, Assignment)>,
    /// `|Sʲ|` for every stage `j`, starting with `S⁰`.
    pub stage_sizes: Vec<usize>,
}

impl PartialSatPredicate {
    pub fn empty(domain: Domain) -> PartialSatPredicate {
        PartialSatPredicate {
            domain,
            family: Vec::new(),
            pairs: BTreeSet::new(),
            stage_sizes: Vec::new(),
        }
    }

    pub fn contains(&self, f: &Formula, a: &Assignment) -> bool {
        self.pairs.contains(&(f.clone(), a.restrict(f.free_vars())))
    }

    /// Insert a pair, restricting the assignment to `f`'s free variables.
    pub fn insert(&mut self, f: &Formula, a: &Assignment) -> Result<bool> {
        a.require_covers(f.free_vars())?;
        Ok(self.pairs.insert((f.clone(), a.restrict(f.free_vars()))))
    }

    pub fn remove(&mut self, f: &Formula, a: &Assignment) -> bool {
        self.pairs.remove(&(f.clone(), a.restrict(f.free_vars())))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Formula, Assignment)> {
        self.pairs.iter()
    }

    pub fn in_family(&self, f: &Formula) -> bool {
        self.family.contains(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityClass {
    pub skeleton: Formula,
    pub members: Vec<Formula>,
    /// Connectives and quantifiers of every member.
    pub logical_count: u64,
}

/// Partition by similarity. Classes and members keep first-occurrence
/// order; duplicates are dropped.
pub fn similarity_classes(phis: &[Formula]) -> Vec<SimilarityClass> {
    let mut out: Vec<SimilarityClass> = Vec::new();
    let mut by_skeleton: HashMap<Formula, usize> = HashMap::new();
    let mut seen = HashSet::new();
    for f in phis {
        if !seen.insert(f.clone()) {
            continue;
        }
        let skeleton = trivialise(f).skeleton;
        match by_skeleton.get(&skeleton) {
            Some(&i) => out[i].members.push(f.clone()),
            None => {
                by_skeleton.insert(skeleton.clone(), out.len());
                out.push(SimilarityClass {
                    logical_count: f.logical_count(),
                    skeleton,
                    members: vec![f.clone()],
                });
            }
        }
    }
    out
}

/// Reflexive-transitive closure of "some member of `i` is a direct
/// subformula of some member of `j`", on class indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassOrder {
    le: Vec<Vec<bool>>,
}

impl ClassOrder {
    pub fn len(&self) -> usize {
        self.le.len()
    }

    pub fn is_empty(&self) -> bool {
        self.le.is_empty()
    }

    /// `[i] ⊴ [j]`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        (0..self.len()).all(|j| j == i || !self.le[j][i])
    }

    /// A linear extension: `[i] ⊴ [j]` with `i ≠ j` puts `i` first.
    pub fn linear_extension(&self, classes: &[SimilarityClass]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        // below-count is strictly monotone along ⊴ in an antisymmetric order
        let below = |i: usize| (0..self.len()).filter(|&j| self.le[j][i]).count();
        order.sort_by_key(|&i| (below(i), classes[i].logical_count, i));
        order
    }
}

pub fn class_order(classes: &[SimilarityClass]) -> Result<ClassOrder> {
    let n = classes.len();
    let index: HashMap<&Formula, usize> = classes.iter().enumerate().map(|(i, c)| (&c.skeleton, i)).collect();
    let mut le = vec![vec![false; n]; n];
    for (j, class) in classes.iter().enumerate() {
        le[j][j] = true;
        for member in &class.members {
            for child in member.children() {
                if let Some(&i) = index.get(&trivialise(child).skeleton) {
                    le[i][j] = true;
                }
            }
        }
    }
    for k in 0..n {
        let through = le[k].clone();
        for row in le.iter_mut().filter(|row| row[k]) {
            for (x, &y) in row.iter_mut().zip(&through) {
                *x |= y;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if le[i][j] && classes[i].logical_count > classes[j].logical_count {
                return Err(Error::Antisymmetry(format!(
                    "{} below {} but has more connectives",
                    classes[i].skeleton, classes[j].skeleton
                )));
            }
            if i < j && le[i][j] && le[j][i] {
                return Err(Error::Antisymmetry(format!(
                    "{} and {} are mutually below",
                    classes[i].skeleton, classes[j].skeleton
                )));
            }
        }
    }
    Ok(ClassOrder { le })
}

fn dedup(phis: &[Formula]) -> Vec<Formula> {
    let mut seen = HashSet::new();
    phis.iter().filter(|f| seen.insert((*f).clone())).cloned().collect()
}

/// `S⁰`: the pairs over the family that are extensionally equivalent to a
/// pair of `prev`, or to `(φ', ∅)` for a seed sentence `φ'`, or are true
/// equations. Nothing else is added, whatever the class of the formula.
pub fn build_s0(
    phis: &[Formula],
    seed: &[Formula],
    prev: &PartialSatPredicate,
    d: &Domain,
) -> Result<PartialSatPredicate> {
    for s in seed {
        s.require_sentence()?;
    }
    let mut known: HashSet<ExtKey> = HashSet::new();
    for (f, a) in prev.iter() {
        known.insert(ext_key(f, a)?);
    }
    for s in seed {
        known.insert(ext_key(s, &Assignment::new())?);
    }
    let family = dedup(phis);
    let mut s0 = PartialSatPredicate::empty(d.clone());
    for f in &family {
        let t = trivialise(f);
        for a in d.assignments(f.free_vars()) {
            let values: Vec<BigUint> = t.params.iter().map(|p| term_eval(p, &a)).collect::<Result<_>>()?;
            let key = (t.skeleton.clone(), values);
            let true_equation = match f.kind() {
                FormulaKind::Eq(l, r) => term_eval(l, &a)? == term_eval(r, &a)?,
                _ => false,
            };
            if true_equation || known.contains(&key) {
                s0.insert(f, &a)?;
            }
        }
    }
    s0.family = family;
    s0.stage_sizes.push(s0.len());
    Ok(s0)
}

/// The clause for `f`'s root connective, read off `s`. `None` when a
/// direct subformula lies outside the family.
fn clause(s: &PartialSatPredicate, f: &Formula, a: &Assignment) -> Result<Option<bool>> {
    let d = &s.domain;
    let sub = |g: &Formula, b: &Assignment| -> Option<bool> { s.in_family(g).then(|| s.contains(g, b)) };
    Ok(match f.kind() {
        FormulaKind::Eq(l, r) => Some(term_eval(l, a)? == term_eval(r, a)?),
        FormulaKind::Not(g) => sub(g, a).map(|x| !x),
        FormulaKind::Or(l, r) => sub(l, a).zip(sub(r, a)).map(|(x, y)| x || y),
        FormulaKind::And(l, r) => sub(l, a).zip(sub(r, a)).map(|(x, y)| x && y),
        FormulaKind::Exists(v, g) | FormulaKind::Forall(v, g) => {
            if !s.in_family(g) {
                return Ok(None);
            }
            let mut hits = d.values().iter().map(|n| s.contains(g, &a.with(*v, n.clone())));
            Some(if matches!(f.kind(), FormulaKind::Exists(..)) {
                hits.any(|x| x)
            } else {
                hits.all(|x| x)
            })
        }
    })
}

/// Stage `Sʲ⁺¹` adds, for one non-minimal class, every member pair whose
/// root clause holds in `Sʲ`; classes follow a linear extension of `⊴`.
pub fn saturate(
    phis: &[Formula],
    seed: &[Formula],
    prev: &PartialSatPredicate,
    d: &Domain,
) -> Result<PartialSatPredicate> {
    let mut s = build_s0(phis, seed, prev, d)?;
    let classes = similarity_classes(&s.family);
    let order = class_order(&classes)?;
    for i in order.linear_extension(&classes) {
        if order.is_minimal(i) {
            continue;
        }
        let mut added = Vec::new();
        for f in &classes[i].members {
            for a in d.assignments(f.free_vars()) {
                if clause(&s, f, &a)? == Some(true) && !s.contains(f, &a) {
                    added.push((f.clone(), a));
                }
            }
        }
        for (f, a) in &added {
            s.insert(f, a)?;
        }
        s.stage_sizes.push(s.len());
    }
    Ok(s)
}

/// `Comp(φ)`: for every assignment over the domain, membership of `(φ, α)`
/// matches the clause of `φ`'s root connective.
pub fn check_comp(s: &PartialSatPredicate, phi: &Formula, d: &Domain) -> Report {
    let mut report = Report::new("comp", None);
    let missing: Vec<&Formula> = phi.children().into_iter().filter(|g| !s.in_family(g)).collect();
    if !missing.is_empty() {
        let list: Vec<String> = missing.iter().map(ToString::to_string).collect();
        report.fail(
            format!("Comp({phi})"),
            "direct subformulas in the family",
            format!("unmatched clause: {} not in family", list.join(", ")),
        );
        return report;
    }
    for a in d.assignments(phi.free_vars()) {
        let shown = || format!("Comp({phi}) at {a}");
        match clause(s, phi, &a) {
            Ok(Some(want)) => {
                let got = s.contains(phi, &a);
                report.check(got == want, || Failure {
                    input: shown(),
                    expected: format!("S = {want}"),
                    actual: format!("S = {got}"),
                });
            }
            Ok(None) => unreachable!("subformulas checked above"),
            Err(e) => report.fail(shown(), "clause evaluates", e.to_string()),
        }
    }
    report
}

/// Extensionally equivalent pairs over the family agree on membership.
pub fn check_extensionality(s: &PartialSatPredicate) -> Report {
    let mut report = Report::new("extensionality", None);
    let mut groups: BTreeMap<ExtKey, Vec<(Formula, Assignment, bool)>> = BTreeMap::new();
    for f in &s.family {
        for a in s.domain.assignments(f.free_vars()) {
            match ext_key(f, &a) {
                Ok(key) => groups
                    .entry(key)
                    .or_default()
                    .push((f.clone(), a.clone(), s.contains(f, &a))),
                Err(e) => report.fail(format!("({f}, {a})"), "key evaluates", e.to_string()),
            }
        }
    }
    for members in groups.values() {
        let (f0, a0, m0) = &members[0];
        for (f, a, m) in &members[1..] {
            report.check(m == m0, || Failure {
                input: format!("({f0}, {a0}) ~ ({f}, {a})"),
                expected: format!("S = {m0}"),
                actual: format!("S = {m}"),
            });
        }
    }
    report
}

/// Every seed sentence is satisfied by the empty assignment.
pub fn check_agreement(s: &PartialSatPredicate, seed: &[Formula]) -> Report {
    let mut report = Report::new("agreement", None);
    for f in seed {
        let got = s.contains(f, &Assignment::new());
        report.check(got, || Failure {
            input: f.to_string(),
            expected: "(φ, ∅) in S".into(),
            actual: if s.in_family(f) {
                "absent".into()
            } else {
                "absent (outside the family)".into()
            },
        });
    }
    report
}

/// One formula per line; blank lines and lines starting with `#` are skipped.
pub fn parse_family(text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            let lead = line.len() - line.trim_start().len();
            out.push(parse_formula(trimmed).map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse {
                    offset: offset + lead + o,
                    message,
                },
                other => other,
            })?);
        }
        offset += line.len();
    }
    Ok(out)
}

/// Every formula of `phis` with all its subformulas, subformulas first.
pub fn subformula_closure(phis: &[Formula]) -> Vec<Formula> {
    fn visit(f: &Formula, seen: &mut HashSet<Formula>, out: &mut Vec<Formula>) {
        if seen.contains(f) {
            return;
        }
        for c in f.children() {
            visit(c, seen, out);
        }
        seen.insert(f.clone());
        out.push(f.clone());
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in phis {
        visit(f, &mut seen, &mut out);
    }
    out
}

#[cfg(test)]
mod tests;
