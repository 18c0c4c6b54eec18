//! Checker for partial compositional truth predicates given as finite sets.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;

use super::val;
use crate::report::{Failure, Report};
use crate::syntax::{trivialise, Formula, FormulaKind, Term, TermKind, VarId};

/// Does `candidate` arise from `pattern` by substituting one closed term
/// for the free occurrences of `v`?
fn instance_of(pattern: &Formula, v: VarId, candidate: &Formula) -> bool {
    fn terms(p: &Term, c: &Term, v: VarId, slot: &mut Option<Term>) -> bool {
        match (p.kind(), c.kind()) {
            (TermKind::Var(w), _) if *w == v => {
                if !c.is_closed() {
                    return false;
                }
                match slot {
                    Some(t) => t == c,
                    None => {
                        *slot = Some(c.clone());
                        true
                    }
                }
            }
            (TermKind::Var(a), TermKind::Var(b)) => a == b,
            (TermKind::Zero, TermKind::Zero) => true,
            (TermKind::Succ(a), TermKind::Succ(b)) => terms(a, b, v, slot),
            (TermKind::Add(a, b), TermKind::Add(c, d)) | (TermKind::Mul(a, b), TermKind::Mul(c, d)) => {
                terms(a, c, v, slot) && terms(b, d, v, slot)
            }
            _ => false,
        }
    }
    fn formulas(p: &Formula, c: &Formula, v: VarId, slot: &mut Option<Term>) -> bool {
        if !p.free_vars().contains(&v) {
            return p == c;
        }
        match (p.kind(), c.kind()) {
            (FormulaKind::Eq(a, b), FormulaKind::Eq(x, y)) => terms(a, x, v, slot) && terms(b, y, v, slot),
            (FormulaKind::Not(a), FormulaKind::Not(b)) => formulas(a, b, v, slot),
            (FormulaKind::Or(a, b), FormulaKind::Or(x, y)) | (FormulaKind::And(a, b), FormulaKind::And(x, y)) => {
                formulas(a, x, v, slot) && formulas(b, y, v, slot)
            }
            (FormulaKind::Exists(w, a), FormulaKind::Exists(u, b))
            | (FormulaKind::Forall(w, a), FormulaKind::Forall(u, b)) => w == u && formulas(a, b, v, slot),
            _ => false,
        }
    }
    candidate.is_sentence() && formulas(pattern, candidate, v, &mut None)
}

/// Verify that `t0` behaves as a compositional truth predicate on the
/// sentences it can see: `probe ∪ t0` closed under ¬/∨/∧ subformulas.
///
/// Checked per sentence: closure of `t0` under direct subformulas, the
/// equation, negation, disjunction (and conjunction) clauses, the
/// quantifier clauses relative to the instances present, and
/// extensionality across every pair of visible sentences.
pub fn check_partial_truth_predicate(t0: &[Formula], probe: &[Formula]) -> Report {
    let mut report = Report::new("partial-truth-predicate", None);
    let truths: HashSet<&Formula> = t0.iter().collect();
    let given: HashSet<&Formula> = t0.iter().chain(probe).collect();

    for f in t0.iter().chain(probe) {
        report.check(f.is_sentence(), || Failure {
            input: f.to_string(),
            expected: "sentence".into(),
            actual: format!("free variables {:?}", f.free_vars()),
        });
    }

    // closure: direct subformulas of members of t0 are visible
    for f in t0 {
        if matches!(
            f.kind(),
            FormulaKind::Not(_) | FormulaKind::Or(..) | FormulaKind::And(..)
        ) {
            for child in f.children() {
                let ok = given.contains(child);
                report.check(ok, || Failure {
                    input: format!("closure: {f}"),
                    expected: format!("{child} in probe or T0"),
                    actual: "missing".into(),
                });
            }
        }
    }

    // the domain the axioms are checked on
    let mut domain: Vec<Formula> = Vec::new();
    let mut seen: HashSet<Formula> = HashSet::new();
    let mut stack: Vec<Formula> = t0.iter().chain(probe).filter(|f| f.is_sentence()).cloned().collect();
    while let Some(f) = stack.pop() {
        if !seen.insert(f.clone()) {
            continue;
        }
        if matches!(
            f.kind(),
            FormulaKind::Not(_) | FormulaKind::Or(..) | FormulaKind::And(..)
        ) {
            stack.extend(f.children().into_iter().cloned());
        }
        domain.push(f);
    }
    domain.sort();
    let holds = |f: &Formula| truths.contains(f);

    for f in &domain {
        let shown = || f.to_string();
        match f.kind() {
            FormulaKind::Eq(l, r) => {
                let equal = val(l).ok() == val(r).ok();
                report.check(holds(f) == equal, || Failure {
                    input: format!("axiom 1: {}", shown()),
                    expected: format!("in T0 = {equal}"),
                    actual: format!("in T0 = {}", holds(f)),
                });
            }
            FormulaKind::Not(g) => {
                let want = !holds(g);
                report.check(holds(f) == want, || Failure {
                    input: format!("axiom 2: {}", shown()),
                    expected: format!("in T0 = {want}"),
                    actual: format!("in T0 = {}", holds(f)),
                });
            }
            FormulaKind::Or(a, b) => {
                let want = holds(a) || holds(b);
                report.check(holds(f) == want, || Failure {
                    input: format!("axiom 3: {}", shown()),
                    expected: format!("in T0 = {want}"),
                    actual: format!("in T0 = {}", holds(f)),
                });
            }
            FormulaKind::And(a, b) => {
                let want = holds(a) && holds(b);
                report.check(holds(f) == want, || Failure {
                    input: format!("axiom 3 (dual): {}", shown()),
                    expected: format!("in T0 = {want}"),
                    actual: format!("in T0 = {}", holds(f)),
                });
            }
            FormulaKind::Exists(v, body) => {
                let instances: Vec<&Formula> = domain.iter().filter(|c| instance_of(body, *v, c)).collect();
                let witnessed = instances.iter().any(|c| holds(c));
                report.check(holds(f) == witnessed, || Failure {
                    input: format!("axiom 4: {}", shown()),
                    expected: format!("in T0 = {witnessed} (visible instances: {})", instances.len()),
                    actual: format!("in T0 = {}", holds(f)),
                });
            }
            FormulaKind::Forall(v, body) => {
                let instances: Vec<&Formula> = domain.iter().filter(|c| instance_of(body, *v, c)).collect();
                let refuted = instances.iter().any(|c| !holds(c));
                report.check(holds(f) != refuted, || Failure {
                    input: format!("axiom 4 (dual): {}", shown()),
                    expected: format!("in T0 = {} (visible instances: {})", !refuted, instances.len()),
                    actual: format!("in T0 = {}", holds(f)),
                });
            }
        }
    }

    // extensionality: group by skeleton and parameter values
    let mut groups: BTreeMap<(Formula, Vec<BigUint>), Vec<&Formula>> = BTreeMap::new();
    for f in &domain {
        let t = trivialise(f);
        let values: Option<Vec<BigUint>> = t.params.iter().map(|p| val(p).ok()).collect();
        if let Some(values) = values {
            groups.entry((t.skeleton, values)).or_default().push(f);
        }
    }
    for members in groups.values().filter(|m| m.len() > 1) {
        let first = holds(members[0]);
        for m in &members[1..] {
            report.check(holds(m) == first, || Failure {
                input: format!("axiom 5: {} ~ {}", members[0], m),
                expected: format!("in T0 = {first}"),
                actual: format!("in T0 = {}", holds(m)),
            });
        }
    }
    report
}
