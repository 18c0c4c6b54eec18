//! Suites checked against the standard model: `Tr₀` and the constructions
//! whose truth it decides.

use num_bigint::BigUint;

use super::gen::Gen;
use super::{on_big_stack, CorpusSpec};
use crate::constructions::{acdc_lhs, stopping_disjunction, theta_c, THETA_VAR};
use crate::eval::{check_partial_truth_predicate, lazy_truth, tr0, Assignment};
use crate::report::{Failure, Report};
use crate::syntax::{decode_sentence, trivialise, Formula, FormulaKind, Term, TermKind};

const STREAM_THM32: u64 = 4;
const STREAM_ACDC: u64 = 5;
const STREAM_TR0: u64 = 6;

const DESK_SCALE: &str = "desk-scale analog: standard c and quantifier-free sentences stand in for nonstandard ones";

/// Value of a closed term by plain recursion, sharing nothing with the
/// cached values of the syntax layer.
fn naive_value(t: &Term) -> Option<BigUint> {
    Some(match t.kind() {
        TermKind::Var(_) => return None,
        TermKind::Zero => BigUint::default(),
        TermKind::Succ(s) => naive_value(s)? + 1u32,
        TermKind::Add(l, r) => naive_value(l)? + naive_value(r)?,
        TermKind::Mul(l, r) => naive_value(l)? * naive_value(r)?,
    })
}

/// Truth of a quantifier-free sentence by plain recursion.
fn naive_truth(s: &Formula) -> Option<bool> {
    Some(match s.kind() {
        FormulaKind::Eq(l, r) => naive_value(l)? == naive_value(r)?,
        FormulaKind::Not(f) => !naive_truth(f)?,
        FormulaKind::Or(l, r) => naive_truth(l)? | naive_truth(r)?,
        FormulaKind::And(l, r) => naive_truth(l)? & naive_truth(r)?,
        FormulaKind::Exists(..) | FormulaKind::Forall(..) => return None,
    })
}

/// With a planted least true `α_{k₀}`, the stopping disjunction has the
/// truth value of `β_{k₀}`.
pub fn verify_thm32(spec: &CorpusSpec) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("thm32", Some(spec.seed)).timed(|r| {
            let mut gen = Gen::new(spec.seed, STREAM_THM32);
            let c_max = spec.c_or(50);
            let depth = spec.formula_depth;
            for n in 0..spec.n_or(500) {
                let (c, k0) = match n {
                    0 => (gen.range(0, c_max), 0),
                    1 => {
                        let c = gen.range(0, c_max.min(10));
                        (c, c)
                    }
                    _ => {
                        let c = gen.range(0, c_max);
                        (c, gen.range(0, c.min(10)))
                    }
                };
                let alphas: Vec<Formula> = (0..=c)
                    .map(|i| match i.cmp(&k0) {
                        std::cmp::Ordering::Less => gen.qf_sentence_with_truth(depth, false),
                        std::cmp::Ordering::Equal => gen.qf_sentence_with_truth(depth, true),
                        std::cmp::Ordering::Greater => gen.qf_sentence(depth),
                    })
                    .collect();
                let betas: Vec<Formula> = (0..=c).map(|_| gen.qf_sentence(depth)).collect();
                let planted = (0..k0 as usize).all(|i| naive_truth(&alphas[i]) == Some(false))
                    && naive_truth(&alphas[k0 as usize]) == Some(true);
                let expected = naive_truth(&betas[k0 as usize]);
                let actual = stopping_disjunction(&alphas, &betas, 0).and_then(|f| tr0(&f));
                r.check(planted && Some(actual.clone()) == expected.map(Ok), || Failure {
                    input: format!("c={c} k0={k0} beta_k0={}", betas[k0 as usize]),
                    expected: format!("planted, tr0 = {expected:?}"),
                    actual: format!("planted = {planted}, tr0 = {actual:?}"),
                });
            }
            r.note(DESK_SCALE);
        })
    })
}

/// `Tr₀(⋁_{i≤c} (t = ī ∧ φ_i))` iff `val t ≤ c` and `Tr₀(φ_{val t})`.
pub fn verify_acdc(spec: &CorpusSpec) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("acdc", Some(spec.seed)).timed(|r| {
            let mut gen = Gen::new(spec.seed, STREAM_ACDC);
            let c_max = spec.c_or(20);
            let n = spec.n_or(200);
            let mut out_of_range = 0;
            for k in 0..n {
                let c = gen.range(0, c_max);
                let v = if k % 5 == 4 {
                    gen.range(c + 1, c + 5)
                } else {
                    gen.range(0, c)
                };
                let mut phis: Vec<Formula> = (0..=c).map(|_| gen.qf_sentence(spec.formula_depth)).collect();
                let t = if k == 0 {
                    // the value-0 case with a true disjunct
                    phis[0] = Formula::verum();
                    Term::add(Term::zero(), Term::zero())
                } else {
                    gen.term_with_value(v, spec.term_depth + 1)
                };
                let v = if k == 0 { 0 } else { v };
                out_of_range += u64::from(v > c);
                let expected = if v <= c {
                    naive_truth(&phis[v as usize])
                } else {
                    Some(false)
                };
                let actual = acdc_lhs(&t, &phis).and_then(|f| tr0(&f));
                r.check(Some(actual.clone()) == expected.map(Ok), || Failure {
                    input: format!("c={c} t={t} val={v}"),
                    expected: format!("{expected:?}"),
                    actual: format!("{actual:?}"),
                });
            }
            let want = (n as u64 / 5).min(20);
            r.check(out_of_range >= want, || Failure {
                input: "instances with val t > c".into(),
                expected: format!(">= {want}"),
                actual: out_of_range.to_string(),
            });
            r.note(format!("{out_of_range} instances with val t > c"));
        })
    })
}

/// Replace every parameter of `s`'s trivialisation by a different term of
/// the same value.
fn value_matched(gen: &mut Gen, s: &Formula, depth: u32) -> Option<Formula> {
    let t = trivialise(s);
    let mut terms = Vec::with_capacity(t.params.len());
    for p in &t.params {
        let v: u64 = naive_value(p)?.try_into().ok()?;
        terms.push(gen.term_with_value(v, depth));
    }
    Some(t.instantiate(&terms))
}

/// `fs` closed under direct subformulas.
fn qf_closure(fs: &[Formula]) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut stack: Vec<Formula> = fs.to_vec();
    while let Some(f) = stack.pop() {
        if seen.insert(f.clone()) {
            stack.extend(f.children().into_iter().cloned());
            out.push(f);
        }
    }
    out
}

/// `Tr₀` against an independent evaluator, the compositional axioms at the
/// root of every corpus sentence, and extensionality under value-preserving
/// term replacement.
pub fn verify_tr0_axioms(spec: &CorpusSpec) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("tr0", Some(spec.seed)).timed(|r| {
            let mut gen = Gen::new(spec.seed, STREAM_TR0);
            let depth = spec.formula_depth + 1;
            let corpus: Vec<Formula> = (0..spec.n_or(1000)).map(|_| gen.qf_sentence(depth)).collect();
            for s in &corpus {
                let truth = match tr0(s) {
                    Ok(b) => b,
                    Err(e) => {
                        r.fail(s.to_string(), "a truth value", e.to_string());
                        continue;
                    }
                };
                let sub = |f: &Formula| tr0(f).ok();
                let axiom = match s.kind() {
                    FormulaKind::Eq(l, rt) => Some(naive_value(l) == naive_value(rt)),
                    FormulaKind::Not(f) => sub(f).map(|b| !b),
                    FormulaKind::Or(a, b) => sub(a).zip(sub(b)).map(|(a, b)| a || b),
                    FormulaKind::And(a, b) => sub(a).zip(sub(b)).map(|(a, b)| a && b),
                    FormulaKind::Exists(..) | FormulaKind::Forall(..) => None,
                };
                let twin = value_matched(&mut gen, s, spec.term_depth + 1);
                let twin_truth = twin.as_ref().and_then(|f| tr0(f).ok());
                let double = tr0(&Formula::not(Formula::not(s.clone()))).ok();
                let naive = naive_truth(s);
                let ok = naive == Some(truth)
                    && axiom == Some(truth)
                    && twin_truth == Some(truth)
                    && double == Some(truth);
                r.check(ok, || Failure {
                    input: s.to_string(),
                    expected: format!("independent = root axiom = extensional twin = double negation = {truth}"),
                    actual: format!(
                        "independent {naive:?}, root axiom {axiom:?}, twin {} -> {twin_truth:?}, double negation {double:?}",
                        twin.as_ref().map_or("none".into(), Formula::to_string)
                    ),
                });
            }

            // the set of Tr₀-truths among a closed probe passes the checker
            let probe = qf_closure(&corpus[..corpus.len().min(200)]);
            let truths: Vec<Formula> = probe.iter().filter(|f| tr0(f) == Ok(true)).cloned().collect();
            let mut checked = check_partial_truth_predicate(&truths, &probe);
            checked.notes.clear();
            r.absorb(checked);

            // and a wrong predicate does not
            let wrong = check_partial_truth_predicate(&[Formula::falsum()], &[Formula::falsum()]);
            r.check(!wrong.passed(), || Failure {
                input: "T0 = {~(0 = 0)}".into(),
                expected: "checker rejects".into(),
                actual: "checker accepts".into(),
            });
        })
    })
}

/// `Θ_c(ī)` has the truth value of the sentence coded by `i`, and is false
/// when `i` codes no sentence.
pub fn verify_theta(c_max: u64) -> Report {
    on_big_stack(move || {
        Report::new("theta", None).timed(|r| {
            let theta = theta_c(c_max);
            let free: Vec<_> = theta.free_vars().iter().copied().collect();
            r.expect_eq(|| format!("free variables of theta_{c_max}"), vec![THETA_VAR], free);

            let mut skipped = 0u64;
            let mut expected = Vec::with_capacity(c_max as usize + 1);
            for i in 0..=c_max {
                let want = match decode_sentence(i) {
                    None => Some(false),
                    Some(phi) if phi.is_quantifier_free() => naive_truth(&phi),
                    Some(_) => None,
                };
                expected.push(want);
                let Some(want) = want else {
                    skipped += 1;
                    continue;
                };
                let a = Assignment::from_pairs([(THETA_VAR, i)]);
                let got = lazy_truth(&theta, &a);
                r.check(got == Ok(want), || Failure {
                    input: format!("theta_{c_max}(v0 = {i})"),
                    expected: want.to_string(),
                    actual: format!("{got:?}"),
                });
            }

            // literal substitution of the numeral on a sample
            let sample = (0..=c_max.min(200)).chain((250..=c_max).step_by(250)).chain([c_max]);
            for i in sample {
                let Some(want) = expected[i as usize] else { continue };
                let got = theta
                    .subst_closed(THETA_VAR, &Term::numeral(i))
                    .and_then(|s| lazy_truth(&s, &Assignment::new()));
                r.check(got == Ok(want), || Failure {
                    input: format!("theta_{c_max}({i}) by substitution"),
                    expected: want.to_string(),
                    actual: format!("{got:?}"),
                });
            }
            r.note(format!("{skipped} codes of quantified sentences skipped"));
            r.note("truth of theta(i) is evaluated lazily: only the disjunct selected by i is consulted");
        })
    })
}
