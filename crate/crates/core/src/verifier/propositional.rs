//! Suites whose claims are propositional: the stopping-disjunction
//! equivalence, the corollary tautology, the proof obligations of the
//! case-distinction argument, and engine agreement.

use rand::seq::SliceRandom;

use super::gen::Gen;
use super::mutants;
use super::{on_big_stack, CorpusSpec};
use crate::constructions::{
    big_and_or_true, case_distinction, corollary_formula, permute_seq, stopping_disjunction, value_cases, Permutation,
};
use crate::error::Result;
use crate::prop::{
    dpll, dpll_countermodel, eval_valuation, export_dimacs, parse_dimacs, skeleton, skeleton_with, to_cnf_tseitin,
    truth_table_countermodel, AtomId, AtomTable, PropFormula, Valuation,
};
use crate::report::{Failure, Report};
use crate::syntax::{Formula, Term};

const STREAM_PROP33: u64 = 1;
const STREAM_COR34: u64 = 2;
const STREAM_OBLIGATIONS: u64 = 3;
const STREAM_ENGINES: u64 = 8;

/// `α_i = (ī = 0)`.
pub(crate) fn alpha_atoms(c: usize) -> Vec<Formula> {
    (0..=c as u64)
        .map(|i| Formula::eq(Term::numeral(i), Term::zero()))
        .collect()
}

/// `β_i = (ī = 1)`.
pub(crate) fn beta_atoms(c: usize) -> Vec<Formula> {
    (0..=c as u64)
        .map(|i| Formula::eq(Term::numeral(i), Term::numeral(1)))
        .collect()
}

type Builder = fn(&[Formula], &[Formula]) -> Result<Formula>;

fn real_stopping(alphas: &[Formula], betas: &[Formula]) -> Result<Formula> {
    stopping_disjunction(alphas, betas, 0)
}

/// Stopping disjunction, case distinction and `β_k` agree on every
/// valuation making exactly one `α_k` true.
pub fn verify_prop33(spec: &CorpusSpec) -> Report {
    verify_prop33_with(spec, real_stopping)
}

/// [`verify_prop33`] with the stopping disjunction built by `build`.
pub fn verify_prop33_with(spec: &CorpusSpec, build: Builder) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("prop33", Some(spec.seed)).timed(|r| {
            let mut gen = Gen::new(spec.seed, STREAM_PROP33);
            let c_max = spec.c_or(5) as usize;
            for c in 0..=c_max {
                if let Err(e) = prop33_at(c, build, &mut gen, spec.n_or(256), r) {
                    r.fail(format!("c={c}"), "construction", e.to_string());
                }
            }
        })
    })
}

fn prop33_at(c: usize, build: Builder, gen: &mut Gen, samples: usize, r: &mut Report) -> Result<()> {
    let (alphas, betas) = (alpha_atoms(c), beta_atoms(c));
    let mut table = AtomTable::new();
    let a_ids: Vec<AtomId> = alphas.iter().map(|a| table.intern(a)).collect();
    let b_ids: Vec<AtomId> = betas.iter().map(|b| table.intern(b)).collect();
    let stop = skeleton_with(&mut table, &build(&alphas, &betas)?)?;
    let cases = skeleton_with(&mut table, &case_distinction(&alphas, &betas)?)?;
    let exhaustive = c <= 5;
    for k in 0..=c {
        let patterns: Vec<u64> = if exhaustive {
            (0..1u64 << (c + 1)).collect()
        } else {
            (0..samples / (c + 1)).map(|_| gen.word()).collect()
        };
        for bits in patterns {
            let mut v = Valuation::new();
            for (i, a) in a_ids.iter().enumerate() {
                v.set(*a, i == k);
            }
            for (i, b) in b_ids.iter().enumerate() {
                v.set(*b, bits >> (i % 64) & 1 == 1);
            }
            let s = eval_valuation(&stop, &v)?;
            let d = eval_valuation(&cases, &v)?;
            let want = v.get(b_ids[k]).expect("set above");
            r.check(s == want && d == want, || Failure {
                input: format!("c={c} k={k} valuation {v}"),
                expected: format!("stopping = cases = beta_{k} = {want}"),
                actual: format!("stopping = {s}, cases = {d}"),
            });
        }
    }
    Ok(())
}

/// Check that `f` is (or is not) a propositional tautology. A claimed
/// countermodel is re-evaluated before it is accepted.
fn expect_tautology(r: &mut Report, label: &str, f: &Formula, want: bool, truth_table: bool) {
    let (p, _) = match skeleton(f) {
        Ok(x) => x,
        Err(e) => {
            r.fail(label, "sentence", e.to_string());
            return;
        }
    };
    let cm = if truth_table {
        match truth_table_countermodel(&p) {
            Ok(cm) => cm,
            Err(e) => {
                r.fail(label, "truth table", e.to_string());
                return;
            }
        }
    } else {
        dpll_countermodel(&p)
    };
    let genuine = cm.as_ref().is_none_or(|v| eval_valuation(&p, v) == Ok(false));
    let got = cm.is_none();
    r.check(got == want && genuine, || Failure {
        input: label.to_string(),
        expected: if want {
            "tautology".into()
        } else {
            "countermodel".into()
        },
        actual: match &cm {
            None => "tautology".into(),
            Some(v) if genuine => format!("countermodel {v}"),
            Some(v) => format!("spurious countermodel {v}"),
        },
    });
}

/// One proof obligation of the case-distinction argument.
pub(crate) struct Obligation {
    pub name: String,
    pub formula: Formula,
    pub tautology: bool,
}

/// `t = S0 + S0` and `φ_i = (ī = i+1)`: every atom is distinct.
fn obligation_terms(c: usize) -> (Term, Vec<Formula>) {
    let t = Term::add(Term::numeral(1), Term::numeral(1));
    let phis = (0..=c as u64)
        .map(|i| Formula::eq(Term::numeral(i), Term::numeral(i + 1)))
        .collect();
    (t, phis)
}

/// Introduction, refutation, permutation and the `Unique` bridge at `c`,
/// followed (when `with_mutants` is set and `c ≥ 1`) by a wrong variant of each.
pub(crate) fn obligations(c: usize, gen: &mut Gen, with_mutants: bool) -> Result<Vec<Obligation>> {
    let (t, phis) = obligation_terms(c);
    let cases = value_cases(&t, c);
    let lhs = case_distinction(&cases, &phis)?;
    let mut out = Vec::new();
    let mut push = |name: String, formula: Formula, tautology: bool| {
        out.push(Obligation {
            name: format!("c={c} {name}"),
            formula,
            tautology,
        })
    };
    for a in 0..=c {
        let intro = Formula::imp(Formula::and(cases[a].clone(), phis[a].clone()), lhs.clone());
        push(format!("introduction a={a}"), intro, true);
    }
    let negs: Vec<Formula> = cases.iter().cloned().map(Formula::not).collect();
    push(
        "refutation".into(),
        Formula::imp(big_and_or_true(&negs), Formula::not(lhs.clone())),
        true,
    );

    let mut sigmas: Vec<(String, Permutation)> = Vec::new();
    for a in 0..=c {
        sigmas.push((format!("swap(0,{a})"), Permutation::swap(c + 1, 0, a)?));
    }
    let mut shuffled: Vec<usize> = (0..=c).collect();
    shuffled.shuffle(gen.rng());
    sigmas.push((format!("{shuffled:?}"), Permutation::new(shuffled)?));
    for (label, sigma) in &sigmas {
        let pc = permute_seq(&cases, sigma)?;
        let pp = permute_seq(&phis, sigma)?;
        push(
            format!("permutation {label}"),
            Formula::iff(lhs.clone(), case_distinction(&pc, &pp)?),
            true,
        );
    }
    push("unique bridge".into(), corollary_formula(&cases, &phis)?, true);
    let (label, sigma) = sigmas.last().expect("non-empty");
    let bridged = corollary_formula(&permute_seq(&cases, sigma)?, &permute_seq(&phis, sigma)?)?;
    push(format!("unique bridge {label}"), bridged, true);

    if with_mutants && c >= 1 {
        push(
            "mutant introduction".into(),
            mutants::misaligned_introduction(&t, &phis, 0)?,
            false,
        );
        push(
            "mutant refutation".into(),
            mutants::partial_refutation(&t, &phis)?,
            false,
        );
        let swap = Permutation::swap(c + 1, 0, 1)?;
        push(
            "mutant permutation".into(),
            mutants::misaligned_permutation(&t, &phis, &swap)?,
            false,
        );
        push(
            "mutant unique bridge".into(),
            mutants::corollary_without_unique(&cases, &phis)?,
            false,
        );
    }
    Ok(out)
}

/// The proof obligations are tautologies and their mutants are not.
pub fn verify_obligations(spec: &CorpusSpec) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("obligations", Some(spec.seed)).timed(|r| {
            let mut gen = Gen::new(spec.seed, STREAM_OBLIGATIONS);
            let c_max = spec.c_or(32) as usize;
            let mut cs: Vec<usize> = (0..=c_max.min(8)).collect();
            cs.extend([16, 32].into_iter().filter(|c| *c <= c_max));
            for c in cs {
                match obligations(c, &mut gen, true) {
                    Ok(obs) => {
                        for o in obs {
                            expect_tautology(r, &o.name, &o.formula, o.tautology, c <= 8);
                        }
                    }
                    Err(e) => r.fail(format!("c={c}"), "obligations", e.to_string()),
                }
            }
            r.note("tautology-level check: permutations are validated as propositional equivalences");
        })
    })
}

/// The corollary formula is a tautology; without `Unique` it is not.
pub fn verify_cor34(spec: &CorpusSpec) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("cor34", Some(spec.seed)).timed(|r| {
            let mut gen = Gen::new(spec.seed, STREAM_COR34);
            let c_hi = spec.c_or(64).max(6);
            let mut plan: Vec<(usize, bool)> = (0..=5).map(|c| (c, true)).collect();
            for _ in 0..spec.n_or(20) {
                plan.push((gen.range(6, c_hi) as usize, false));
            }
            for (c, exhaustive) in plan {
                let (alphas, betas) = (alpha_atoms(c), beta_atoms(c));
                let label = |what: &str| {
                    let engine = if exhaustive { "truth table" } else { "dpll" };
                    format!("{what} c={c} ({engine})")
                };
                match corollary_formula(&alphas, &betas) {
                    Ok(f) => expect_tautology(r, &label("corollary"), &f, true, exhaustive),
                    Err(e) => r.fail(label("corollary"), "construction", e.to_string()),
                }
                if c >= 1 {
                    match mutants::corollary_without_unique(&alphas, &betas) {
                        Ok(f) => expect_tautology(r, &label("without unique"), &f, false, exhaustive),
                        Err(e) => r.fail(label("without unique"), "construction", e.to_string()),
                    }
                }
            }
            for c in 0..=5 {
                match obligations(c, &mut gen, false) {
                    Ok(obs) => {
                        for o in obs {
                            expect_tautology(r, &o.name, &o.formula, o.tautology, true);
                        }
                    }
                    Err(e) => r.fail(format!("c={c}"), "obligations", e.to_string()),
                }
            }
            r.note("desk-scale analog: standard c only; the corollary is checked as a propositional tautology");
        })
    })
}

/// Truth table, DPLL, and DPLL after a DIMACS round trip give the same
/// verdict, and every countermodel falsifies its formula.
pub fn verify_engines(spec: &CorpusSpec) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("engines", Some(spec.seed)).timed(|r| {
            let mut gen = Gen::new(spec.seed, STREAM_ENGINES);
            let mut tautologies = 0;
            for i in 0..spec.n_or(200) {
                let atoms = gen.range(1, 16) as usize;
                let q = gen.prop(atoms, 6);
                let p = if i % 3 == 0 {
                    // tautology by construction
                    match gen.below(3) {
                        0 => PropFormula::or(q.clone(), PropFormula::not(q)),
                        1 => {
                            let s = gen.prop(atoms, 4);
                            PropFormula::imp(PropFormula::and(q.clone(), s), q)
                        }
                        _ => {
                            let s = gen.prop(atoms, 4);
                            PropFormula::iff(PropFormula::or(q.clone(), s.clone()), PropFormula::or(s, q))
                        }
                    }
                } else {
                    q
                };
                let tt = match truth_table_countermodel(&p) {
                    Ok(cm) => cm,
                    Err(e) => {
                        r.fail(p.to_string(), "truth table", e.to_string());
                        continue;
                    }
                };
                let dp = dpll_countermodel(&p);
                let text = export_dimacs(&to_cnf_tseitin(&PropFormula::not(p.clone())));
                let external = parse_dimacs(&text).map(|cnf| !dpll(&cnf).is_sat());
                let falsifies = |cm: &Option<Valuation>| cm.as_ref().is_none_or(|v| eval_valuation(&p, v) == Ok(false));
                let verdicts = (tt.is_none(), dp.is_none(), external.clone());
                let ok =
                    external == Ok(tt.is_none()) && tt.is_none() == dp.is_none() && falsifies(&tt) && falsifies(&dp);
                tautologies += u64::from(tt.is_none());
                r.check(ok, || Failure {
                    input: p.to_string(),
                    expected: "agreeing verdicts and genuine countermodels".into(),
                    actual: format!("truth table / dpll / dimacs tautology = {verdicts:?}"),
                });
            }
            r.note(format!("{tautologies} tautologies"));
        })
    })
}
