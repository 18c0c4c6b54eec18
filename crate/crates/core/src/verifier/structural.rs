//! Suites checked on syntax alone: trivialisation and the `ι_a`
//! translations.

use std::collections::{BTreeSet, HashMap};

use super::gen::Gen;
use super::{on_big_stack, CorpusSpec};
use crate::constructions::{
    biconditional, code_term, default_gamma, iota_translate, itb_code, relativize, IndexVar, Iota, ItbFormula,
    IOTA_MAX_A, IOTA_MAX_N,
};
use crate::error::{Error, Result};
use crate::report::{Failure, Report};
use crate::syntax::{parse_formula, trivialise, Formula, FormulaKind, Term, TermKind, VarId};

const STREAM_TRIVIALISE: u64 = 7;

/// A formula whose skeleton is `∃v0 ∀v3 ((v0 + v1) = ((v0 * v3) + v2))`.
pub const WORKED_EXAMPLE: &str = "E v0 A v3 ((v0 + ((v5 * S(0)) + (0 * v6))) = ((v0 * v3) + 0))";
const WORKED_SKELETON: &str = "E v0 A v3 ((v0 + v1) = ((v0 * v3) + v2))";

/// Substitute `terms[i]` for each free occurrence of `vars[i]`.
fn fill(f: &Formula, vars: &[VarId], terms: &[Term]) -> Formula {
    fn term(t: &Term, map: &dyn Fn(VarId) -> Option<Term>) -> Term {
        match t.kind() {
            TermKind::Var(v) => map(*v).unwrap_or_else(|| t.clone()),
            TermKind::Zero => t.clone(),
            TermKind::Succ(s) => Term::succ(term(s, map)),
            TermKind::Add(l, r) => Term::add(term(l, map), term(r, map)),
            TermKind::Mul(l, r) => Term::mul(term(l, map), term(r, map)),
        }
    }
    fn go(f: &Formula, vars: &[VarId], terms: &[Term], bound: &mut Vec<VarId>) -> Formula {
        match f.kind() {
            FormulaKind::Eq(l, r) => {
                let map = |v: VarId| {
                    if bound.contains(&v) {
                        return None;
                    }
                    vars.iter().position(|p| *p == v).map(|i| terms[i].clone())
                };
                Formula::eq(term(l, &map), term(r, &map))
            }
            FormulaKind::Not(g) => Formula::not(go(g, vars, terms, bound)),
            FormulaKind::Or(l, r) => Formula::or(go(l, vars, terms, bound), go(r, vars, terms, bound)),
            FormulaKind::And(l, r) => Formula::and(go(l, vars, terms, bound), go(r, vars, terms, bound)),
            FormulaKind::Exists(v, g) | FormulaKind::Forall(v, g) => {
                bound.push(*v);
                let body = go(g, vars, terms, bound);
                bound.pop();
                if matches!(f.kind(), FormulaKind::Exists(..)) {
                    Formula::exists(*v, body)
                } else {
                    Formula::forall(*v, body)
                }
            }
        }
    }
    go(f, vars, terms, &mut Vec::new())
}

/// Violations of the defining conditions of a trivialisation, checked on
/// the skeleton: no variable both free and bound, free variables occur
/// once, no closed subterm, and no complex subterm whose variables are all
/// free.
fn skeleton_violations(skeleton: &Formula) -> Vec<String> {
    fn terms(t: &Term, bound: &[VarId], free: &mut HashMap<VarId, usize>, out: &mut Vec<String>) {
        if t.is_closed() {
            out.push(format!("closed term {t}"));
            return;
        }
        match t.kind() {
            TermKind::Var(v) => {
                if !bound.contains(v) {
                    *free.entry(*v).or_default() += 1;
                }
            }
            TermKind::Zero => unreachable!("closed"),
            TermKind::Succ(s) => {
                if !s.vars().iter().any(|v| bound.contains(v)) {
                    out.push(format!("complex term {t} over free variables"));
                }
                terms(s, bound, free, out);
            }
            TermKind::Add(l, r) | TermKind::Mul(l, r) => {
                if !t.vars().iter().any(|v| bound.contains(v)) {
                    out.push(format!("complex term {t} over free variables"));
                }
                terms(l, bound, free, out);
                terms(r, bound, free, out);
            }
        }
    }
    fn go(f: &Formula, bound: &mut Vec<VarId>, free: &mut HashMap<VarId, usize>, out: &mut Vec<String>) {
        match f.kind() {
            FormulaKind::Eq(l, r) => {
                terms(l, bound, free, out);
                terms(r, bound, free, out);
            }
            FormulaKind::Exists(v, g) | FormulaKind::Forall(v, g) => {
                bound.push(*v);
                go(g, bound, free, out);
                bound.pop();
            }
            _ => {
                for c in f.children() {
                    go(c, bound, free, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut free = HashMap::new();
    go(skeleton, &mut Vec::new(), &mut free, &mut out);
    let binders = skeleton.binders();
    let mut counted: Vec<_> = free.into_iter().collect();
    counted.sort();
    for (v, n) in counted {
        if n > 1 {
            out.push(format!("{v} occurs free {n} times"));
        }
        if binders.contains(&v) {
            out.push(format!("{v} is both free and bound"));
        }
    }
    out
}

/// The first `k` indices that are not binders of `f`.
fn canonical_params(f: &Formula, k: usize) -> Vec<VarId> {
    let binders = f.binders();
    (0..).map(VarId).filter(|v| !binders.contains(v)).take(k).collect()
}

fn check_trivialisation(r: &mut Report, f: &Formula) {
    let t = trivialise(f);
    let mut problems = skeleton_violations(&t.skeleton);
    if fill(&t.skeleton, &t.param_vars, &t.params) != *f {
        problems.push("substituting the parameters does not give the formula back".into());
    }
    if t.reconstruct() != *f {
        problems.push("reconstruct differs from the formula".into());
    }
    if t.param_vars != canonical_params(f, t.params.len()) {
        problems.push(format!(
            "parameter variables {:?} are not the canonical choice",
            t.param_vars
        ));
    }
    let again = trivialise(&t.skeleton);
    let as_vars: Vec<Term> = t.param_vars.iter().map(|v| Term::var(*v)).collect();
    if again.skeleton != t.skeleton || again.params != as_vars {
        problems.push(format!("not idempotent: {}", again.skeleton));
    }
    r.check(problems.is_empty(), || Failure {
        input: f.to_string(),
        expected: "a canonical trivialisation".into(),
        actual: format!("skeleton {}: {}", t.skeleton, problems.join("; ")),
    });
}

/// The worked example, then reconstruction, the defining conditions and
/// idempotence on random formulas.
pub fn verify_trivialise(spec: &CorpusSpec) -> Report {
    let spec = spec.clone();
    on_big_stack(move || {
        Report::new("trivialise", Some(spec.seed)).timed(|r| {
            match (parse_formula(WORKED_EXAMPLE), parse_formula(WORKED_SKELETON)) {
                (Ok(f), Ok(want)) => {
                    let t = trivialise(&f);
                    r.expect_eq(|| WORKED_EXAMPLE.to_string(), want.to_string(), t.skeleton.to_string());
                    check_trivialisation(r, &f);
                }
                (Err(e), _) | (_, Err(e)) => r.fail(WORKED_EXAMPLE, "parses", e.to_string()),
            }
            let mut gen = Gen::new(spec.seed, STREAM_TRIVIALISE);
            let depth = spec.formula_depth + 1;
            for _ in 0..spec.n_or(10_000) {
                let f = if spec.quantifier_free {
                    let vars: Vec<VarId> = (0..4).map(VarId).collect();
                    let l = gen.term(spec.term_depth + 1, &vars);
                    Formula::eq(l, gen.term(spec.term_depth + 1, &vars))
                } else {
                    gen.formula(depth, 4)
                };
                check_trivialisation(r, &f);
            }
        })
    })
}

/// The index-domain formula used when none is given: "`v0` is even".
pub fn default_phi() -> Formula {
    parse_formula("E v1 ((v1 + v1) = v0)").expect("valid formula")
}

/// Expected translations, built from first principles for one node at a
/// time. Children are translated by the [`Iota`] under test, so a
/// mismatch pins down the node at fault.
struct Expect<'a> {
    phi: &'a Formula,
    x: Option<VarId>,
    occurrences: u64,
    gamma: &'a [ItbFormula],
    base: u64,
    sizes: HashMap<(u64, usize), u64>,
}

impl<'a> Expect<'a> {
    fn new(phi: &'a Formula, gamma: &'a [ItbFormula], fs: &[&ItbFormula]) -> Expect<'a> {
        let mut vars: BTreeSet<VarId> = phi.all_vars();
        for g in gamma.iter().chain(fs.iter().copied()) {
            vars.extend(g.number_vars());
        }
        let x = phi.free_vars().iter().next().copied();
        Expect {
            phi,
            x,
            occurrences: x.map_or(0, |x| count_free(phi, x)),
            gamma,
            base: vars.iter().next_back().map_or(0, |v| v.0 + 1),
            sizes: HashMap::new(),
        }
    }

    fn var(&self, b: IndexVar) -> VarId {
        VarId(self.base + b.0)
    }

    fn phi_at(&self, j: u64) -> Result<Formula> {
        match self.x {
            Some(x) => self.phi.subst_closed(x, &Term::numeral(j)),
            None => Ok(self.phi.clone()),
        }
    }

    fn phi_on(&self, y: VarId) -> Result<Formula> {
        match self.x {
            Some(x) => self.phi.rename_free(x, y),
            None => Ok(self.phi.clone()),
        }
    }

    /// `∃z (z + y = ā)`, `z` the lowest variable other than `y`.
    fn le(y: VarId, a: u64) -> Formula {
        let z = if y == VarId(0) { VarId(1) } else { VarId(0) };
        Formula::exists(z, Formula::eq(Term::add(Term::var(z), Term::var(y)), Term::numeral(a)))
    }

    /// `∃z (S(z) + x = y)`.
    fn lt(x: VarId, y: VarId) -> Formula {
        let z = (0..).map(VarId).find(|z| *z != x && *z != y).expect("infinite");
        Formula::exists(
            z,
            Formula::eq(Term::add(Term::succ(Term::var(z)), Term::var(x)), Term::var(y)),
        )
    }

    fn domain(&self, y: VarId, a: u64) -> Result<Formula> {
        Ok(Formula::and(Expect::le(y, a), self.phi_on(y)?))
    }

    fn disjunction(fs: Vec<Formula>) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or_else(Formula::falsum)
    }

    /// The node `f` at level `a`, over children translated by `iota`.
    fn node(&self, iota: &mut Iota, f: &ItbFormula, a: u64) -> Result<Formula> {
        Ok(match f {
            ItbFormula::Eq(l, r) => Formula::eq(l.clone(), r.clone()),
            ItbFormula::IndexLess(b, c) => Expect::lt(self.var(*b), self.var(*c)),
            ItbFormula::TruthAt(b, t) => {
                let alpha = Term::var(self.var(*b));
                let mut outer = Vec::new();
                for (i, g) in self.gamma.iter().enumerate() {
                    let mut inner = Vec::new();
                    for j in 0..a {
                        let guard = Formula::and(Formula::eq(alpha.clone(), Term::numeral(j)), self.phi_at(j)?);
                        inner.push(Formula::and(guard, iota.gamma_at(j, i)?));
                    }
                    let code = code_term(&itb_code(g));
                    outer.push(Formula::and(Formula::eq(t.clone(), code), Expect::disjunction(inner)));
                }
                Expect::disjunction(outer)
            }
            ItbFormula::Not(g) => Formula::not(iota.translate(g, a)?),
            ItbFormula::Or(l, r) => Formula::or(iota.translate(l, a)?, iota.translate(r, a)?),
            ItbFormula::And(l, r) => Formula::and(iota.translate(l, a)?, iota.translate(r, a)?),
            ItbFormula::NumExists(v, g) => Formula::exists(*v, iota.translate(g, a)?),
            ItbFormula::NumForall(v, g) => Formula::forall(*v, iota.translate(g, a)?),
            ItbFormula::IdxExists(b, g) => {
                let y = self.var(*b);
                Formula::exists(y, Formula::and(self.domain(y, a)?, iota.translate(g, a)?))
            }
            ItbFormula::IdxForall(b, g) => {
                let y = self.var(*b);
                Formula::forall(y, Formula::or(Formula::not(self.domain(y, a)?), iota.translate(g, a)?))
            }
        })
    }

    /// `ι_a(ψ^{≺α})` written out with the bounded quantifiers
    /// `∀y (d_a(y) → (y < α → …))` and `∃y (d_a(y) ∧ (y < α ∧ …))`.
    fn relativized(&self, iota: &mut Iota, f: &ItbFormula, alpha: IndexVar, a: u64) -> Result<Formula> {
        let rec = |s: &Self, iota: &mut Iota, g: &ItbFormula| s.relativized(iota, g, alpha, a);
        Ok(match f {
            ItbFormula::Eq(..) | ItbFormula::IndexLess(..) | ItbFormula::TruthAt(..) => iota.translate(f, a)?,
            ItbFormula::Not(g) => Formula::not(rec(self, iota, g)?),
            ItbFormula::Or(l, r) => Formula::or(rec(self, iota, l)?, rec(self, iota, r)?),
            ItbFormula::And(l, r) => Formula::and(rec(self, iota, l)?, rec(self, iota, r)?),
            ItbFormula::NumExists(v, g) => Formula::exists(*v, rec(self, iota, g)?),
            ItbFormula::NumForall(v, g) => Formula::forall(*v, rec(self, iota, g)?),
            ItbFormula::IdxExists(b, g) => {
                let y = self.var(*b);
                let bounded = Formula::and(Expect::lt(y, self.var(alpha)), rec(self, iota, g)?);
                Formula::exists(y, Formula::and(self.domain(y, a)?, bounded))
            }
            ItbFormula::IdxForall(b, g) => {
                let y = self.var(*b);
                let bounded = Formula::or(Formula::not(Expect::lt(y, self.var(alpha))), rec(self, iota, g)?);
                Formula::forall(y, Formula::or(Formula::not(self.domain(y, a)?), bounded))
            }
        })
    }

    /// Node count of `ι_a(f)` by recurrence on `f`.
    fn size(&mut self, f: &ItbFormula, a: u64) -> u64 {
        let d = 1 + (a + 6) + self.phi.size();
        match f {
            ItbFormula::Eq(l, r) => l.size() + r.size() + 1,
            ItbFormula::IndexLess(..) => 7,
            ItbFormula::TruthAt(_, t) => {
                let n = self.gamma.len() as u64;
                if n == 0 {
                    return 4;
                }
                let mut total = n - 1;
                for i in 0..self.gamma.len() {
                    let code = code_term(&itb_code(&self.gamma[i])).size();
                    let inner = if a == 0 {
                        4
                    } else {
                        (0..a)
                            .map(|j| (j + 3) + self.phi.size() + j * self.occurrences + 2 + self.gamma_size(j, i))
                            .sum::<u64>()
                            + (a - 1)
                    };
                    total += (t.size() + code + 1) + 1 + inner;
                }
                total
            }
            ItbFormula::Not(g) => 1 + self.size(g, a),
            ItbFormula::Or(l, r) | ItbFormula::And(l, r) => 1 + self.size(l, a) + self.size(r, a),
            ItbFormula::NumExists(_, g) | ItbFormula::NumForall(_, g) => 1 + self.size(g, a),
            ItbFormula::IdxExists(_, g) => 2 + d + self.size(g, a),
            ItbFormula::IdxForall(_, g) => 3 + d + self.size(g, a),
        }
    }

    fn gamma_size(&mut self, j: u64, i: usize) -> u64 {
        if let Some(s) = self.sizes.get(&(j, i)) {
            return *s;
        }
        let g = &self.gamma[i];
        let s = self.size(g, j);
        self.sizes.insert((j, i), s);
        s
    }
}

fn count_free(f: &Formula, x: VarId) -> u64 {
    fn term(t: &Term, x: VarId) -> u64 {
        match t.kind() {
            TermKind::Var(v) => u64::from(*v == x),
            TermKind::Zero => 0,
            TermKind::Succ(s) => term(s, x),
            TermKind::Add(l, r) | TermKind::Mul(l, r) => term(l, x) + term(r, x),
        }
    }
    match f.kind() {
        FormulaKind::Eq(l, r) => term(l, x) + term(r, x),
        FormulaKind::Exists(v, _) | FormulaKind::Forall(v, _) if *v == x => 0,
        _ => f.children().into_iter().map(|c| count_free(c, x)).sum(),
    }
}

fn subformulas(f: &ItbFormula, out: &mut Vec<ItbFormula>) {
    out.push(f.clone());
    match f {
        ItbFormula::Eq(..) | ItbFormula::IndexLess(..) | ItbFormula::TruthAt(..) => {}
        ItbFormula::Not(g)
        | ItbFormula::NumExists(_, g)
        | ItbFormula::NumForall(_, g)
        | ItbFormula::IdxExists(_, g)
        | ItbFormula::IdxForall(_, g) => subformulas(g, out),
        ItbFormula::Or(l, r) | ItbFormula::And(l, r) => {
            subformulas(l, out);
            subformulas(r, out);
        }
    }
}

/// Index variable used as the bound of relativised formulas.
const ALPHA: IndexVar = IndexVar(9);

fn test_formulas(gamma: &[ItbFormula]) -> Result<Vec<ItbFormula>> {
    let (b0, b1, b2, v0) = (IndexVar(0), IndexVar(1), IndexVar(2), VarId(0));
    let x = Term::var(v0);
    let mut fs = vec![
        ItbFormula::Eq(Term::succ(Term::zero()), Term::zero()),
        ItbFormula::Eq(x.clone(), Term::succ(x.clone())),
        ItbFormula::IndexLess(b0, b1),
        ItbFormula::TruthAt(b0, x.clone()),
        ItbFormula::idx_exists(b2, ItbFormula::IndexLess(b2, b0)),
        ItbFormula::idx_forall(b2, ItbFormula::TruthAt(b2, x.clone())),
        ItbFormula::num_forall(v0, ItbFormula::idx_exists(b2, ItbFormula::TruthAt(b2, x))),
    ];
    if let Some(g) = gamma.first() {
        fs.push(ItbFormula::TruthAt(b1, code_term(&itb_code(g))));
    }
    for g in gamma {
        fs.push(g.clone());
        fs.push(biconditional(g, ALPHA)?);
    }
    Ok(fs)
}

fn iota_at(r: &mut Report, phi: &Formula, gamma: &[ItbFormula], f: &ItbFormula, a: u64) -> Result<()> {
    let n = gamma.len();
    let rel = if f.has_index_quantifier() && !f.bound_index_vars().contains(&ALPHA) {
        Some(relativize(f, ALPHA)?)
    } else {
        None
    };
    let mut extra: Vec<&ItbFormula> = vec![f];
    extra.extend(rel.as_ref());
    let mut iota = Iota::new(phi, gamma, &extra)?;
    let mut expect = Expect::new(phi, gamma, &extra);

    let mut nodes = Vec::new();
    subformulas(f, &mut nodes);
    for g in &nodes {
        let got = iota.translate(g, a)?;
        let want = expect.node(&mut iota, g, a)?;
        r.check(got == want, || Failure {
            input: format!("iota_{a}({g}), n={n}"),
            expected: want.to_string(),
            actual: got.to_string(),
        });
        let size = expect.size(g, a);
        r.check(got.size() == size, || Failure {
            input: format!("size of iota_{a}({g}), n={n}"),
            expected: size.to_string(),
            actual: got.size().to_string(),
        });
    }
    if let Some(rf) = &rel {
        let got = iota.translate(rf, a)?;
        let want = expect.relativized(&mut iota, f, ALPHA, a)?;
        r.check(got == want, || Failure {
            input: format!("iota_{a}(({f}) relativised to {ALPHA}), n={n}"),
            expected: want.to_string(),
            actual: got.to_string(),
        });
    }
    // the one-shot entry point agrees with the shared translator
    let direct = iota_translate(f, a, phi, gamma)?;
    let shared = Iota::new(phi, gamma, &[f])?.translate(f, a)?;
    r.expect_eq(|| format!("iota_translate({f}, {a}), n={n}"), shared, direct);
    Ok(())
}

/// Every node of `ι_a(f)` for `a ≤ a_max` and fragments of size
/// `n ≤ n_max` matches its template and its size recurrence.
pub fn verify_iota(a_max: u64, n_max: u64) -> Report {
    on_big_stack(move || {
        Report::new("iota", None).timed(|r| {
            if a_max > IOTA_MAX_A || n_max > IOTA_MAX_N as u64 {
                r.fail(
                    format!("a_max = {a_max}, n_max = {n_max}"),
                    format!("a <= {IOTA_MAX_A}, n <= {IOTA_MAX_N}"),
                    "cap exceeded",
                );
                return;
            }
            let phi = default_phi();
            for n in 0..=n_max as usize {
                let gamma = default_gamma(n);
                let fs = match test_formulas(&gamma) {
                    Ok(fs) => fs,
                    Err(e) => {
                        r.fail(format!("n={n}"), "test formulas", e.to_string());
                        continue;
                    }
                };
                for f in &fs {
                    for a in 0..=a_max {
                        if let Err(e) = iota_at(r, &phi, &gamma, f, a) {
                            r.fail(format!("iota_{a}({f}), n={n}"), "a translation", e.to_string());
                        }
                    }
                }
            }
            let over = IOTA_MAX_A + 1;
            let capped = iota_translate(&ItbFormula::Eq(Term::zero(), Term::zero()), over, &phi, &[]);
            r.check(matches!(capped, Err(Error::CapExceeded(_))), || Failure {
                input: format!("iota_{over}(0 = 0)"),
                expected: "cap exceeded".into(),
                actual: format!("{capped:?}"),
            });
            r.note("internal induction holds vacuously over the standard model; it is generated, not checked");
        })
    })
}
