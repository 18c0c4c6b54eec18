use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

use super::*;
use crate::error::Error;
use crate::eval::{term_eval, Assignment};
use crate::testing;
use crate::verifier::Gen;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn v(i: u64) -> VarId {
    VarId(i)
}

// ---- parse / print

#[test]
fn parses_grammar_examples() {
    let one = Term::succ(Term::zero());
    assert_eq!(
        parse("(S(0) + 0 = S(0))").unwrap(),
        Syntax::Formula(Formula::eq(Term::add(one.clone(), Term::zero()), one.clone()))
    );
    assert_eq!(
        parse("E v0 (v0 = S(0))").unwrap(),
        Syntax::Formula(Formula::exists(v(0), Formula::eq(Term::var(v(0)), one)))
    );
    assert!(matches!(parse("(v0 ="), Err(Error::Parse { .. })));
}

#[test]
fn parse_errors_carry_byte_offsets() {
    match parse("(0 = 0) junk") {
        Err(Error::Parse { offset, .. }) => assert_eq!(offset, 8),
        other => panic!("{other:?}"),
    }
    match parse("~(0 + 0)") {
        Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn parenthesised_chains_follow_precedence() {
    assert_eq!(t("(0 + v1 * v2 + S(0))"), t("((0 + (v1 * v2)) + S(0))"));
    assert_eq!(f("(0 = 0 | 0 = 0 & ~(0 = 0))"), f("((0 = 0) | ((0 = 0) & ~(0 = 0)))"));
    assert!(parse("(0 = 0 = 0)").is_err());
    assert!(parse("(0)").is_err());
}

#[test]
fn whitespace_is_insignificant() {
    assert_eq!(f("E v0(v0=S(0))"), f("  E   v0 ( v0 =\tS( 0 ) )\n"));
}

#[test]
fn sort_errors_are_parse_errors() {
    assert!(parse("((0 = 0) + 0)").is_err());
    assert!(parse("(0 | (0 = 0))").is_err());
    assert!(parse("E v0 0").is_err());
    assert!(parse_term("(0 = 0)").is_err());
    assert!(parse_formula("S(0)").is_err());
}

#[test]
fn deep_numeral_round_trips() {
    crate::verifier::on_big_stack(|| {
        let n = Term::numeral(20_000);
        assert_eq!(parse_term(&n.to_string()).unwrap(), n);
    });
}

proptest! {
    #[test]
    fn formula_print_parse_round_trip(g in testing::formula(4)) {
        prop_assert_eq!(parse_formula(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn term_print_parse_round_trip(s in testing::term(3)) {
        prop_assert_eq!(parse(&s.to_string()).unwrap(), Syntax::Term(s));
    }
}

// ---- free variables

fn naive_term_vars(t: &Term, out: &mut BTreeSet<VarId>) {
    match t.kind() {
        TermKind::Var(x) => {
            out.insert(*x);
        }
        TermKind::Zero => {}
        TermKind::Succ(s) => naive_term_vars(s, out),
        TermKind::Add(l, r) | TermKind::Mul(l, r) => {
            naive_term_vars(l, out);
            naive_term_vars(r, out);
        }
    }
}

/// Free variables by walking with an explicit bound-variable stack.
fn naive_free(g: &Formula, bound: &mut Vec<VarId>, out: &mut BTreeSet<VarId>) {
    match g.kind() {
        FormulaKind::Eq(l, r) => {
            let mut vs = BTreeSet::new();
            naive_term_vars(l, &mut vs);
            naive_term_vars(r, &mut vs);
            out.extend(vs.into_iter().filter(|x| !bound.contains(x)));
        }
        FormulaKind::Not(h) => naive_free(h, bound, out),
        FormulaKind::Or(l, r) | FormulaKind::And(l, r) => {
            naive_free(l, bound, out);
            naive_free(r, bound, out);
        }
        FormulaKind::Exists(x, h) | FormulaKind::Forall(x, h) => {
            bound.push(*x);
            naive_free(h, bound, out);
            bound.pop();
        }
    }
}

#[test]
fn free_vars_examples() {
    assert_eq!(free_vars(&parse("(v0 = v0)").unwrap()), BTreeSet::from([v(0)]));
    assert_eq!(free_vars(&parse("E v0 (v0 = v1)").unwrap()), BTreeSet::from([v(1)]));
    let five = Term::numeral(5);
    assert!(Formula::eq(five.clone(), five).is_sentence());
}

proptest! {
    #[test]
    fn free_vars_match_naive_walk(g in testing::formula(4)) {
        let mut want = BTreeSet::new();
        naive_free(&g, &mut Vec::new(), &mut want);
        prop_assert_eq!(g.free_vars(), &want);
        prop_assert_eq!(g.is_sentence(), want.is_empty());
    }

    #[test]
    fn term_is_closed_iff_no_vars(s in testing::term(2)) {
        let mut want = BTreeSet::new();
        naive_term_vars(&s, &mut want);
        prop_assert_eq!(s.vars(), &want);
        prop_assert_eq!(s.is_closed(), want.is_empty());
    }
}

// ---- numerals

#[test]
fn numeral_examples() {
    assert_eq!(numeral(0), Term::zero());
    assert_eq!(numeral(3), Term::succ(Term::succ(Term::succ(Term::zero()))));
}

#[test]
fn numeral_ten_thousand_has_that_depth() {
    let n = numeral(10_000);
    // count successors by walking the spine iteratively
    let mut depth = 0u64;
    let mut cur = n.clone();
    while let TermKind::Succ(s) = cur.kind() {
        depth += 1;
        cur = s.clone();
    }
    assert_eq!(cur, Term::zero());
    assert_eq!(depth, 10_000);
    assert_eq!(n.value(), Some(&BigUint::from(10_000u32)));
    assert_eq!(n.as_numeral(), Some(10_000));
}

// ---- substitution and assignments

#[test]
fn subst_closed_examples() {
    let two = numeral(2);
    assert_eq!(
        subst_closed(&f("(v0 = 0)"), v(0), &two).unwrap(),
        Formula::eq(two.clone(), Term::zero())
    );
    assert_eq!(
        subst_closed(&f("E v0 (v0 = v1)"), v(1), &numeral(1)).unwrap(),
        f("E v0 (v0 = S(0))")
    );
    assert_eq!(
        subst_closed(&f("(v0 = 0)"), v(0), &Term::var(v(2))),
        Err(Error::OpenTerm)
    );
}

#[test]
fn subst_leaves_bound_occurrences() {
    let g = f("((v0 = 0) & E v0 (v0 = v0))");
    assert_eq!(
        subst_closed(&g, v(0), &numeral(1)).unwrap(),
        f("((S(0) = 0) & E v0 (v0 = v0))")
    );
}

#[test]
fn apply_assignment_examples() {
    let a = Assignment::from_pairs([(v(0), 2u64)]);
    assert_eq!(
        apply_assignment(&f("(v0 = S(S(0)))"), &a).unwrap(),
        Formula::eq(numeral(2), numeral(2))
    );
    let s = f("E v0 (v0 = 0)");
    assert_eq!(apply_assignment(&s, &Assignment::new()).unwrap(), s);
    assert_eq!(
        apply_assignment(&f("(v0 = v1)"), &Assignment::from_pairs([(v(0), 0u64)])),
        Err(Error::MissingVariable(v(1)))
    );
}

proptest! {
    #[test]
    fn apply_assignment_gives_sentences(g in testing::formula(3), vals in proptest::collection::vec(0u64..5, 3)) {
        let a = Assignment::from_pairs((0..3).map(|i| (v(i), vals[i as usize])));
        let s = apply_assignment(&g, &a).unwrap();
        prop_assert!(s.is_sentence());
        let mut stepwise = g.clone();
        for i in 0..3 {
            stepwise = subst_closed(&stepwise, v(i), &numeral(vals[i as usize])).unwrap();
        }
        prop_assert_eq!(s, stepwise);
    }
}

// ---- Gödel coding

/// Small Cantor pairing table built by walking diagonals.
fn pairing_table(n: u64) -> HashMap<(u64, u64), u64> {
    let mut out = HashMap::new();
    let mut code = 0;
    for s in 0..n {
        for b in 0..=s {
            out.insert((s - b, b), code);
            code += 1;
        }
    }
    out
}

#[test]
fn pairing_matches_diagonal_enumeration() {
    for ((a, b), z) in pairing_table(40) {
        let (a, b, z) = (BigUint::from(a), BigUint::from(b), BigUint::from(z));
        assert_eq!(pair(&a, &b), z);
        assert_eq!(unpair(&z), (a, b));
    }
}

#[test]
fn godel_round_trip_zero() {
    let z = Syntax::Term(Term::zero());
    assert_eq!(godel_decode(&godel_encode(&z)), Some(z));
}

/// Deterministic corpus of formulas with shallow terms, whose codes stay
/// a few thousand bits long.
fn corpus(n: usize) -> Vec<Formula> {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = testing::formula_sized(4, 2, 4);
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

#[test]
fn godel_injective_on_ten_thousand_formulas() {
    let fs = corpus(10_000);
    let distinct: HashSet<&Formula> = fs.iter().collect();
    let codes: HashSet<GodelCode> = distinct.iter().map(|g| GodelCode::of_formula(g)).collect();
    assert_eq!(codes.len(), distinct.len());
    // decoding takes a square root per node, so round-trip a sample
    for g in distinct.into_iter().take(500) {
        assert_eq!(
            godel_decode(&GodelCode::of_formula(g)),
            Some(Syntax::Formula(g.clone()))
        );
    }
}

#[test]
fn small_naturals_decode_consistently() {
    let mut gen = Gen::new(12, 0);
    let encoded: HashSet<BigUint> = (0..5_000)
        .flat_map(|_| {
            // shallow terms only: each S roughly doubles the bit length of a code
            let s = gen.closed_term(2);
            let g = Formula::not(Formula::eq(gen.closed_term(1), gen.closed_term(1)));
            [GodelCode::of_term(&s).0, GodelCode::of_formula(&g).0]
        })
        .collect();
    let mut non_codes = 0;
    for n in 0..20_000u64 {
        let c = GodelCode::from(n);
        match godel_decode(&c) {
            Some(x) => assert_eq!(godel_encode(&x), c, "decode({n}) = {x} re-encodes differently"),
            None => {
                non_codes += 1;
                assert!(!encoded.contains(&c.0), "{n} is a corpus code but does not decode");
            }
        }
    }
    assert!(non_codes > 0, "some small naturals code nothing");
}

#[test]
fn term_and_formula_codes_are_disjoint() {
    for n in 0..5_000u64 {
        let sort = godel_decode(&GodelCode::from(n)).map(|x| matches!(x, Syntax::Formula(_)));
        if let Some(is_formula) = sort {
            assert_eq!(is_formula, n % 2 == 1);
        }
    }
}

proptest! {
    #[test]
    fn godel_round_trip(g in testing::formula_sized(4, 2, 4), s in testing::term_sized(3, 3)) {
        let gf = Syntax::Formula(g);
        let st = Syntax::Term(s);
        prop_assert_eq!(godel_decode(&godel_encode(&gf)), Some(gf));
        prop_assert_eq!(godel_decode(&godel_encode(&st)), Some(st));
    }

    #[test]
    fn distinct_formulas_distinct_codes(g in testing::formula_sized(3, 2, 3), h in testing::formula_sized(3, 2, 3)) {
        prop_assert_eq!(g == h, GodelCode::of_formula(&g) == GodelCode::of_formula(&h));
    }
}

// ---- trivialisation

/// The bullet conditions on a skeleton, checked from scratch.
fn skeleton_problems(skel: &Formula) -> Vec<String> {
    let mut problems = Vec::new();
    let bound = skel.binders();
    let mut free_occurrences: HashMap<VarId, usize> = HashMap::new();
    fn walk_term(t: &Term, bound_here: &[VarId], problems: &mut Vec<String>, free: &mut HashMap<VarId, usize>) {
        let mut vs = BTreeSet::new();
        naive_term_vars(t, &mut vs);
        if vs.is_empty() {
            problems.push(format!("closed term {t}"));
            return;
        }
        let all_free = vs.iter().all(|x| !bound_here.contains(x));
        if all_free && !matches!(t.kind(), TermKind::Var(_)) {
            problems.push(format!("complex term {t} with only free variables"));
        }
        match t.kind() {
            TermKind::Var(x) if !bound_here.contains(x) => *free.entry(*x).or_default() += 1,
            TermKind::Var(_) | TermKind::Zero => {}
            TermKind::Succ(s) => walk_term(s, bound_here, problems, free),
            TermKind::Add(l, r) | TermKind::Mul(l, r) => {
                walk_term(l, bound_here, problems, free);
                walk_term(r, bound_here, problems, free);
            }
        }
    }
    fn walk(g: &Formula, bound_here: &mut Vec<VarId>, problems: &mut Vec<String>, free: &mut HashMap<VarId, usize>) {
        match g.kind() {
            FormulaKind::Eq(l, r) => {
                walk_term(l, bound_here, problems, free);
                walk_term(r, bound_here, problems, free);
            }
            FormulaKind::Not(h) => walk(h, bound_here, problems, free),
            FormulaKind::Or(l, r) | FormulaKind::And(l, r) => {
                walk(l, bound_here, problems, free);
                walk(r, bound_here, problems, free);
            }
            FormulaKind::Exists(x, h) | FormulaKind::Forall(x, h) => {
                bound_here.push(*x);
                walk(h, bound_here, problems, free);
                bound_here.pop();
            }
        }
    }
    walk(skel, &mut Vec::new(), &mut problems, &mut free_occurrences);
    for (x, n) in free_occurrences {
        if n > 1 {
            problems.push(format!("free {x} occurs {n} times"));
        }
        if bound.contains(&x) {
            problems.push(format!("{x} both free and bound"));
        }
    }
    problems
}

#[test]
fn worked_example_skeleton() {
    // x, y, z, u as v0, v3, v5, v6
    let phi = f("E v0 A v3 ((v0 + ((v5 * S(0)) + (0 * v6))) = ((v0 * v3) + 0))");
    let tpl = trivialise(&phi);
    assert_eq!(tpl.skeleton, f("E v0 A v3 ((v0 + v1) = ((v0 * v3) + v2))"));
    assert_eq!(tpl.params, vec![t("((v5 * S(0)) + (0 * v6))"), Term::zero()]);
    assert_eq!(tpl.reconstruct(), phi);
}

#[test]
fn repeated_free_variable_is_split() {
    let tpl = trivialise(&f("(v0 = v0)"));
    assert_eq!(tpl.skeleton, f("(v0 = v1)"));
    assert_eq!(tpl.params, vec![Term::var(v(0)), Term::var(v(0))]);
}

#[test]
fn closed_terms_are_extracted() {
    let one = numeral(1);
    let tpl = trivialise(&Formula::eq(one.clone(), one.clone()));
    assert_eq!(tpl.skeleton, f("(v0 = v1)"));
    assert_eq!(tpl.params, vec![one.clone(), one]);
}

#[test]
fn parameters_avoid_binder_indices() {
    let tpl = trivialise(&f("E v0 E v1 ((v0 + S(0)) = (v1 * v7))"));
    assert_eq!(tpl.skeleton, f("E v0 E v1 ((v0 + v2) = (v1 * v3))"));
}

proptest! {
    #[test]
    fn trivialise_reconstructs(g in testing::formula(4)) {
        prop_assert_eq!(trivialise(&g).reconstruct(), g);
    }

    #[test]
    fn skeleton_meets_the_conditions(g in testing::formula(4)) {
        let tpl = trivialise(&g);
        prop_assert_eq!(skeleton_problems(&tpl.skeleton), Vec::<String>::new());
        prop_assert_eq!(tpl.params.len(), tpl.param_vars.len());
        let distinct: BTreeSet<_> = tpl.param_vars.iter().collect();
        prop_assert_eq!(distinct.len(), tpl.param_vars.len());
    }

    #[test]
    fn trivialise_is_idempotent(g in testing::formula(4)) {
        let tpl = trivialise(&g);
        let again = trivialise(&tpl.skeleton);
        prop_assert_eq!(&again.skeleton, &tpl.skeleton);
        let as_terms: Vec<Term> = tpl.param_vars.iter().map(|p| Term::var(*p)).collect();
        prop_assert_eq!(again.params, as_terms);
    }
}

// ---- similarity and extensional equivalence

#[test]
fn similarity_examples() {
    let eq = |a, b| Formula::eq(numeral(a), numeral(b));
    assert!(similar(&eq(1, 1), &eq(7, 0)));
    let g = f("E v0 (v0 = v1)");
    assert!(similar(&g, &g));
    assert!(!similar(&f("(v1 = 0)"), &g));
}

#[test]
fn ext_equiv_examples() {
    let empty = Assignment::new();
    let two = Formula::eq(numeral(2), numeral(2));
    let other = Formula::eq(t("(S(0) + S(0))"), t("(S(S(0)) * S(0))"));
    // the oracle: pointwise parameter values
    let vals = |g: &Formula| -> Vec<BigUint> {
        trivialise(g)
            .params
            .iter()
            .map(|p| term_eval(p, &empty).unwrap())
            .collect()
    };
    assert_eq!(vals(&two), vals(&other));
    assert!(ext_equiv(&two, &empty, &other, &empty).unwrap());
    assert!(ext_equiv(&other, &empty, &other, &empty).unwrap());
    assert!(!ext_equiv(&two, &empty, &f("~(0 = 0)"), &empty).unwrap());
    assert!(!ext_equiv(&two, &empty, &Formula::eq(numeral(2), numeral(3)), &empty).unwrap());
}

#[test]
fn ext_equiv_uses_assignments() {
    let a = Assignment::from_pairs([(v(0), 3u64)]);
    let b = Assignment::from_pairs([(v(4), 3u64)]);
    assert!(ext_equiv(&f("(v0 = S(S(S(0))))"), &a, &f("(v4 = (S(0) + S(S(0))))"), &b).unwrap());
    assert_eq!(
        ext_equiv(&f("(v0 = 0)"), &Assignment::new(), &f("(0 = 0)"), &Assignment::new()),
        Err(Error::MissingVariable(v(0)))
    );
}

fn closed_variant() -> impl Strategy<Value = (Formula, Formula, Formula)> {
    // three sentences sharing one random shape, with small parameter values
    testing::formula(0)
        .prop_flat_map(|g| {
            let n = trivialise(&g).params.len();
            let vals = proptest::collection::vec(0u64..2, n);
            (Just(g), vals.clone(), vals.clone(), vals)
        })
        .prop_map(|(g, a, b, c)| {
            let tpl = trivialise(&g);
            let inst = |vs: &[u64]| tpl.instantiate(&vs.iter().map(|x| numeral(*x)).collect::<Vec<_>>());
            (inst(&a), inst(&b), inst(&c))
        })
}

proptest! {
    #[test]
    fn similarity_is_an_equivalence(a in testing::formula(3), b in testing::formula(3), c in testing::formula(3)) {
        prop_assert!(similar(&a, &a));
        prop_assert_eq!(similar(&a, &b), similar(&b, &a));
        if similar(&a, &b) && similar(&b, &c) {
            prop_assert!(similar(&a, &c));
        }
    }

    #[test]
    fn ext_equiv_is_an_equivalence((a, b, c) in closed_variant()) {
        let e = Assignment::new();
        let eq = |x: &Formula, y: &Formula| ext_equiv(x, &e, y, &e).unwrap();
        prop_assert!(eq(&a, &a));
        prop_assert_eq!(eq(&a, &b), eq(&b, &a));
        if eq(&a, &b) && eq(&b, &c) {
            prop_assert!(eq(&a, &c));
        }
    }

    #[test]
    fn same_shape_instances_are_similar((a, b, _) in closed_variant()) {
        prop_assert!(similar(&a, &b));
    }
}
