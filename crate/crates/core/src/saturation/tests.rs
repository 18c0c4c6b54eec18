use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::eval::tr0;
use crate::syntax::{Term, TermKind};
use crate::testing;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn fs(lines: &[&str]) -> Vec<Formula> {
    lines.iter().map(|s| f(s)).collect()
}

fn at(pairs: &[(u64, u64)]) -> Assignment {
    Assignment::from_pairs(pairs.iter().map(|&(v, n)| (VarId(v), n)))
}

fn empty_s(d: &Domain) -> PartialSatPredicate {
    PartialSatPredicate::empty(d.clone())
}

/// Independent evaluator with quantifiers ranging over `d`.
fn bounded(g: &Formula, a: &Assignment, d: &Domain) -> bool {
    fn term(t: &Term, a: &Assignment) -> BigUint {
        match t.kind() {
            TermKind::Zero => BigUint::from(0u8),
            TermKind::Var(v) => a.get(*v).unwrap().clone(),
            TermKind::Succ(u) => term(u, a) + 1u8,
            TermKind::Add(l, r) => term(l, a) + term(r, a),
            TermKind::Mul(l, r) => term(l, a) * term(r, a),
        }
    }
    match g.kind() {
        FormulaKind::Eq(l, r) => term(l, a) == term(r, a),
        FormulaKind::Not(h) => !bounded(h, a, d),
        FormulaKind::Or(l, r) => bounded(l, a, d) || bounded(r, a, d),
        FormulaKind::And(l, r) => bounded(l, a, d) && bounded(r, a, d),
        FormulaKind::Exists(v, h) => d.values().iter().any(|n| bounded(h, &a.with(*v, n.clone()), d)),
        FormulaKind::Forall(v, h) => d.values().iter().all(|n| bounded(h, &a.with(*v, n.clone()), d)),
    }
}

fn qf_true_sentences(family: &[Formula]) -> Vec<Formula> {
    family
        .iter()
        .filter(|g| g.is_sentence() && g.is_quantifier_free() && tr0(g) == Ok(true))
        .cloned()
        .collect()
}

#[test]
fn domain_parsing_and_assignments() {
    assert_eq!("0..3".parse::<Domain>().unwrap(), Domain::range(0, 3).unwrap());
    assert_eq!("5, 2,2".parse::<Domain>().unwrap(), Domain::new([2, 5]).unwrap());
    assert_eq!(Domain::new([2, 5]).unwrap().to_string(), "{2,5}");
    for bad in ["", "3..1", "a..2", "1,,2"] {
        assert!(bad.parse::<Domain>().is_err(), "{bad:?}");
    }
    assert!(Domain::new([]).is_err());
    let d = Domain::range(0, 2).unwrap();
    let vars: BTreeSet<VarId> = [VarId(0), VarId(4)].into();
    let all = d.assignments(&vars);
    assert_eq!(all.len(), 9);
    assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 9);
    assert_eq!(d.assignments(&BTreeSet::new()), vec![Assignment::new()]);
}

#[test]
fn similarity_class_examples() {
    assert_eq!(similarity_classes(&fs(&["(0 = 0)", "(S(0) = S(S(0)))"])).len(), 1);
    assert_eq!(similarity_classes(&fs(&["(0 = 0)", "~(0 = 0)"])).len(), 2);
    assert_eq!(similarity_classes(&fs(&["(0 = 0)"])).len(), 1);
    let classes = similarity_classes(&fs(&["(0 = 0)", "~(v0 = v0)", "(0 = 0)", "(v1 = 0)", "~(0 = S(0))"]));
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0].members, fs(&["(0 = 0)", "(v1 = 0)"]));
    assert_eq!(classes[1].members, fs(&["~(v0 = v0)", "~(0 = S(0))"]));
    assert_eq!(classes[1].logical_count, 1);
}

#[test]
fn class_order_examples() {
    let classes = similarity_classes(&fs(&["(v0 = 0)", "~(v0 = 0)"]));
    let order = class_order(&classes).unwrap();
    assert!(order.le(0, 1) && !order.le(1, 0));
    assert!(order.is_minimal(0) && !order.is_minimal(1));

    // a pure atomic family is one class, so pick classes that differ in shape
    let classes = similarity_classes(&fs(&["(0 = 0)", "E v0 (v0 = 0)", "A v0 (v0 = 0)"]));
    let order = class_order(&classes).unwrap();
    assert!(!order.le(1, 2) && !order.le(2, 1));

    let chain = fs(&["~~(0 = 0)", "(0 = 0)", "~(0 = 0)"]);
    let classes = similarity_classes(&chain);
    let order = class_order(&classes).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!(order.le(i, j) || order.le(j, i), "{i} {j}");
        }
    }
    assert_eq!(
        order
            .linear_extension(&classes)
            .iter()
            .map(|&i| classes[i].logical_count)
            .collect::<Vec<_>>(),
        vec![0, 1, 2]
    );
    assert!(order.le(1, 0), "transitive step from the atom to the double negation");
}

#[test]
fn build_s0_examples() {
    let d = Domain::range(0, 3).unwrap();
    let s = build_s0(&fs(&["(v0 = v0)"]), &[], &empty_s(&d), &d).unwrap();
    assert!(s.contains(&f("(v0 = v0)"), &at(&[(0, 3)])));
    assert_eq!(s.len(), 4);
    assert_eq!(s.stage_sizes, vec![4]);

    let seed = fs(&["(0 = 0)"]);
    let probe = f("(S(0) = S(0))");
    let s = build_s0(std::slice::from_ref(&probe), &seed, &empty_s(&d), &d).unwrap();
    assert!(s.contains(&probe, &Assignment::new()));

    // a quantified formula alone forms a minimal class and has no witness
    let lone = f("E v0 (v0 = 0)");
    let s = build_s0(std::slice::from_ref(&lone), &[], &empty_s(&d), &d).unwrap();
    assert!(s.is_empty());

    // seeding it makes every ext-equivalent family member true
    let s = build_s0(
        &fs(&[
            "E v0 (v0 = 0)",
            "E v0 (v0 = (0 * S(0)))",
            "E v1 (v1 = 0)",
            "E v0 (v0 = S(0))",
        ]),
        &[lone],
        &empty_s(&d),
        &d,
    )
    .unwrap();
    assert_eq!(s.len(), 2);
    assert!(!s.contains(&f("E v0 (v0 = S(0))"), &Assignment::new()));
    // bound variables are part of the skeleton, so alphabetic variants differ
    assert!(!s.contains(&f("E v1 (v1 = 0)"), &Assignment::new()));
}

#[test]
fn build_s0_reads_previous_predicate() {
    let d = Domain::range(0, 1).unwrap();
    let mut prev = empty_s(&d);
    prev.insert(&f("~(v0 = S(0))"), &at(&[(0, 0)])).unwrap();
    let s = build_s0(&fs(&["~(v2 = S(0))", "~(0 = S(0))", "~(S(0) = S(0))"]), &[], &prev, &d).unwrap();
    assert!(s.contains(&f("~(v2 = S(0))"), &at(&[(2, 0)])));
    assert!(!s.contains(&f("~(v2 = S(0))"), &at(&[(2, 1)])));
    assert!(s.contains(&f("~(0 = S(0))"), &Assignment::new()));
    assert!(!s.contains(&f("~(S(0) = S(0))"), &Assignment::new()));
}

#[test]
fn build_s0_rejects_open_seed() {
    let d = Domain::range(0, 1).unwrap();
    assert!(build_s0(&[], &fs(&["(v0 = 0)"]), &empty_s(&d), &d).is_err());
}

#[test]
fn saturate_negation_example() {
    let d = Domain::range(0, 2).unwrap();
    let phis = fs(&["(0 = 0)", "~(0 = 0)"]);
    let seed = qf_true_sentences(&phis);
    let s = saturate(&phis, &seed, &empty_s(&d), &d).unwrap();
    assert!(s.contains(&phis[0], &Assignment::new()));
    assert!(!s.contains(&phis[1], &Assignment::new()));
    assert_eq!(s.stage_sizes, vec![1, 1]);
    for phi in &phis {
        assert!(check_comp(&s, phi, &d).passed());
    }
}

#[test]
fn saturate_existential_enters_after_s0() {
    let d = Domain::new([0]).unwrap();
    let phis = fs(&["(v0 = v0)", "E v0 (v0 = v0)"]);
    let s = saturate(&phis, &[], &empty_s(&d), &d).unwrap();
    assert_eq!(s.stage_sizes, vec![1, 2]);
    assert!(s.contains(&phis[1], &Assignment::new()));
}

#[test]
fn saturate_empty_family() {
    let d = Domain::range(0, 7).unwrap();
    let s = saturate(&[], &[], &empty_s(&d), &d).unwrap();
    assert!(s.is_empty());
    assert_eq!(s.stage_sizes, vec![0]);
}

#[test]
fn insert_restricts_and_requires_cover() {
    let d = Domain::range(0, 1).unwrap();
    let mut s = empty_s(&d);
    let g = f("(v0 = 0)");
    assert!(s.insert(&g, &Assignment::new()).is_err());
    assert!(s.insert(&g, &at(&[(0, 0), (5, 1)])).unwrap());
    assert!(!s.insert(&g, &at(&[(0, 0)])).unwrap());
    assert!(s.contains(&g, &at(&[(0, 0), (7, 7)])));
    assert!(s.remove(&g, &at(&[(0, 0)])));
    assert!(s.is_empty());
}

#[test]
fn checks_pass_on_saturated_mixed_family() {
    let d = Domain::range(0, 3).unwrap();
    let phis = subformula_closure(&fs(&[
        "((0 = 0) | ~(S(0) = 0))",
        "~(v0 = S(v1))",
        "A v0 E v1 ((v0 = v1) | ~(v1 = v1))",
    ]));
    let seed = qf_true_sentences(&phis);
    let s = saturate(&phis, &seed, &empty_s(&d), &d).unwrap();
    for phi in &phis {
        let r = check_comp(&s, phi, &d);
        assert!(r.passed(), "{phi}: {:?}", r.failures);
    }
    assert!(check_extensionality(&s).passed());
    assert!(check_agreement(&s, &seed).passed());
}

#[test]
fn dropping_a_pair_is_reported_exactly() {
    let d = Domain::range(0, 2).unwrap();
    let phis = fs(&["(v0 = 0)", "~(v0 = 0)"]);
    let mut s = saturate(&phis, &[], &empty_s(&d), &d).unwrap();
    assert!(s.remove(&phis[1], &at(&[(0, 2)])));
    let r = check_comp(&s, &phis[1], &d);
    assert!(!r.passed());
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].input, format!("Comp({}) at {}", phis[1], at(&[(0, 2)])));
    assert_eq!(r.failures[0].expected, "S = true");
    assert!(check_comp(&s, &phis[0], &d).passed());
}

#[test]
fn comp_flags_missing_subformulas() {
    let d = Domain::range(0, 1).unwrap();
    let phis = fs(&["~(0 = 0)"]);
    let s = saturate(&phis, &[], &empty_s(&d), &d).unwrap();
    let r = check_comp(&s, &phis[0], &d);
    assert!(!r.passed());
    assert!(r.failures[0].actual.contains("not in family"));
}

#[test]
fn extensionality_detects_split_pairs() {
    let d = Domain::range(0, 1).unwrap();
    let phis = fs(&["~(v0 = 0)", "~(0 = 0)", "(v0 = 0)", "(0 = 0)"]);
    let mut s = saturate(&phis, &[], &empty_s(&d), &d).unwrap();
    assert!(check_extensionality(&s).passed());
    s.insert(&phis[1], &Assignment::new()).unwrap();
    assert!(!check_extensionality(&s).passed());
}

#[test]
fn agreement_reports_missing_seed() {
    let d = Domain::range(0, 1).unwrap();
    let seed = fs(&["(0 = 0)", "~(S(0) = 0)"]);
    let s = saturate(&seed[..1], &seed, &empty_s(&d), &d).unwrap();
    let r = check_agreement(&s, &seed);
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].actual, "absent (outside the family)");
}

#[test]
fn equation_family_is_the_evaluation_relation() {
    let d = Domain::range(0, 4).unwrap();
    let phis = fs(&["((v0 + v1) = S(v1))", "((v0 * v0) = v1)", "(v2 = S(S(0)))"]);
    let s = saturate(&phis, &[], &empty_s(&d), &d).unwrap();
    let mut expected = 0;
    for phi in &phis {
        for a in d.assignments(phi.free_vars()) {
            let FormulaKind::Eq(l, r) = phi.kind() else {
                unreachable!()
            };
            let truth = term_eval(l, &a).unwrap() == term_eval(r, &a).unwrap();
            expected += truth as usize;
            assert_eq!(s.contains(phi, &a), truth, "{phi} at {a}");
        }
    }
    assert_eq!(s.len(), expected);
}

#[test]
fn parse_family_skips_comments_and_offsets_errors() {
    let text = "# header\n\n(0 = 0)\n  ~(v0 = 0)\n";
    assert_eq!(parse_family(text).unwrap(), fs(&["(0 = 0)", "~(v0 = 0)"]));
    match parse_family("(0 = 0)\n  (0 = )\n") {
        Err(Error::Parse { offset, .. }) => assert_eq!(offset, 8 + 2 + 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn subformula_closure_orders_children_first() {
    let closure = subformula_closure(&fs(&["((0 = 0) | ~(0 = 0))", "~(0 = 0)"]));
    assert_eq!(closure, fs(&["(0 = 0)", "~(0 = 0)", "((0 = 0) | ~(0 = 0))"]));
}

#[test]
fn built_in_family_has_thirty_closed_formulas() {
    let family = parse_family(include_str!("family30.txt")).unwrap();
    assert_eq!(family.len(), 30);
    let closure = subformula_closure(&family);
    assert_eq!(
        closure.iter().collect::<BTreeSet<_>>(),
        family.iter().collect::<BTreeSet<_>>()
    );
}

#[test]
fn ext_key_matches_parameter_values() {
    let a = ext_key(&f("(S(S(0)) = (v0 + 0))"), &at(&[(0, 2)])).unwrap();
    let b = ext_key(&f("(S(S(0)) = (S(S(0)) + 0))"), &Assignment::new()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.1, vec![BigUint::from(2u8), BigUint::from(2u8)]);
}

fn small_family() -> impl Strategy<Value = Vec<Formula>> {
    prop::collection::vec(testing::formula_sized(2, 1, 3), 1..4).prop_map(|v| subformula_closure(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stages_grow_monotonically(phis in small_family(), hi in 0u64..3) {
        let d = Domain::range(0, hi).unwrap();
        let seed = qf_true_sentences(&phis);
        let s0 = build_s0(&phis, &seed, &empty_s(&d), &d).unwrap();
        let s = saturate(&phis, &seed, &empty_s(&d), &d).unwrap();
        prop_assert!(s.stage_sizes.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(s.stage_sizes[0], s0.len());
        prop_assert_eq!(*s.stage_sizes.last().unwrap(), s.len());
        prop_assert!(s0.iter().all(|(g, a)| s.contains(g, a)));
        let classes = similarity_classes(&s.family);
        let minimal = (0..classes.len()).filter(|&i| class_order(&classes).unwrap().is_minimal(i)).count();
        prop_assert_eq!(s.stage_sizes.len(), 1 + classes.len() - minimal);
    }

    #[test]
    fn closed_families_give_bounded_truth(phis in small_family(), hi in 0u64..3) {
        let d = Domain::range(0, hi).unwrap();
        let seed = qf_true_sentences(&phis);
        let s = saturate(&phis, &seed, &empty_s(&d), &d).unwrap();
        for g in &phis {
            for a in d.assignments(g.free_vars()) {
                prop_assert_eq!(s.contains(g, &a), bounded(g, &a, &d), "{} at {}", g, a);
            }
            prop_assert!(check_comp(&s, g, &d).passed());
        }
        prop_assert!(check_extensionality(&s).passed());
        prop_assert!(check_agreement(&s, &seed).passed());
    }

    #[test]
    fn qf_sentences_reproduce_tr0(roots in prop::collection::vec(testing::qf_sentence(), 1..4)) {
        let phis = subformula_closure(&roots);
        let d = Domain::range(0, 1).unwrap();
        let seed = qf_true_sentences(&phis);
        let s = saturate(&phis, &seed, &empty_s(&d), &d).unwrap();
        for g in &phis {
            prop_assert_eq!(s.contains(g, &Assignment::new()), tr0(g).unwrap());
        }
    }

    #[test]
    fn classes_partition_by_similarity(phis in prop::collection::vec(testing::formula_sized(2, 1, 2), 0..8)) {
        let classes = similarity_classes(&phis);
        let mut seen = BTreeSet::new();
        for c in &classes {
            for m in &c.members {
                prop_assert!(seen.insert(m.clone()));
                prop_assert_eq!(&trivialise(m).skeleton, &c.skeleton);
                prop_assert_eq!(m.logical_count(), c.logical_count);
            }
        }
        prop_assert_eq!(seen, phis.iter().cloned().collect::<BTreeSet<_>>());
        let skeletons: BTreeSet<_> = classes.iter().map(|c| c.skeleton.clone()).collect();
        prop_assert_eq!(skeletons.len(), classes.len());
    }

    #[test]
    fn class_order_is_a_partial_order(phis in small_family()) {
        let classes = similarity_classes(&phis);
        let order = class_order(&classes).unwrap();
        let n = classes.len();
        for i in 0..n {
            prop_assert!(order.le(i, i));
            for j in 0..n {
                if i != j && order.le(i, j) {
                    prop_assert!(!order.le(j, i));
                    prop_assert!(classes[i].logical_count < classes[j].logical_count);
                }
                for k in 0..n {
                    if order.le(i, j) && order.le(j, k) {
                        prop_assert!(order.le(i, k));
                    }
                }
            }
        }
        let ext = order.linear_extension(&classes);
        let pos: Vec<usize> = (0..n).map(|i| ext.iter().position(|&x| x == i).unwrap()).collect();
        for i in 0..n {
            for j in 0..n {
                if i != j && order.le(i, j) {
                    prop_assert!(pos[i] < pos[j]);
                }
            }
        }
    }
}
