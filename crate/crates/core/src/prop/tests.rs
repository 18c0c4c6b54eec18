use proptest::prelude::*;

use super::*;
use crate::constructions::{case_distinction, corollary_formula, stopping_disjunction, unique};
use crate::syntax::{numeral, parse_formula, Term};
use crate::verifier::Gen;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn p(i: usize) -> PropFormula {
    PropFormula::atom(i)
}

fn letters(k: u64, n: usize) -> Vec<Formula> {
    (0..n as u64).map(|i| Formula::eq(numeral(i), numeral(k))).collect()
}

/// Independent oracle: evaluate under the valuation given by the bits of
/// `row` (atom `i` is bit `i`).
fn eval_row(q: &PropFormula, row: u64) -> bool {
    match q {
        PropFormula::Const(b) => *b,
        PropFormula::Atom(a) => row >> a.0 & 1 == 1,
        PropFormula::Not(x) => !eval_row(x, row),
        PropFormula::Or(l, r) => eval_row(l, row) || eval_row(r, row),
        PropFormula::And(l, r) => eval_row(l, row) && eval_row(r, row),
    }
}

/// Brute-force tautology check over atoms `0..n`.
fn brute_tautology(q: &PropFormula, n: usize) -> bool {
    (0..1u64 << n).all(|row| eval_row(q, row))
}

fn brute_sat(cnf: &CnfFormula) -> bool {
    let n = cnf.num_vars as u32;
    (0..1u64 << n).any(|row| {
        cnf.clauses
            .iter()
            .all(|c| c.iter().any(|&l| (row >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
    })
}

fn prop_formula(atoms: usize) -> impl Strategy<Value = PropFormula> {
    let leaf = prop_oneof![
        10 => (0..atoms).prop_map(p),
        1 => any::<bool>().prop_map(PropFormula::Const),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(PropFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PropFormula::or(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| PropFormula::and(l, r)),
        ]
    })
}

/// Formulas that are tautologies by construction: `q ∨ ¬q` and `q → q`
/// shapes wrapped in random context.
fn tautology(atoms: usize) -> impl Strategy<Value = PropFormula> {
    (prop_formula(atoms), prop_formula(atoms), any::<bool>()).prop_map(|(q, r, shape)| {
        let core = if shape {
            PropFormula::or(q.clone(), PropFormula::not(q))
        } else {
            PropFormula::imp(PropFormula::and(q.clone(), r.clone()), q)
        };
        PropFormula::or(r, core)
    })
}

// ---- skeletons

#[test]
fn skeleton_examples() {
    let (q, table) = skeleton(&f("((0 = 0) | ~(0 = 0))")).unwrap();
    assert_eq!(q, PropFormula::or(p(0), PropFormula::not(p(0))));
    assert_eq!(table.len(), 1);

    let (q, table) = skeleton(&f("(((0 = 0) & E v0 (v0 = 0)) | ~E v0 (v0 = 0))")).unwrap();
    assert_eq!(q, PropFormula::or(PropFormula::and(p(0), p(1)), PropFormula::not(p(1))));
    assert_eq!(table.sentence(AtomId(1)), Some(&f("E v0 (v0 = 0)")));
    assert_eq!(table.lookup(&f("(0 = 0)")), Some(AtomId(0)));

    assert!(matches!(skeleton(&f("(v0 = 0)")), Err(Error::NotSentence(_))));
}

#[test]
fn atoms_are_not_normalised() {
    let (_, table) = skeleton(&f("((0 = 0) | ((0 + 0) = (0 + 0)))")).unwrap();
    assert_eq!(table.len(), 2);
}

#[test]
fn corollary_skeleton_has_four_atoms_at_c_one() {
    let g = corollary_formula(&letters(0, 2), &letters(1, 2)).unwrap();
    let (_, table) = skeleton(&g).unwrap();
    assert_eq!(table.len(), 4);
}

#[test]
fn to_formula_inverts_skeleton() {
    let g = corollary_formula(&letters(0, 3), &letters(1, 3)).unwrap();
    let (q, table) = skeleton(&g).unwrap();
    assert_eq!(q.to_formula(&table).unwrap(), g);
    assert_eq!(p(9).to_formula(&table), Err(Error::AtomTableMismatch(9)));
}

// ---- valuations

#[test]
fn valuation_examples() {
    for b in [false, true] {
        let v: Valuation = [(AtomId(0), b)].into_iter().collect();
        assert!(eval_valuation(&PropFormula::or(p(0), PropFormula::not(p(0))), &v).unwrap());
        assert!(!eval_valuation(&PropFormula::and(p(0), PropFormula::not(p(0))), &v).unwrap());
    }
    assert_eq!(eval_valuation(&p(3), &Valuation::new()), Err(Error::MissingAtom(3)));
}

#[test]
fn stopping_skeleton_follows_the_unique_alpha() {
    let c = 4;
    let (al, be) = (letters(0, c + 1), letters(1, c + 1));
    let mut table = AtomTable::new();
    let stop = skeleton_with(&mut table, &stopping_disjunction(&al, &be, 0).unwrap()).unwrap();
    for k in 0..=c {
        for beta_bits in 0..1u32 << (c + 1) {
            let v: Valuation = (0..=c)
                .flat_map(|i| {
                    [
                        (table.lookup(&al[i]).unwrap(), i == k),
                        (table.lookup(&be[i]).unwrap(), beta_bits >> i & 1 == 1),
                    ]
                })
                .collect();
            assert_eq!(eval_valuation(&stop, &v).unwrap(), beta_bits >> k & 1 == 1);
        }
    }
}

proptest! {
    #[test]
    fn eval_valuation_matches_row_oracle(q in prop_formula(6), row in 0u64..64) {
        let v: Valuation = (0..6).map(|i| (AtomId(i), row >> i & 1 == 1)).collect();
        prop_assert_eq!(eval_valuation(&q, &v).unwrap(), eval_row(&q, row));
    }
}

// ---- tautologies

#[test]
fn tautology_examples() {
    assert!(is_tautology(&PropFormula::imp(p(0), p(0))));
    let v = check_tautology(&PropFormula::or(p(0), p(1)));
    assert!(!v.tautology);
    let cm = v.countermodel.unwrap();
    assert_eq!((cm.get(AtomId(0)), cm.get(AtomId(1))), (Some(false), Some(false)));
    assert!(is_tautology(&PropFormula::Const(true)));
    assert!(!is_tautology(&PropFormula::Const(false)));
}

#[test]
fn corollary_at_five_is_a_tautology() {
    let g = corollary_formula(&letters(0, 6), &letters(1, 6)).unwrap();
    let (q, table) = skeleton(&g).unwrap();
    assert_eq!(table.len(), 12);
    let v = check_tautology(&q);
    assert!(v.tautology);
    assert_eq!(v.engine, Engine::TruthTable);
    assert!(dpll_countermodel(&q).is_none());
}

#[test]
fn engine_switches_above_the_cutoff() {
    let wide = |n: usize| {
        (0..n)
            .map(|i| PropFormula::or(p(i), PropFormula::not(p(i))))
            .reduce(PropFormula::and)
            .unwrap()
    };
    assert_eq!(check_tautology(&wide(TRUTH_TABLE_MAX_ATOMS)).engine, Engine::TruthTable);
    let big = check_tautology(&wide(TRUTH_TABLE_MAX_ATOMS + 1));
    assert_eq!(big.engine, Engine::Dpll);
    assert!(big.tautology);
    assert!(matches!(
        truth_table_countermodel(&wide(31)),
        Err(Error::CapExceeded(_))
    ));
}

#[test]
fn wide_truth_tables_agree_with_dpll() {
    // 22 atoms: enough blocks for the parallel scan
    let n = 22;
    let all_or = (0..n).map(p).reduce(PropFormula::or).unwrap();
    let cm = truth_table_countermodel(&all_or).unwrap().unwrap();
    assert!(cm.iter().all(|(_, b)| !b));
    assert!(dpll_countermodel(&all_or).is_some());
    let last_only = PropFormula::or(PropFormula::not(p(n - 1)), p(0));
    let cm = truth_table_countermodel(&last_only).unwrap().unwrap();
    assert_eq!((cm.get(AtomId(0)), cm.get(AtomId(n - 1))), (Some(false), Some(true)));
}

proptest! {
    #[test]
    fn engines_agree_with_brute_force(q in prop_formula(8)) {
        let want = brute_tautology(&q, 8);
        let table = truth_table_countermodel(&q).unwrap();
        let dpll = dpll_countermodel(&q);
        prop_assert_eq!(table.is_none(), want);
        prop_assert_eq!(dpll.is_none(), want);
        for cm in table.iter().chain(dpll.iter()) {
            // a reported countermodel really falsifies q
            let full: Valuation = (0..8).map(|i| (AtomId(i), cm.get(AtomId(i)).unwrap_or(false))).collect();
            prop_assert!(!eval_valuation(&q, &full).unwrap());
        }
    }

    #[test]
    fn tautologies_survive_substitution(t in tautology(4), subs in proptest::collection::vec(prop_formula(6), 4)) {
        prop_assert!(is_tautology(&t));
        let s = t.substitute(&|a: AtomId| subs[a.0].clone());
        prop_assert!(is_tautology(&s));
        prop_assert!(brute_tautology(&s, 6));
    }
}

// ---- entailment

#[test]
fn entailment_examples() {
    let mut table = AtomTable::new();
    let a = skeleton_with(&mut table, &f("(0 = 0)")).unwrap();
    assert!(entails(&table, std::slice::from_ref(&a), &a).unwrap());
    assert_eq!(entails(&table, &[], &p(5)), Err(Error::AtomTableMismatch(5)));
}

#[test]
fn unique_entails_the_bridge() {
    for c in 0..=4 {
        let (al, be) = (letters(0, c + 1), letters(1, c + 1));
        let mut table = AtomTable::new();
        let premise = skeleton_with(&mut table, &unique(&al).unwrap()).unwrap();
        let bridge = Formula::iff(
            stopping_disjunction(&al, &be, 0).unwrap(),
            case_distinction(&al, &be).unwrap(),
        );
        let goal = skeleton_with(&mut table, &bridge).unwrap();
        assert!(entails(&table, &[premise], &goal).unwrap(), "c = {c}");
        assert_eq!(entails(&table, &[], &goal).unwrap(), c == 0, "c = {c}");
    }
}

proptest! {
    #[test]
    fn empty_premises_mean_tautology(q in prop_formula(5)) {
        let mut table = AtomTable::new();
        for i in 0..5 {
            table.intern(&Formula::eq(numeral(i), Term::zero()));
        }
        prop_assert_eq!(entails(&table, &[], &q).unwrap(), is_tautology(&q));
    }

    #[test]
    fn entailment_matches_brute_force(prem in proptest::collection::vec(prop_formula(5), 0..3), q in prop_formula(5)) {
        let mut table = AtomTable::new();
        for i in 0..5 {
            table.intern(&Formula::eq(numeral(i), Term::zero()));
        }
        let want = (0..32).all(|row| !prem.iter().all(|h| eval_row(h, row)) || eval_row(&q, row));
        prop_assert_eq!(entails(&table, &prem, &q).unwrap(), want);
    }
}

// ---- CNF and DIMACS

#[test]
fn refuting_excluded_middle() {
    let cnf = to_cnf_tseitin(&PropFormula::not(PropFormula::or(p(0), PropFormula::not(p(0)))));
    assert_eq!(dpll(&cnf), SatResult::Unsat);
    assert!(!brute_sat(&cnf));
}

#[test]
fn constant_formulas_keep_their_verdict() {
    for b in [false, true] {
        let cnf = to_cnf_tseitin(&PropFormula::Const(b));
        let text = export_dimacs(&cnf);
        assert!(text.starts_with(&format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len())));
        assert_eq!(dpll(&parse_dimacs(&text).unwrap()).is_sat(), b);
    }
}

#[test]
fn dimacs_text_format() {
    let cnf = CnfFormula {
        num_vars: 3,
        clauses: vec![vec![1, -3], vec![2], vec![]],
    };
    assert_eq!(export_dimacs(&cnf), "p cnf 3 3\n1 -3 0\n2 0\n0\n");
    assert_eq!(parse_dimacs("c comment\np cnf 3 3\n1 -3 0\n2 0\n0\n").unwrap(), cnf);
    assert_eq!(parse_dimacs("p cnf 2 1\n1\n-2 0\n").unwrap().clauses, vec![vec![1, -2]]);
    assert!(parse_dimacs("1 0\n").is_err());
    assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    assert!(parse_dimacs("p cnf 1 1\n1\n").is_err());
}

#[test]
fn two_hundred_formulas_dual_engine() {
    let mut gen = Gen::new(5, 0);
    for i in 0..200 {
        let q = gen.prop(16, 7);
        let table = truth_table_countermodel(&q).unwrap().is_none();
        let solver = dpll_countermodel(&q).is_none();
        let cnf = parse_dimacs(&export_dimacs(&to_cnf_tseitin(&PropFormula::not(q.clone())))).unwrap();
        let exported = !dpll(&cnf).is_sat();
        assert_eq!((solver, exported), (table, table), "formula {i}: {q}");
    }
}

fn cnf_strategy() -> impl Strategy<Value = CnfFormula> {
    let lit = (1i64..=7, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
    proptest::collection::vec(proptest::collection::vec(lit, 0..4), 0..24)
        .prop_map(|clauses| CnfFormula { num_vars: 7, clauses })
}

proptest! {
    #[test]
    fn tseitin_preserves_satisfiability(q in prop_formula(6)) {
        let cnf = to_cnf_tseitin(&q);
        let direct = (0..64).any(|row| eval_row(&q, row));
        prop_assert_eq!(dpll(&cnf).is_sat(), direct);
        if cnf.num_vars <= 20 {
            prop_assert_eq!(brute_sat(&cnf), direct);
        }
    }

    #[test]
    fn dpll_models_satisfy_every_clause(cnf in cnf_strategy()) {
        match dpll(&cnf) {
            SatResult::Sat(model) => {
                for c in &cnf.clauses {
                    prop_assert!(c.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)), "{:?}", c);
                }
            }
            SatResult::Unsat => prop_assert!(!brute_sat(&cnf)),
        }
    }

    #[test]
    fn dimacs_round_trips(cnf in cnf_strategy()) {
        prop_assert_eq!(parse_dimacs(&export_dimacs(&cnf)).unwrap(), cnf);
    }
}
