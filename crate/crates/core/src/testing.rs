//! Proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::syntax::{Formula, Term, VarId};

/// Terms over `v0..v{pool}`; closed when `pool` is 0.
pub fn term(pool: u64) -> impl Strategy<Value = Term> {
    term_sized(pool, 4)
}

pub fn term_sized(pool: u64, depth: u32) -> impl Strategy<Value = Term> {
    let leaf = if pool == 0 {
        (0u64..4).prop_map(Term::numeral).boxed()
    } else {
        prop_oneof![
            (0u64..4).prop_map(Term::numeral),
            (0..pool).prop_map(|i| Term::var(VarId(i)))
        ]
        .boxed()
    };
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::add(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Term::mul(l, r)),
        ]
    })
}

pub fn closed_term() -> impl Strategy<Value = Term> {
    term(0)
}

fn connectives(inner: BoxedStrategy<Formula>) -> BoxedStrategy<Formula> {
    prop_oneof![
        inner.clone().prop_map(Formula::not),
        (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
        (inner.clone(), inner).prop_map(|(l, r)| Formula::and(l, r)),
    ]
    .boxed()
}

/// Formulas over `v0..v{pool}` with quantifiers, free variables and
/// closed subterms mixed.
pub fn formula(pool: u64) -> impl Strategy<Value = Formula> {
    formula_sized(pool, 4, 4)
}

pub fn formula_sized(pool: u64, term_depth: u32, depth: u32) -> impl Strategy<Value = Formula> {
    let atom = (term_sized(pool, term_depth), term_sized(pool, term_depth))
        .prop_map(|(l, r)| Formula::eq(l, r))
        .boxed();
    atom.prop_recursive(depth, 32, 2, move |inner| {
        prop_oneof![
            2 => connectives(inner.clone()),
            1 => (0..pool.max(1), inner.clone()).prop_map(|(v, f)| Formula::exists(VarId(v), f)),
            1 => (0..pool.max(1), inner).prop_map(|(v, f)| Formula::forall(VarId(v), f)),
        ]
    })
}

pub fn qf_sentence() -> impl Strategy<Value = Formula> {
    let atom = (closed_term(), closed_term())
        .prop_map(|(l, r)| Formula::eq(l, r))
        .boxed();
    atom.prop_recursive(4, 32, 2, |inner| connectives(inner.boxed()))
}
