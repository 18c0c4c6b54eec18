//! Saturation through the library surface on the shipped family.

use ptk::eval::{tr0, Assignment};
use ptk::saturation::{
    build_s0, check_agreement, check_comp, check_extensionality, parse_family, saturate, subformula_closure, Domain,
    PartialSatPredicate,
};
use ptk::syntax::Formula;

fn family() -> Vec<Formula> {
    parse_family(include_str!("data/family30.txt")).unwrap()
}

#[test]
fn shipped_family_saturates_cleanly() {
    let phis = family();
    assert_eq!(phis.len(), 30);
    assert_eq!(subformula_closure(&phis).len(), 30);
    let d = Domain::range(0, 7).unwrap();
    let seed: Vec<Formula> = phis
        .iter()
        .filter(|f| f.is_sentence() && f.is_quantifier_free() && tr0(f) == Ok(true))
        .cloned()
        .collect();
    let s = saturate(&phis, &seed, &PartialSatPredicate::empty(d.clone()), &d).unwrap();
    for phi in &phis {
        let r = check_comp(&s, phi, &d);
        assert!(r.passed(), "{r}");
    }
    assert!(check_extensionality(&s).passed());
    assert!(check_agreement(&s, &seed).passed());
    for phi in phis.iter().filter(|f| f.is_sentence() && f.is_quantifier_free()) {
        assert_eq!(s.contains(phi, &Assignment::new()), tr0(phi).unwrap(), "{phi}");
    }

    // a second round seeded by the first keeps every pair
    let again = build_s0(&phis, &seed, &s, &d).unwrap();
    assert!(s.iter().all(|(f, a)| again.contains(f, a)));
}

#[test]
fn domain_matters_for_quantifiers() {
    let phis = parse_family("(v0 = S(S(0)))\nE v0 (v0 = S(S(0)))\n").unwrap();
    let small = Domain::range(0, 1).unwrap();
    let large = Domain::range(0, 2).unwrap();
    let run = |d: &Domain| saturate(&phis, &[], &PartialSatPredicate::empty(d.clone()), d).unwrap();
    assert!(!run(&small).contains(&phis[1], &Assignment::new()));
    assert!(run(&large).contains(&phis[1], &Assignment::new()));
}
