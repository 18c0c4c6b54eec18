//! The finite saturation run over a family of formulas and a domain.

use super::on_big_stack;
use crate::eval::tr0;
use crate::report::{Failure, Report};
use crate::saturation::{
    check_agreement, check_comp, check_extensionality, parse_family, saturate, Domain, PartialSatPredicate,
};
use crate::syntax::Formula;

/// Thirty formulas closed under direct subformulas, one per line.
pub const DEFAULT_FAMILY: &str = include_str!("../saturation/family30.txt");

pub fn default_family() -> Vec<Formula> {
    parse_family(DEFAULT_FAMILY).expect("built-in family parses")
}

/// Saturate `family` over `d` from the `Tr₀`-true quantifier-free
/// sentences of the family, then check every compositional clause,
/// extensionality, agreement with the seed, and agreement with `Tr₀` on
/// quantifier-free sentences.
pub fn verify_saturation(family: &[Formula], d: &Domain) -> Report {
    let family = family.to_vec();
    let d = d.clone();
    on_big_stack(move || {
        Report::new("saturation", None).timed(|r| {
            let seed: Vec<Formula> = family
                .iter()
                .filter(|f| f.is_sentence() && f.is_quantifier_free() && tr0(f) == Ok(true))
                .cloned()
                .collect();
            let prev = PartialSatPredicate::empty(d.clone());
            let s = match saturate(&family, &seed, &prev, &d) {
                Ok(s) => s,
                Err(e) => {
                    r.fail("saturate", "a partial satisfaction predicate", e.to_string());
                    return;
                }
            };
            for phi in &family {
                r.absorb(check_comp(&s, phi, &d));
            }
            r.absorb(check_extensionality(&s));
            r.absorb(check_agreement(&s, &seed));
            for phi in family.iter().filter(|f| f.is_sentence() && f.is_quantifier_free()) {
                let want = tr0(phi) == Ok(true);
                let got = s.contains(phi, &Default::default());
                r.check(got == want, || Failure {
                    input: format!("({phi}, {{}})"),
                    expected: format!("in S = tr0 = {want}"),
                    actual: format!("in S = {got}"),
                });
            }
            r.note(format!(
                "{} pairs over {} formulas, domain {d}, {} stages",
                s.len(),
                family.len(),
                s.stage_sizes.len()
            ));
        })
    })
}
