//! Formula schemes: big connectives, stopping-condition disjunctions,
//! case distinctions, `Θ_c`, and the two-sorted ITB language with its
//! translations into arithmetic.

mod iota;
mod itb;
mod schemes;

pub use iota::{iota_translate, Iota, MAX_A as IOTA_MAX_A, MAX_N as IOTA_MAX_N};
pub use itb::{biconditional, code_term, default_gamma, itb_code, relativize, IndexVar, ItbFormula};
pub use schemes::{
    acdc_lhs, big_and_left, big_and_or_true, big_or_left, big_or_or_false, case_distinction, corollary_formula,
    le_formula, lt_formula, permute_seq, stopping_disjunction, theta_c, unique, value_cases, Permutation, SentenceSeq,
    THETA_VAR,
};
