//! Arithmetized syntax, compositional truth and the formula schemes used
//! to reason about it, with executable checks of each construction.
//!
//! - [`syntax`]: terms, formulas, parsing, Gödel codes, trivialisation.
//! - [`eval`]: values, `Tr₀`, bounded evaluation, partial truth predicates.
//! - [`constructions`]: big connectives, case distinctions, `Θ_c`, ITB and `ι_a`.
//! - [`prop`]: propositional skeletons, truth tables, DPLL, DIMACS.
//! - [`saturation`]: finite staged construction of satisfaction predicates.
//! - [`verifier`]: suites that check the constructions and report.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod eval;
pub mod prop;
pub mod report;
pub mod saturation;
pub mod syntax;
#[cfg(test)]
pub(crate) mod testing;
pub mod verifier;

pub use error::{Error, Result};
pub use report::{Failure, Report};
