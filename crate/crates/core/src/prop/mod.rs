//! Propositional structure of arithmetical sentences.
//!
//! A sentence is read propositionally by descending through ¬, ∨ and ∧;
//! every equation or quantified sentence reached becomes an atom. Two
//! atoms are the same exactly when the sentences are structurally equal.

mod cnf;
mod table;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Formula, FormulaKind};

pub use cnf::{dpll, export_dimacs, parse_dimacs, to_cnf_tseitin, CnfFormula, Lit, SatResult};
pub use table::{truth_table_countermodel, TRUTH_TABLE_MAX_ATOMS};

/// Index of an atom in an [`AtomTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub usize);

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Bijection between atom ids `0..len` and sentences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    atoms: Vec<Formula>,
    index: HashMap<Formula, AtomId>,
}

impl AtomTable {
    pub fn new() -> AtomTable {
        AtomTable::default()
    }

    /// The id of `s`, allocating a new one for an unseen sentence.
    pub fn intern(&mut self, s: &Formula) -> AtomId {
        if let Some(id) = self.index.get(s) {
            return *id;
        }
        let id = AtomId(self.atoms.len());
        self.atoms.push(s.clone());
        self.index.insert(s.clone(), id);
        id
    }

    pub fn lookup(&self, s: &Formula) -> Option<AtomId> {
        self.index.get(s).copied()
    }

    pub fn sentence(&self, id: AtomId) -> Option<&Formula> {
        self.atoms.get(id.0)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &Formula)> {
        self.atoms.iter().enumerate().map(|(i, f)| (AtomId(i), f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropFormula {
    Const(bool),
    Atom(AtomId),
    Not(Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(i: usize) -> PropFormula {
        PropFormula::Atom(AtomId(i))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: PropFormula) -> PropFormula {
        PropFormula::Not(Box::new(p))
    }

    pub fn or(l: PropFormula, r: PropFormula) -> PropFormula {
        PropFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn and(l: PropFormula, r: PropFormula) -> PropFormula {
        PropFormula::And(Box::new(l), Box::new(r))
    }

    pub fn imp(l: PropFormula, r: PropFormula) -> PropFormula {
        PropFormula::or(PropFormula::not(l), r)
    }

    pub fn iff(l: PropFormula, r: PropFormula) -> PropFormula {
        PropFormula::and(PropFormula::imp(l.clone(), r.clone()), PropFormula::imp(r, l))
    }

    /// Atoms occurring in the formula, ascending.
    pub fn atoms(&self) -> BTreeSet<AtomId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            match p {
                PropFormula::Const(_) => {}
                PropFormula::Atom(a) => {
                    out.insert(*a);
                }
                PropFormula::Not(q) => stack.push(q),
                PropFormula::Or(l, r) | PropFormula::And(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        match self {
            PropFormula::Const(_) | PropFormula::Atom(_) => 1,
            PropFormula::Not(q) => q.size() + 1,
            PropFormula::Or(l, r) | PropFormula::And(l, r) => l.size() + r.size() + 1,
        }
    }

    /// The sentence obtained by putting each atom's sentence back.
    /// Constants become `0=0` and `¬(0=0)`.
    pub fn to_formula(&self, table: &AtomTable) -> Result<Formula> {
        Ok(match self {
            PropFormula::Const(true) => Formula::verum(),
            PropFormula::Const(false) => Formula::falsum(),
            PropFormula::Atom(a) => table.sentence(*a).cloned().ok_or(Error::AtomTableMismatch(a.0))?,
            PropFormula::Not(q) => Formula::not(q.to_formula(table)?),
            PropFormula::Or(l, r) => Formula::or(l.to_formula(table)?, r.to_formula(table)?),
            PropFormula::And(l, r) => Formula::and(l.to_formula(table)?, r.to_formula(table)?),
        })
    }

    /// Replace every atom `p_i` by `f(p_i)`.
    pub fn substitute(&self, f: &dyn Fn(AtomId) -> PropFormula) -> PropFormula {
        match self {
            PropFormula::Const(b) => PropFormula::Const(*b),
            PropFormula::Atom(a) => f(*a),
            PropFormula::Not(q) => PropFormula::not(q.substitute(f)),
            PropFormula::Or(l, r) => PropFormula::or(l.substitute(f), r.substitute(f)),
            PropFormula::And(l, r) => PropFormula::and(l.substitute(f), r.substitute(f)),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::Const(true) => f.write_str("T"),
            PropFormula::Const(false) => f.write_str("F"),
            PropFormula::Atom(a) => write!(f, "{a}"),
            PropFormula::Not(q) => write!(f, "~{q}"),
            PropFormula::Or(l, r) => write!(f, "({l} | {r})"),
            PropFormula::And(l, r) => write!(f, "({l} & {r})"),
        }
    }
}

/// Propositional skeleton of a sentence, with a fresh atom table.
pub fn skeleton(s: &Formula) -> Result<(PropFormula, AtomTable)> {
    let mut table = AtomTable::new();
    let p = skeleton_with(&mut table, s)?;
    Ok((p, table))
}

/// Propositional skeleton of a sentence, interning atoms into `table`.
pub fn skeleton_with(table: &mut AtomTable, s: &Formula) -> Result<PropFormula> {
    s.require_sentence()?;
    Ok(decompose(table, s))
}

fn decompose(table: &mut AtomTable, s: &Formula) -> PropFormula {
    match s.kind() {
        FormulaKind::Not(f) => PropFormula::not(decompose(table, f)),
        FormulaKind::Or(l, r) => {
            let l = decompose(table, l);
            PropFormula::or(l, decompose(table, r))
        }
        FormulaKind::And(l, r) => {
            let l = decompose(table, l);
            PropFormula::and(l, decompose(table, r))
        }
        FormulaKind::Eq(..) | FormulaKind::Exists(..) | FormulaKind::Forall(..) => PropFormula::Atom(table.intern(s)),
    }
}

/// A truth value for some atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<AtomId, bool>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn set(&mut self, a: AtomId, b: bool) {
        self.0.insert(a, b);
    }

    pub fn get(&self, a: AtomId) -> Option<bool> {
        self.0.get(&a).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, bool)> + '_ {
        self.0.iter().map(|(a, b)| (*a, *b))
    }
}

impl FromIterator<(AtomId, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (AtomId, bool)>>(iter: I) -> Valuation {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(a, b)| format!("{a}={}", u8::from(b))).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn eval_valuation(p: &PropFormula, v: &Valuation) -> Result<bool> {
    Ok(match p {
        PropFormula::Const(b) => *b,
        PropFormula::Atom(a) => v.get(*a).ok_or(Error::MissingAtom(a.0))?,
        PropFormula::Not(q) => !eval_valuation(q, v)?,
        PropFormula::Or(l, r) => eval_valuation(l, v)? || eval_valuation(r, v)?,
        PropFormula::And(l, r) => eval_valuation(l, v)? && eval_valuation(r, v)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    TruthTable,
    Dpll,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::TruthTable => "truth-table",
            Engine::Dpll => "dpll",
        })
    }
}

/// Verdict with the engine that produced it and, for non-tautologies, a
/// falsifying valuation of the formula's atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TautologyVerdict {
    pub tautology: bool,
    pub engine: Engine,
    pub countermodel: Option<Valuation>,
}

/// Tautology check by refutation: `p` is a tautology iff the Tseitin
/// encoding of `¬p` is unsatisfiable. Returns a countermodel otherwise.
pub fn dpll_countermodel(p: &PropFormula) -> Option<Valuation> {
    let cnf = to_cnf_tseitin(&PropFormula::not(p.clone()));
    match dpll(&cnf) {
        SatResult::Unsat => None,
        SatResult::Sat(model) => Some(
            p.atoms()
                .into_iter()
                .map(|a| (a, model[cnf::atom_var(a) as usize]))
                .collect(),
        ),
    }
}

/// Truth table up to [`TRUTH_TABLE_MAX_ATOMS`] atoms, DPLL above.
pub fn check_tautology(p: &PropFormula) -> TautologyVerdict {
    let (engine, countermodel) = if p.atoms().len() <= TRUTH_TABLE_MAX_ATOMS {
        let cm = truth_table_countermodel(p).expect("within the truth-table cap");
        (Engine::TruthTable, cm)
    } else {
        (Engine::Dpll, dpll_countermodel(p))
    };
    TautologyVerdict {
        tautology: countermodel.is_none(),
        engine,
        countermodel,
    }
}

pub fn is_tautology(p: &PropFormula) -> bool {
    check_tautology(p).tautology
}

fn require_in_table(table: &AtomTable, p: &PropFormula) -> Result<()> {
    match p.atoms().into_iter().find(|a| a.0 >= table.len()) {
        Some(a) => Err(Error::AtomTableMismatch(a.0)),
        None => Ok(()),
    }
}

/// Every valuation satisfying all `premises` satisfies `p`. All formulas
/// must draw their atoms from `table`.
pub fn entails(table: &AtomTable, premises: &[PropFormula], p: &PropFormula) -> Result<bool> {
    for q in premises.iter().chain(std::iter::once(p)) {
        require_in_table(table, q)?;
    }
    let antecedent = premises
        .iter()
        .cloned()
        .reduce(PropFormula::and)
        .unwrap_or(PropFormula::Const(true));
    Ok(is_tautology(&PropFormula::imp(antecedent, p.clone())))
}

#[cfg(test)]
mod tests;
