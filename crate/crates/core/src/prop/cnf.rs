//! CNF, the Tseitin encoding, DIMACS text, and a DPLL solver.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{AtomId, PropFormula};
use crate::error::{Error, Result};

/// A DIMACS literal: `+v` or `-v` for a variable `v ≥ 1`.
pub type Lit = i64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u64,
    pub clauses: Vec<Vec<Lit>>,
}

/// Atom `p_i` is DIMACS variable `i + 1`.
pub(crate) fn atom_var(a: AtomId) -> u64 {
    a.0 as u64 + 1
}

struct Tseitin<'a> {
    next: u64,
    clauses: Vec<Vec<Lit>>,
    // structurally equal subformulas share one gate
    gates: HashMap<&'a PropFormula, Lit>,
}

impl<'a> Tseitin<'a> {
    fn fresh(&mut self) -> Lit {
        self.next += 1;
        self.next as Lit
    }

    /// A literal equivalent to `p` under the emitted clauses.
    fn encode(&mut self, p: &'a PropFormula) -> Lit {
        if let Some(&x) = self.gates.get(p) {
            return x;
        }
        let x = match p {
            PropFormula::Atom(a) => return atom_var(*a) as Lit,
            PropFormula::Not(q) => return -self.encode(q),
            PropFormula::Const(b) => {
                let t = self.fresh();
                self.clauses.push(vec![t]);
                if *b {
                    t
                } else {
                    -t
                }
            }
            PropFormula::Or(l, r) => {
                let (a, b) = (self.encode(l), self.encode(r));
                let x = self.fresh();
                self.clauses.push(vec![-x, a, b]);
                self.clauses.push(vec![x, -a]);
                self.clauses.push(vec![x, -b]);
                x
            }
            PropFormula::And(l, r) => {
                let (a, b) = (self.encode(l), self.encode(r));
                let x = self.fresh();
                self.clauses.push(vec![x, -a, -b]);
                self.clauses.push(vec![-x, a]);
                self.clauses.push(vec![-x, b]);
                x
            }
        };
        self.gates.insert(p, x);
        x
    }
}

/// Equisatisfiable CNF of `p`. Variables `1..=m` are the atoms `p_0..p_{m-1}`
/// (`m` one above the largest atom id); gate variables follow, every gate
/// numbered above the gates of its subformulas.
pub fn to_cnf_tseitin(p: &PropFormula) -> CnfFormula {
    let atoms = p.atoms().iter().next_back().map_or(0, |a| atom_var(*a));
    let mut t = Tseitin {
        next: atoms,
        clauses: Vec::new(),
        gates: HashMap::new(),
    };
    let root = t.encode(p);
    t.clauses.push(vec![root]);
    CnfFormula {
        num_vars: t.next,
        clauses: t.clauses,
    }
}

pub fn export_dimacs(c: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", c.num_vars, c.clauses.len());
    for clause in &c.clauses {
        for lit in clause {
            write!(out, "{lit} ").expect("writing to a string");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u64, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        let bad = |message: String| Error::Parse { offset: start, message };
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(bad(format!("bad header {trimmed:?}")));
            }
            let vars = parts[2]
                .parse()
                .map_err(|_| bad(format!("bad variable count {:?}", parts[2])))?;
            let count = parts[3]
                .parse()
                .map_err(|_| bad(format!("bad clause count {:?}", parts[3])))?;
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(bad("clause before header".into()));
        };
        for tok in trimmed.split_whitespace() {
            let lit: Lit = tok.parse().map_err(|_| bad(format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > vars {
                return Err(bad(format!("literal {lit} exceeds {vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((num_vars, count)) = header else {
        return Err(Error::Parse {
            offset: 0,
            message: "missing header".into(),
        });
    };
    if !current.is_empty() {
        return Err(Error::Parse {
            offset,
            message: "unterminated clause".into(),
        });
    }
    if clauses.len() != count {
        return Err(Error::Parse {
            offset,
            message: format!("header announces {count} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// `Sat(model)` indexes the model by variable; entry 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

const UNASSIGNED: i8 = 0;

struct Solver {
    clauses: Vec<Vec<Lit>>,
    /// Clause indices watching each literal, indexed by [`Solver::slot`].
    watches: Vec<Vec<usize>>,
    /// `+1` true, `-1` false, `0` unassigned, indexed by variable.
    value: Vec<i8>,
    trail: Vec<Lit>,
    head: usize,
    /// Per decision: trail length before it, the decided literal, and
    /// whether it is already the flipped branch.
    decisions: Vec<(usize, Lit, bool)>,
}

impl Solver {
    fn slot(lit: Lit) -> usize {
        let v = lit.unsigned_abs() as usize;
        2 * v + usize::from(lit < 0)
    }

    fn lit_value(&self, lit: Lit) -> i8 {
        let v = self.value[lit.unsigned_abs() as usize];
        if lit < 0 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, lit: Lit) {
        self.value[lit.unsigned_abs() as usize] = if lit > 0 { 1 } else { -1 };
        self.trail.push(lit);
    }

    /// Unit propagation; `false` on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let falsified = -self.trail[self.head];
            self.head += 1;
            let slot = Solver::slot(falsified);
            let mut watching = std::mem::take(&mut self.watches[slot]);
            let mut i = 0;
            let mut ok = true;
            while i < watching.len() {
                let ci = watching[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                if self.lit_value(other) == 1 {
                    i += 1;
                    continue;
                }
                let clause = &self.clauses[ci];
                let replacement = (2..clause.len()).find(|&k| self.lit_value(clause[k]) != -1);
                if let Some(k) = replacement {
                    let clause = &mut self.clauses[ci];
                    clause.swap(1, k);
                    let new = clause[1];
                    self.watches[Solver::slot(new)].push(ci);
                    watching.swap_remove(i);
                    continue;
                }
                if self.lit_value(other) == -1 {
                    ok = false;
                    break;
                }
                self.assign(other);
                i += 1;
            }
            self.watches[slot].extend(watching);
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        for lit in self.trail.drain(len..) {
            self.value[lit.unsigned_abs() as usize] = UNASSIGNED;
        }
        self.head = len;
    }

    /// Chronological backtracking: flip the latest unflipped decision.
    fn backtrack(&mut self) -> bool {
        while let Some((len, lit, flipped)) = self.decisions.pop() {
            self.undo_to(len);
            if !flipped {
                self.decisions.push((len, -lit, true));
                self.assign(-lit);
                return true;
            }
        }
        false
    }
}

/// DPLL with two watched literals and chronological backtracking.
pub fn dpll(cnf: &CnfFormula) -> SatResult {
    let n = cnf.num_vars as usize;
    let mut solver = Solver {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n + 2],
        value: vec![UNASSIGNED; n + 1],
        trail: Vec::new(),
        head: 0,
        decisions: Vec::new(),
    };
    let mut units = Vec::new();
    for clause in &cnf.clauses {
        let mut c: Vec<Lit> = clause.clone();
        c.sort_unstable();
        c.dedup();
        if c.iter().any(|l| c.binary_search(&-l).is_ok()) {
            continue;
        }
        match c.len() {
            0 => return SatResult::Unsat,
            1 => units.push(c[0]),
            _ => {
                let ci = solver.clauses.len();
                solver.watches[Solver::slot(c[0])].push(ci);
                solver.watches[Solver::slot(c[1])].push(ci);
                solver.clauses.push(c);
            }
        }
    }
    for u in units {
        match solver.lit_value(u) {
            1 => {}
            -1 => return SatResult::Unsat,
            _ => solver.assign(u),
        }
    }
    // Branch on the highest unassigned variable. For Tseitin output that
    // splits on gates top-down, before their atoms.
    let mut next_var = n;
    loop {
        if !solver.propagate() {
            if !solver.backtrack() {
                return SatResult::Unsat;
            }
            next_var = n;
            continue;
        }
        while next_var >= 1 && solver.value[next_var] != UNASSIGNED {
            next_var -= 1;
        }
        if next_var == 0 {
            return SatResult::Sat(solver.value.iter().map(|v| *v == 1).collect());
        }
        let lit = next_var as Lit;
        solver.decisions.push((solver.trail.len(), lit, false));
        solver.assign(lit);
    }
}
