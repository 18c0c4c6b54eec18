//! Bit-parallel truth tables: 64 valuations per machine word.

use rayon::prelude::*;

use super::{AtomId, PropFormula, Valuation};
use crate::error::{Error, Result};

pub const TRUTH_TABLE_MAX_ATOMS: usize = 20;

/// Hard limit for explicit truth-table calls.
const HARD_MAX_ATOMS: usize = 30;

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(bool),
    Atom(usize),
    Not,
    Or,
    And,
}

/// Postfix program over local atom indices `0..k`.
fn compile(p: &PropFormula, local: &dyn Fn(AtomId) -> usize, out: &mut Vec<Op>) {
    match p {
        PropFormula::Const(b) => out.push(Op::Const(*b)),
        PropFormula::Atom(a) => out.push(Op::Atom(local(*a))),
        PropFormula::Not(q) => {
            compile(q, local, out);
            out.push(Op::Not);
        }
        PropFormula::Or(l, r) | PropFormula::And(l, r) => {
            compile(l, local, out);
            compile(r, local, out);
            out.push(if matches!(p, PropFormula::Or(..)) {
                Op::Or
            } else {
                Op::And
            });
        }
    }
}

// Row `64·block + bit` gives atom `k` the value of bit `k` of the row
// number. The low six atoms vary within a word, the rest per block.
const LOW: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn atom_word(k: usize, block: u64) -> u64 {
    if k < 6 {
        LOW[k]
    } else if (block >> (k - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

fn run(program: &[Op], block: u64, stack: &mut Vec<u64>) -> u64 {
    stack.clear();
    for op in program {
        match *op {
            Op::Const(b) => stack.push(if b { !0 } else { 0 }),
            Op::Atom(k) => stack.push(atom_word(k, block)),
            Op::Not => {
                let a = stack.pop().expect("well-formed program");
                stack.push(!a);
            }
            Op::Or | Op::And => {
                let r = stack.pop().expect("well-formed program");
                let l = stack.pop().expect("well-formed program");
                stack.push(if matches!(op, Op::Or) { l | r } else { l & r });
            }
        }
    }
    stack.pop().expect("well-formed program")
}

/// `None` if every valuation of `p`'s atoms satisfies it, else the
/// first falsifying row in binary order (atom with lowest id is the
/// least significant bit).
pub fn truth_table_countermodel(p: &PropFormula) -> Result<Option<Valuation>> {
    let atoms: Vec<AtomId> = p.atoms().into_iter().collect();
    let k = atoms.len();
    if k > HARD_MAX_ATOMS {
        return Err(Error::CapExceeded(format!(
            "{k} atoms > {HARD_MAX_ATOMS} for a truth table"
        )));
    }
    let local = |a: AtomId| atoms.binary_search(&a).expect("atom of p");
    let mut program = Vec::new();
    compile(p, &local, &mut program);
    let rows: u64 = 1 << k;
    let valid_mask = if rows >= 64 { !0 } else { (1u64 << rows) - 1 };
    let blocks = rows.div_ceil(64);
    let first_bad = |block: u64, stack: &mut Vec<u64>| -> Option<u64> {
        let bad = !run(&program, block, stack) & valid_mask;
        (bad != 0).then(|| block * 64 + u64::from(bad.trailing_zeros()))
    };
    let row = if blocks >= 256 {
        (0..blocks)
            .into_par_iter()
            .map_init(Vec::new, |stack, b| first_bad(b, stack))
            .find_first(Option::is_some)
            .flatten()
    } else {
        let mut stack = Vec::new();
        (0..blocks).find_map(|b| first_bad(b, &mut stack))
    };
    Ok(row.map(|r| atoms.iter().enumerate().map(|(i, a)| (*a, (r >> i) & 1 == 1)).collect()))
}
