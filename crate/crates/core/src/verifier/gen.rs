//! Deterministic random corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::{tr0, val};
use crate::prop::PropFormula;
use crate::syntax::{Formula, Term, VarId};

/// Random syntax from a seed. Each suite draws from its own stream, so
/// corpora do not depend on which other suites ran.
pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64, stream: u64) -> Gen {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Gen { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn word(&mut self) -> u64 {
        self.rng.gen()
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Closed term of depth at most `depth`; numerals stay below 6.
    pub fn closed_term(&mut self, depth: u32) -> Term {
        self.term(depth, &[])
    }

    /// Term over `vars` (closed if `vars` is empty).
    pub fn term(&mut self, depth: u32, vars: &[VarId]) -> Term {
        let leaf = depth == 0 || self.coin(0.3);
        if leaf {
            if !vars.is_empty() && self.coin(0.5) {
                return Term::var(*vars.choose(&mut self.rng).expect("non-empty"));
            }
            return Term::numeral(self.below(6));
        }
        match self.below(3) {
            0 => Term::succ(self.term(depth - 1, vars)),
            1 => {
                let l = self.term(depth - 1, vars);
                Term::add(l, self.term(depth - 1, vars))
            }
            _ => {
                let l = self.term(depth - 1, vars);
                Term::mul(l, self.term(depth - 1, vars))
            }
        }
    }

    /// A random closed term whose value is `v`.
    pub fn term_with_value(&mut self, v: u64, depth: u32) -> Term {
        if depth == 0 || self.coin(0.25) {
            return Term::numeral(v);
        }
        match self.below(3) {
            0 if v > 0 => Term::succ(self.term_with_value(v - 1, depth - 1)),
            1 => {
                let a = self.range(0, v);
                let l = self.term_with_value(a, depth - 1);
                Term::add(l, self.term_with_value(v - a, depth - 1))
            }
            _ => {
                if v == 0 {
                    let l = self.term_with_value(0, depth - 1);
                    let r = self.closed_term(depth - 1);
                    return if self.coin(0.5) {
                        Term::mul(l, r)
                    } else {
                        Term::mul(r, l)
                    };
                }
                let divisors: Vec<u64> = (1..=v).filter(|d| v.is_multiple_of(*d)).collect();
                let d = *divisors.choose(&mut self.rng).expect("1 divides v");
                let l = self.term_with_value(d, depth - 1);
                Term::mul(l, self.term_with_value(v / d, depth - 1))
            }
        }
    }

    /// Random quantifier-free sentence. About half the equations are true.
    pub fn qf_sentence(&mut self, depth: u32) -> Formula {
        if depth == 0 || self.coin(0.3) {
            let l = self.closed_term(2);
            let r = if self.coin(0.5) {
                let v: u64 = val(&l).expect("closed").try_into().unwrap_or(0);
                self.term_with_value(v.min(64), 2)
            } else {
                self.closed_term(2)
            };
            return Formula::eq(l, r);
        }
        match self.below(3) {
            0 => Formula::not(self.qf_sentence(depth - 1)),
            1 => {
                let l = self.qf_sentence(depth - 1);
                Formula::or(l, self.qf_sentence(depth - 1))
            }
            _ => {
                let l = self.qf_sentence(depth - 1);
                Formula::and(l, self.qf_sentence(depth - 1))
            }
        }
    }

    /// Quantifier-free sentence with the given `Tr₀` value.
    pub fn qf_sentence_with_truth(&mut self, depth: u32, truth: bool) -> Formula {
        let s = self.qf_sentence(depth);
        if tr0(&s).expect("qf sentence") == truth {
            s
        } else {
            Formula::not(s)
        }
    }

    /// Random formula over the variable pool `v0..v{pool}`, with quantifiers,
    /// free variables and closed subterms mixed.
    pub fn formula(&mut self, depth: u32, pool: u64) -> Formula {
        self.formula_in(depth, pool, &mut Vec::new())
    }

    fn formula_in(&mut self, depth: u32, pool: u64, bound: &mut Vec<VarId>) -> Formula {
        if depth == 0 || self.coin(0.25) {
            let vars: Vec<VarId> = (0..pool).map(VarId).collect();
            let l = self.term(3, &vars);
            let r = self.term(3, &vars);
            return Formula::eq(l, r);
        }
        match self.below(5) {
            0 => Formula::not(self.formula_in(depth - 1, pool, bound)),
            1 => {
                let l = self.formula_in(depth - 1, pool, bound);
                Formula::or(l, self.formula_in(depth - 1, pool, bound))
            }
            2 => {
                let l = self.formula_in(depth - 1, pool, bound);
                Formula::and(l, self.formula_in(depth - 1, pool, bound))
            }
            k => {
                let v = VarId(self.below(pool.max(1)));
                bound.push(v);
                let body = self.formula_in(depth - 1, pool, bound);
                bound.pop();
                if k == 3 {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            }
        }
    }

    /// Random propositional formula over atoms `p0..p{atoms-1}`.
    pub fn prop(&mut self, atoms: usize, depth: u32) -> PropFormula {
        if depth == 0 || self.coin(0.2) {
            if atoms == 0 || self.coin(0.03) {
                return PropFormula::Const(self.coin(0.5));
            }
            return PropFormula::atom(self.below(atoms as u64) as usize);
        }
        match self.below(3) {
            0 => PropFormula::not(self.prop(atoms, depth - 1)),
            1 => {
                let l = self.prop(atoms, depth - 1);
                PropFormula::or(l, self.prop(atoms, depth - 1))
            }
            _ => {
                let l = self.prop(atoms, depth - 1);
                PropFormula::and(l, self.prop(atoms, depth - 1))
            }
        }
    }
}
