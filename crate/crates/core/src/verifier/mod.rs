//! Verification suites. Each suite checks one construction against an
//! independent oracle on a deterministic corpus and returns a [`Report`].

mod gen;
pub mod mutants;
mod propositional;
mod saturation_suite;
mod semantic;
mod structural;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::saturation::Domain;
use crate::syntax::Formula;

pub use gen::Gen;
pub use propositional::{verify_cor34, verify_engines, verify_obligations, verify_prop33, verify_prop33_with};
pub use saturation_suite::{default_family, verify_saturation, DEFAULT_FAMILY};
pub use semantic::{verify_acdc, verify_theta, verify_thm32, verify_tr0_axioms};
pub use structural::{default_phi, verify_iota, verify_trivialise, WORKED_EXAMPLE};

/// Everything that determines a suite's corpus. Equal specs give equal
/// reports, up to wall time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    /// Upper bound on the sequence index `c`, per suite default if unset.
    pub c_max: Option<u64>,
    /// Number of random instances, per suite default if unset.
    pub n: Option<usize>,
    /// Upper bound on the level `a` of the `ι` suite.
    pub a_max: Option<u64>,
    pub formula_depth: u32,
    pub term_depth: u32,
    /// Restrict the random formula corpus of the trivialisation suite to
    /// quantifier-free formulas.
    pub quantifier_free: bool,
    pub domain: Domain,
    /// Family for the saturation suite; the built-in one if unset.
    pub family: Option<Vec<Formula>>,
}

impl CorpusSpec {
    pub fn new(seed: u64) -> CorpusSpec {
        CorpusSpec {
            seed,
            c_max: None,
            n: None,
            a_max: None,
            formula_depth: 3,
            term_depth: 2,
            quantifier_free: false,
            domain: Domain::range(0, 7).expect("non-empty"),
            family: None,
        }
    }

    pub(crate) fn c_or(&self, default: u64) -> u64 {
        self.c_max.unwrap_or(default)
    }

    pub(crate) fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }
}

impl Default for CorpusSpec {
    fn default() -> CorpusSpec {
        CorpusSpec::new(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Prop33,
    Cor34,
    Obligations,
    Thm32,
    Acdc,
    Tr0,
    Theta,
    Saturation,
    Trivialise,
    Iota,
    Engines,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Prop33,
        Suite::Cor34,
        Suite::Obligations,
        Suite::Thm32,
        Suite::Acdc,
        Suite::Tr0,
        Suite::Theta,
        Suite::Saturation,
        Suite::Trivialise,
        Suite::Iota,
        Suite::Engines,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop33 => "prop33",
            Suite::Cor34 => "cor34",
            Suite::Obligations => "obligations",
            Suite::Thm32 => "thm32",
            Suite::Acdc => "acdc",
            Suite::Tr0 => "tr0",
            Suite::Theta => "theta",
            Suite::Saturation => "saturation",
            Suite::Trivialise => "trivialise",
            Suite::Iota => "iota",
            Suite::Engines => "engines",
        }
    }

    pub fn run(self, spec: &CorpusSpec) -> Report {
        match self {
            Suite::Prop33 => verify_prop33(spec),
            Suite::Cor34 => verify_cor34(spec),
            Suite::Obligations => verify_obligations(spec),
            Suite::Thm32 => verify_thm32(spec),
            Suite::Acdc => verify_acdc(spec),
            Suite::Tr0 => verify_tr0_axioms(spec),
            Suite::Theta => verify_theta(spec.c_or(5000)),
            Suite::Saturation => {
                let family = spec.family.clone().unwrap_or_else(default_family);
                verify_saturation(&family, &spec.domain)
            }
            Suite::Trivialise => verify_trivialise(spec),
            Suite::Iota => verify_iota(spec.a_max.unwrap_or(3), spec.n.unwrap_or(3) as u64),
            Suite::Engines => verify_engines(spec),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

/// Stack size for suite threads: substitution and drops on `Θ_c` and deep
/// numerals recurse once per nesting level.
pub const SUITE_STACK: usize = 512 << 20;

/// Run `f` on a fresh thread with [`SUITE_STACK`] bytes of stack.
pub fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        let handle = std::thread::Builder::new()
            .stack_size(SUITE_STACK)
            .spawn_scoped(s, f)
            .expect("spawn suite thread");
        match handle.join() {
            Ok(v) => v,
            Err(payload) => std::panic::resume_unwind(payload),
        }
    })
}

/// Every suite, in [`Suite::ALL`] order, on a pool of `jobs` threads
/// (0 lets the pool choose). The result does not depend on `jobs`.
pub fn verify_all(spec: &CorpusSpec, jobs: usize) -> Result<Vec<Report>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .stack_size(SUITE_STACK)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(|| Suite::ALL.par_iter().map(|s| s.run(spec)).collect()))
}

/// Sum of the given reports under the suite name `all`.
pub fn aggregate(reports: &[Report], seed: Option<u64>) -> Report {
    let mut total = Report::new("all", seed);
    for r in reports {
        total.instances += r.instances;
        total.passes += r.passes;
        total.failures.extend(r.failures.iter().cloned());
        total.elapsed += r.elapsed;
    }
    total
}
