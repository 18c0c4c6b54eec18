use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

/// One failed instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of a checker or verification suite.
///
/// `passes + failures.len() == instances`, and the report passes exactly
/// when `failures` is empty. Wall time is always measured but only
/// serialised (as `ms`) when [`Report::with_timing`] asks for it, so that
/// default JSON output is reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: Option<u64>,
    pub instances: u64,
    pub passes: u64,
    pub failures: Vec<Failure>,
    pub ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: Option<u64>) -> Report {
        Report {
            suite: suite.into(),
            seed,
            instances: 0,
            passes: 0,
            failures: Vec::new(),
            ms: None,
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Record one instance. The failure is only built when `ok` is false.
    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) -> bool {
        self.instances += 1;
        if ok {
            self.passes += 1;
        } else {
            self.failures.push(failure());
        }
        ok
    }

    pub fn fail(&mut self, input: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) {
        self.check(false, || Failure {
            input: input.into(),
            expected: expected.into(),
            actual: actual.into(),
        });
    }

    /// Record an instance whose expected and actual values are compared
    /// with `==` and rendered with `Debug` on mismatch.
    pub fn expect_eq<T: PartialEq + fmt::Debug>(
        &mut self,
        input: impl FnOnce() -> String,
        expected: T,
        actual: T,
    ) -> bool {
        let ok = expected == actual;
        self.check(ok, || Failure {
            input: input(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        })
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Fold another report's counts and failures into this one.
    pub fn absorb(&mut self, other: Report) {
        self.instances += other.instances;
        self.passes += other.passes;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
        self.elapsed += other.elapsed;
    }

    pub fn timed<F: FnOnce(&mut Report)>(mut self, body: F) -> Report {
        let start = Instant::now();
        body(&mut self);
        self.elapsed += start.elapsed();
        self
    }

    pub fn with_timing(mut self, on: bool) -> Report {
        self.ms = on.then_some(self.elapsed.as_millis() as u64);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {}: {}/{} instances",
            self.suite, self.passes, self.instances
        )?;
        if let Some(ms) = self.ms {
            write!(f, " in {ms} ms")?;
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        for fail in self.failures.iter().take(20) {
            write!(
                f,
                "\n  failure: {}\n    expected: {}\n    actual:   {}",
                fail.input, fail.expected, fail.actual
            )?;
        }
        if self.failures.len() > 20 {
            write!(f, "\n  ... {} more failures", self.failures.len() - 20)?;
        }
        Ok(())
    }
}
