//! Combinatorial topology of iterated immediate snapshots, at desk scale.
//!
//! This crate models the protocol complexes of the *iterated immediate
//! snapshot* (IIS) model of distributed computing for a handful of
//! processes (n + 1 ≤ 4), entirely in exact rational arithmetic:
//!
//! * [`complex`] — chromatic simplicial complexes: colored vertices,
//!   simplices, stars, links, carriers.
//! * [`subdivision`] — the standard chromatic subdivision `Chr`, its
//!   iterates, the barycentric subdivision, and partial (stable-set
//!   respecting) subdivision steps.
//! * [`runs`] — eventually-periodic IIS runs: rounds of ordered
//!   partitions, views, extension, the run metric, fast sets, and the
//!   simplex tower a run traces through the subdivisions.
//! * [`models`] — sub-IIS models carved out of the run space: wait-free,
//!   t-resilient, obstruction-free, and adversary models.
//! * [`tasks`] — colored tasks `(I, O, Δ)` and the constructions used in
//!   the worked examples (total order tasks, `lt` tasks, plus-completion).
//! * [`solvability`] — the asynchronous computability check: search for a
//!   color- and carrier-preserving simplicial decision map on an iterated
//!   subdivision, with certificates for both verdicts.
//! * [`terminating`] — terminating subdivisions: towers of partial
//!   subdivision steps with stable sets, decision maps on them, protocol
//!   extraction and the round trip back.
//! * [`resilience`] — the t-resilient worked example (n = 2, t = 1)
//!   end to end.
//! * [`json`] / [`svg`] / [`cert`] — exact serialization, figure export,
//!   and verification certificates.
//!
//! Everything is deterministic: no randomness, no floating point in any
//! verdict path (floats appear only as prefilters backed by exact
//! confirmation, and in SVG coordinate formatting).

pub mod cert;
pub mod complex;
pub mod geometry;
pub mod json;
pub mod models;
pub mod resilience;
pub mod runs;
pub mod solvability;
pub mod subdivision;
pub mod svg;
pub mod tasks;
pub mod terminating;

/// Errors reported by the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An enumeration or materialization would exceed the element budget.
    #[error("budget exceeded: needed more than {cap} elements ({context})")]
    BudgetExceeded {
        /// The configured cap.
        cap: u64,
        /// What was being enumerated.
        context: &'static str,
    },
    /// A dimension outside the supported desk scale.
    #[error("dimension {found} out of range for {what} (max {max})")]
    Dimension {
        what: &'static str,
        found: usize,
        max: usize,
    },
    /// A structural precondition failed.
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
    /// A JSON document failed schema validation.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    /// Underlying JSON syntax error.
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            why: why.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// An element-count budget threaded through enumerations and
/// materializations so that a mistyped bound fails fast instead of
/// filling memory.
#[derive(Debug, Clone)]
pub struct Budget {
    cap: u64,
    used: u64,
}

/// Default enumeration budget: 10^7 elements.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// A budget capped at `cap` elements.
    pub fn new(cap: u64) -> Self {
        Budget { cap, used: 0 }
    }

    /// Account for `count` more elements in the context named `context`.
    pub fn charge(&mut self, count: u64, context: &'static str) -> Result<()> {
        self.used = self.used.saturating_add(count);
        if self.used > self.cap {
            Err(Error::BudgetExceeded {
                cap: self.cap,
                context,
            })
        } else {
            Ok(())
        }
    }

    /// Elements consumed so far.
    pub fn used(&self) -> u64 {
        self.used
    }

    /// The configured cap.
    pub fn cap(&self) -> u64 {
        self.cap
    }
}
