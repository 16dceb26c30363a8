//! Sub-IIS models: predicates carving allowed runs out of the run space.
//!
//! A *model* describes which infinite schedules the environment may
//! produce. Here a model is simply a predicate over [`RunSpec`]s, always
//! phrased in terms of the run's *fast* set — the processes that keep
//! taking steps without ever waiting on anyone slower (see
//! [`runs::fast`](crate::runs::fast)):
//!
//! * **wait-free** — every run is allowed;
//! * **t-resilient** — at most `t` processes are slow, i.e.
//!   `|fast(r)| ≥ n + 1 − t`;
//! * **k-obstruction-free** — no more than `k` processes are fast, i.e.
//!   `|fast(r)| ≤ k`;
//! * **adversary** — a family `A` of process sets lists exactly the slow
//!   sets the environment may choose: `slow(r) ∈ A`;
//! * **custom** — an arbitrary caller-supplied predicate.
//!
//! All built-in kinds consult nothing about a run except its fast and
//! slow sets, so membership is a pure function of `(fast(r), slow(r))`.
//! Note that the *order* of blocks inside a round matters to those sets:
//! in `({p0}, {p1, p2})^ω` only `p0` runs without waiting (the others see
//! its snapshots every round), while in `({p1, p2}, {p0})^ω` the pair
//! `{p1, p2}` runs ahead and `p0` is the slow one.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::runs::{enumerate_runs, fast, slow, Pid, RunSpec};
use crate::{Budget, Error, Result};

/// The supported model families.
#[derive(Clone)]
pub enum ModelKind {
    /// Every run is allowed.
    WaitFree,
    /// At most `t` processes are slow: `|fast(r)| ≥ n + 1 − t`.
    Resilient(usize),
    /// No more than `k` processes are fast: `|fast(r)| ≤ k`.
    ObstructionFree(usize),
    /// The slow sets the environment may choose: `slow(r) ∈ A`.
    Adversary(BTreeSet<BTreeSet<Pid>>),
    /// An arbitrary predicate over run specs (not serializable).
    Custom(Arc<dyn Fn(&RunSpec) -> bool + Send + Sync>),
}

impl fmt::Debug for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::WaitFree => write!(f, "WaitFree"),
            ModelKind::Resilient(t) => write!(f, "Resilient({t})"),
            ModelKind::ObstructionFree(k) => write!(f, "ObstructionFree({k})"),
            ModelKind::Adversary(a) => f.debug_tuple("Adversary").field(a).finish(),
            ModelKind::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// A sub-IIS model over the process universe `0 ..= n`.
///
/// The universe size is part of the model: the resilience and
/// obstruction-freedom thresholds compare `|fast(r)|` against it, and the
/// slow set of a run is a complement within it.
#[derive(Clone, Debug)]
pub struct Model {
    n: usize,
    kind: ModelKind,
}

impl Model {
    /// The wait-free model over `0 ..= n`: all runs.
    pub fn wait_free(n: usize) -> Model {
        Model {
            n,
            kind: ModelKind::WaitFree,
        }
    }

    /// The t-resilient model over `0 ..= n`. Requires `t ≤ n`.
    pub fn resilient(n: usize, t: usize) -> Result<Model> {
        if t > n {
            return Err(Error::invalid(
                "resilient model",
                format!("t = {t} exceeds n = {n}"),
            ));
        }
        Ok(Model {
            n,
            kind: ModelKind::Resilient(t),
        })
    }

    /// The k-obstruction-free model over `0 ..= n`. Requires `1 ≤ k ≤ n + 1`.
    pub fn obstruction_free(n: usize, k: usize) -> Result<Model> {
        if k == 0 || k > n + 1 {
            return Err(Error::invalid(
                "obstruction-free model",
                format!("k = {k} outside 1 ..= {}", n + 1),
            ));
        }
        Ok(Model {
            n,
            kind: ModelKind::ObstructionFree(k),
        })
    }

    /// The adversary model over `0 ..= n` with the given family of
    /// allowed slow sets. Every member must be a subset of `0 ..= n`.
    pub fn adversary(n: usize, allowed: BTreeSet<BTreeSet<Pid>>) -> Result<Model> {
        for s in &allowed {
            if let Some(&p) = s.iter().max() {
                if p as usize > n {
                    return Err(Error::invalid(
                        "adversary model",
                        format!("slow set member p{p} outside the universe 0 ..= {n}"),
                    ));
                }
            }
        }
        Ok(Model {
            n,
            kind: ModelKind::Adversary(allowed),
        })
    }

    /// A custom model over `0 ..= n` from an arbitrary predicate.
    pub fn custom<F>(n: usize, pred: F) -> Model
    where
        F: Fn(&RunSpec) -> bool + Send + Sync + 'static,
    {
        Model {
            n,
            kind: ModelKind::Custom(Arc::new(pred)),
        }
    }

    /// The universe bound: processes are `0 ..= n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The model family.
    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Whether the run belongs to the model. See [`model_contains`].
    pub fn contains(&self, r: &RunSpec) -> Result<bool> {
        model_contains(self, r)
    }

    /// All canonical runs of this model within the given bounds, in the
    /// deterministic order of [`enumerate_runs`].
    pub fn runs(
        &self,
        depth: usize,
        tail_period: usize,
        budget: &mut Budget,
    ) -> Result<Vec<RunSpec>> {
        enumerate_model_runs(self, self.n, depth, tail_period, budget)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::WaitFree => write!(f, "wait-free (n = {})", self.n),
            ModelKind::Resilient(t) => write!(f, "{t}-resilient (n = {})", self.n),
            ModelKind::ObstructionFree(k) => {
                write!(f, "{k}-obstruction-free (n = {})", self.n)
            }
            ModelKind::Adversary(a) => {
                write!(f, "adversary with {} allowed slow sets (n = {})", a.len(), self.n)
            }
            ModelKind::Custom(_) => write!(f, "custom (n = {})", self.n),
        }
    }
}

/// Whether the run `r` belongs to the model `m`.
///
/// Errors if `r` is malformed or mentions a process outside the model's
/// universe.
pub fn model_contains(m: &Model, r: &RunSpec) -> Result<bool> {
    r.ensure_valid()?;
    if let Some(&p) = r.part().iter().max() {
        if p as usize > m.n {
            return Err(Error::Dimension {
                what: "process id in run",
                found: p as usize,
                max: m.n,
            });
        }
    }
    Ok(match &m.kind {
        ModelKind::WaitFree => true,
        ModelKind::Resilient(t) => fast(r)?.len() >= m.n + 1 - t,
        ModelKind::ObstructionFree(k) => fast(r)?.len() <= *k,
        ModelKind::Adversary(allowed) => allowed.contains(&slow(r, m.n)?),
        ModelKind::Custom(pred) => pred(r),
    })
}

/// Exactly the runs of [`enumerate_runs`]`(n, depth, tail_period)` that
/// belong to the model, in the same deterministic order.
///
/// `n` must match the model's universe.
pub fn enumerate_model_runs(
    m: &Model,
    n: usize,
    depth: usize,
    tail_period: usize,
    budget: &mut Budget,
) -> Result<Vec<RunSpec>> {
    if n != m.n {
        return Err(Error::invalid(
            "enumerate_model_runs",
            format!("universe n = {n} does not match the model's n = {}", m.n),
        ));
    }
    let mut out = Vec::new();
    for r in enumerate_runs(n, depth, tail_period, budget)? {
        if model_contains(m, &r)? {
            out.push(r);
        }
    }
    Ok(out)
}
