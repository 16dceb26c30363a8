//! Protocols, the solvability check, and the asynchronous computability
//! criterion.
//!
//! A *protocol* is a partial map from views to output vertices. Views
//! are encoded by the vertex they occupy in the iterated subdivision of
//! the input complex ([`encode_view`]); since a process that keeps seeing
//! only itself keeps its vertex name, the same name can encode views at
//! several rounds, so a protocol keys its decisions by the pair
//! `(round, view-vertex name)`.
//!
//! A task is solved in a model when, in every allowed run and from every
//! input simplex:
//!
//! 1. every infinitely participating process eventually reaches a view
//!    the protocol maps to an output vertex of its color, and its
//!    decided value never changes afterwards;
//! 2. at every round, the set of decided vertices is a face of a simplex
//!    of `Δ(ω ∩ χ⁻¹(part(r)))` — the image of the face of the input
//!    simplex spanned by the participants.
//!
//! [`check_protocol_solvability`] verifies both conditions over every
//! enumerated run of a model, *up to a depth bound*: a pass verdict
//! means "no violation up to depth D", never full solvability.
//!
//! The wait-free criterion is decided by [`act_search`]: the task is
//! solvable iff for some `k` there is a chromatic simplicial map
//! `η: Chr^k I → O` with `η(σ) ∈ Δ(τ)` for every face `τ ⊆ I` and every
//! `σ ∈ Chr^k τ`. The search works level by level and reports, per
//! level, either a map or a reason (a `Δ`-emptiness certificate when a
//! subdivision vertex has no admissible output at all).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::complex::{ChromaticComplex, Color, Simplex, VertexId};
use crate::models::{enumerate_model_runs, Model};
use crate::runs::{Pid, RunSpec, View, ViewBody};
use crate::subdivision::{chr_iter, chr_iter_budgeted, compose_derived_name, Tower};
use crate::tasks::TaskSpec;
use crate::{Budget, Error, Result};

// ----------------------------------------------------------------------
// protocols

/// A partial decision map from views — keyed by `(round, view-vertex
/// name)` — to output vertex names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Protocol {
    /// The decisions: `(round, canonical view-vertex name) → output
    /// vertex name`.
    pub decision: BTreeMap<(usize, String), String>,
}

impl Protocol {
    /// An everywhere-undefined protocol.
    pub fn empty() -> Protocol {
        Protocol::default()
    }

    /// The decision for a view reached at `round` with the given
    /// canonical vertex name, if any.
    pub fn decide(&self, round: usize, view_name: &str) -> Option<&str> {
        self.decision
            .get(&(round, view_name.to_string()))
            .map(String::as_str)
    }

    /// Defines (or overwrites) one decision.
    pub fn define(
        &mut self,
        round: usize,
        view_name: impl Into<String>,
        output: impl Into<String>,
    ) {
        self.decision
            .insert((round, view_name.into()), output.into());
    }

    /// Number of decisions in the domain.
    pub fn len(&self) -> usize {
        self.decision.len()
    }

    /// Whether the domain is empty.
    pub fn is_empty(&self) -> bool {
        self.decision.is_empty()
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "protocol with {} decision(s)", self.decision.len())
    }
}

/// A level-`k` decision map `η: Chr^k I → O` for the wait-free
/// criterion: vertex ids of the level-`k` subdivision of the input
/// complex to vertex ids of the output complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionMapACT {
    /// The subdivision level.
    pub k: usize,
    /// The assignment on level-`k` vertices.
    pub eta: BTreeMap<VertexId, VertexId>,
}

// ----------------------------------------------------------------------
// view encoding

/// The round a raw view belongs to: its nesting depth. Errors on view
/// trees whose members disagree on their round.
pub fn view_round(view: &View) -> Result<usize> {
    match &view.body {
        ViewBody::Input(_) => Ok(0),
        ViewBody::Seen(set) => {
            let mut rounds = BTreeSet::new();
            for member in set {
                rounds.insert(view_round(member)?);
            }
            match (rounds.first(), rounds.len()) {
                (Some(&r), 1) => Ok(r + 1),
                _ => Err(Error::invalid(
                    "view",
                    "members belong to different rounds",
                )),
            }
        }
    }
}

/// Encodes a round-`k` view as the vertex of the level-`k` subdivision
/// it occupies. The tower must subdivide the input complex at least `k`
/// times and the view's input names must be vertex names of the base.
pub fn encode_view(view: &View, tower: &Tower, k: usize) -> Result<VertexId> {
    let r = view_round(view)?;
    if r != k {
        return Err(Error::invalid(
            "view",
            format!("view belongs to round {r}, not {k}"),
        ));
    }
    if k > tower.height() {
        return Err(Error::invalid(
            "view",
            format!("tower of height {} cannot encode round {k}", tower.height()),
        ));
    }
    let name = view.vertex_name();
    let level = &tower.level(k).complex;
    match level.vertex_by_name(&name) {
        Some(v) if v.color == Color(view.pid) => Ok(v.id),
        Some(_) => Err(Error::invalid(
            "view",
            format!("vertex {name:?} exists but carries another color"),
        )),
        None => Err(Error::invalid(
            "view",
            format!("no vertex named {name:?} at level {k}"),
        )),
    }
}

/// The input assignment a top input simplex induces: process `i` starts
/// with the name of the simplex's color-`i` vertex.
pub fn input_assignment(input: &ChromaticComplex, omega: &[VertexId]) -> BTreeMap<Pid, String> {
    omega
        .iter()
        .map(|&v| {
            let vertex = input.vertex(v);
            (vertex.color.0 as Pid, vertex.name.clone())
        })
        .collect()
}

/// Canonical view-vertex names, round by round, computed without
/// materializing view trees: `name(p, 0)` is the input name and
/// `name(p, k)` collapses to `name(p, k−1)` when `p` saw only itself,
/// otherwise derives from the names just seen. Only views reached in
/// the run appear: `rounds[0]` covers the participants (a process that
/// never takes a step never reads its input), `rounds[k]` covers `S_k`.
pub(crate) fn view_name_rounds(
    r: &RunSpec,
    depth: usize,
    round0: &BTreeMap<Pid, String>,
    budget: &mut Budget,
) -> Result<Vec<BTreeMap<Pid, String>>> {
    r.ensure_valid()?;
    let part = r.part();
    for p in &part {
        if !round0.contains_key(p) {
            return Err(Error::invalid("views", format!("no input for p{p}")));
        }
    }
    let reached0: BTreeMap<Pid, String> = round0
        .iter()
        .filter(|(p, _)| part.contains(p))
        .map(|(p, n)| (*p, n.clone()))
        .collect();
    let mut rounds: Vec<BTreeMap<Pid, String>> = vec![reached0];
    for k in 1..=depth {
        let round = r.round_at(k);
        let mut names = BTreeMap::new();
        for p in round.participants() {
            let vis = round.vis(p).expect("participant has visibility");
            budget.charge(vis.len() as u64, "view names")?;
            let name = if vis.len() == 1 {
                rounds[k - 1][&p].clone()
            } else {
                let members: Vec<&str> =
                    vis.iter().map(|q| rounds[k - 1][q].as_str()).collect();
                compose_derived_name(p, &members)
            };
            names.insert(p, name);
        }
        rounds.push(names);
    }
    Ok(rounds)
}

// ----------------------------------------------------------------------
// running a protocol

/// What one process experienced when a protocol ran over a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessOutcome {
    /// The process.
    pub pid: Pid,
    /// First defined round and the value decided there, if any round of
    /// the explored window was defined.
    pub first: Option<(usize, String)>,
    /// Later defined values that differ from the first — condition-1
    /// instabilities.
    pub conflicts: Vec<String>,
}

/// Per-process outcomes of evaluating a protocol over one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    /// One entry per participating process, in pid order.
    pub per_process: Vec<ProcessOutcome>,
}

impl RunOutcome {
    /// Whether every listed process decided, stably.
    pub fn all_decided_stably(&self) -> bool {
        self.per_process
            .iter()
            .all(|o| o.first.is_some() && o.conflicts.is_empty())
    }
}

/// Evaluates a protocol on each participating process's successive
/// views, rounds `0 ..= depth`: records the first defined round and
/// value, and flags any later defined value that differs.
pub fn run_protocol(
    pi: &Protocol,
    r: &RunSpec,
    input: Option<&BTreeMap<Pid, String>>,
    depth: usize,
    budget: &mut Budget,
) -> Result<RunOutcome> {
    let round0: BTreeMap<Pid, String> = match input {
        Some(map) => map.iter().map(|(p, n)| (*p, n.clone())).collect(),
        None => r.part().into_iter().map(|p| (p, p.to_string())).collect(),
    };
    let table = view_name_rounds(r, depth, &round0, budget)?;
    let mut per_process = Vec::new();
    for p in r.part() {
        let mut outcome = ProcessOutcome {
            pid: p,
            first: None,
            conflicts: Vec::new(),
        };
        for (k, names) in table.iter().enumerate() {
            let Some(name) = names.get(&p) else { continue };
            let Some(value) = pi.decide(k, name) else { continue };
            match &outcome.first {
                None => outcome.first = Some((k, value.to_string())),
                Some((k0, v)) if v != value => outcome.conflicts.push(format!(
                    "p{p} decided {v:?} at round {k0} but {value:?} at round {k}"
                )),
                Some(_) => {}
            }
        }
        per_process.push(outcome);
    }
    Ok(RunOutcome { per_process })
}

// ----------------------------------------------------------------------
// the bounded solvability check

/// Verdict of [`check_protocol_solvability`]: bounded, never a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveVerdict {
    /// Every enumerated run and input passed both conditions within the
    /// bounds.
    NoViolation {
        /// Rounds explored per run (also the enumeration depth).
        depth: usize,
        /// Tail periods enumerated.
        tail_period: usize,
        /// Runs of the model that were checked.
        runs_checked: usize,
        /// Top input simplices combined with each run.
        inputs_checked: usize,
    },
    /// A concrete counterexample.
    Violation {
        /// The offending run.
        run: RunSpec,
        /// The input simplex, by vertex names.
        input_names: Vec<String>,
        /// Which solvability condition broke: 1 or 2.
        condition: u8,
        /// What happened.
        detail: String,
    },
}

impl SolveVerdict {
    /// Whether the verdict is a pass (within its bounds).
    pub fn is_pass(&self) -> bool {
        matches!(self, SolveVerdict::NoViolation { .. })
    }
}

impl fmt::Display for SolveVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveVerdict::NoViolation {
                depth,
                tail_period,
                runs_checked,
                inputs_checked,
            } => write!(
                f,
                "no violation up to depth {depth} (tail periods ≤ {tail_period}; \
                 {runs_checked} runs × {inputs_checked} input simplices)"
            ),
            SolveVerdict::Violation {
                run,
                input_names,
                condition,
                detail,
            } => write!(
                f,
                "condition ({condition}) violated on input {input_names:?}: {detail} \
                 [run: prefix {:?}, tail {:?}]",
                run.prefix, run.tail
            ),
        }
    }
}

/// Checks both solvability conditions for every enumerated run of the
/// model and every top input simplex, rounds `0 ..= depth`:
///
/// 1. every infinitely participating process decides within the window,
///    on a vertex of its own color, and no later defined value differs;
/// 2. at every round, the decided vertices form a face of a simplex of
///    `Δ(ω ∩ χ⁻¹(part(r)))`.
///
/// Returns the first violation found (runs in enumeration order, then
/// inputs, then rounds), or a pass verdict carrying its bounds.
pub fn check_protocol_solvability(
    pi: &Protocol,
    task: &TaskSpec,
    model: &Model,
    depth: usize,
    tail_period: usize,
    budget: &mut Budget,
) -> Result<SolveVerdict> {
    let n = task
        .input
        .dim()
        .ok_or_else(|| Error::invalid("solvability check", "empty input complex"))?;
    if model.n() != n {
        return Err(Error::invalid(
            "solvability check",
            format!("model universe n = {} but the task has n = {n}", model.n()),
        ));
    }
    let input_tops = task.input.tops();
    let runs = enumerate_model_runs(model, n, depth, tail_period, budget)?;
    for r in &runs {
        let part = r.part();
        let inf = r.inf_part();
        for omega in &input_tops {
            let round0 = input_assignment(&task.input, omega);
            let table = view_name_rounds(r, depth, &round0, budget)?;
            let face: Simplex = omega
                .iter()
                .copied()
                .filter(|&v| part.contains(&(task.input.vertex(v).color.0 as Pid)))
                .collect();
            let violation = |condition: u8, detail: String| SolveVerdict::Violation {
                run: r.clone(),
                input_names: task.input.names(omega),
                condition,
                detail,
            };
            let mut first: BTreeMap<Pid, (usize, String)> = BTreeMap::new();
            for (k, names) in table.iter().enumerate() {
                let mut decided: Vec<(Pid, String)> = Vec::new();
                for (p, name) in names {
                    if let Some(value) = pi.decide(k, name) {
                        decided.push((*p, value.to_string()));
                    }
                }
                if !decided.is_empty() {
                    let mut out_names: Vec<String> =
                        decided.iter().map(|(_, v)| v.clone()).collect();
                    out_names.sort();
                    out_names.dedup();
                    let out_ids = task.output.ids_for(&out_names)?;
                    if !task.delta_contains(&face, &out_ids) {
                        return Ok(violation(
                            2,
                            format!(
                                "at round {k} the decided set {out_names:?} is not a face \
                                 of any simplex of Δ({:?})",
                                task.input.names(&face)
                            ),
                        ));
                    }
                }
                for (p, value) in decided {
                    let out = task
                        .output
                        .vertex_by_name(&value)
                        .expect("ids_for above checked the name");
                    if out.color != Color(p) {
                        return Ok(violation(
                            1,
                            format!(
                                "p{p} decided {value:?}, which has color {} instead of {p}",
                                out.color.0
                            ),
                        ));
                    }
                    match first.get(&p) {
                        None => {
                            first.insert(p, (k, value));
                        }
                        Some((k0, v)) if *v != value => {
                            return Ok(violation(
                                1,
                                format!(
                                    "p{p} decided {v:?} at round {k0} but {value:?} at round {k}"
                                ),
                            ));
                        }
                        Some(_) => {}
                    }
                }
            }
            for p in &inf {
                if !first.contains_key(p) {
                    return Ok(violation(
                        1,
                        format!(
                            "p{p} participates forever but never decides within depth {depth}"
                        ),
                    ));
                }
            }
        }
    }
    Ok(SolveVerdict::NoViolation {
        depth,
        tail_period,
        runs_checked: runs.len(),
        inputs_checked: input_tops.len(),
    })
}

// ----------------------------------------------------------------------
// the wait-free criterion

/// Outcome of [`act_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActOutcome {
    /// A decision map satisfying the criterion, at the lowest level
    /// where one exists within the bound.
    Found(DecisionMapACT),
    /// No map up to the bound, with one reason per level — either a
    /// Δ-emptiness certificate or exhaustion.
    Unsolvable {
        /// The levels `0 ..= k_max` were all refuted.
        k_max: usize,
        /// One line per level explaining the refutation.
        certificates: Vec<String>,
    },
}

impl fmt::Display for ActOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActOutcome::Found(m) => {
                write!(f, "decision map at level {} ({} vertices)", m.k, m.eta.len())
            }
            ActOutcome::Unsolvable { k_max, certificates } => {
                writeln!(f, "no decision map up to level {k_max}:")?;
                for c in certificates {
                    writeln!(f, "  - {c}")?;
                }
                Ok(())
            }
        }
    }
}

struct LevelSearch {
    order: Vec<VertexId>,
    candidates: BTreeMap<VertexId, Vec<VertexId>>,
    /// For each vertex, the simplices containing it, each with the image
    /// tops its assignment must stay inside.
    constraints: BTreeMap<VertexId, Vec<(Simplex, Vec<Simplex>)>>,
}

/// Searches one level: `Ok(map)` on success, `Err(reason)` otherwise.
fn search_level(
    task: &TaskSpec,
    k: usize,
    budget: &mut Budget,
) -> Result<std::result::Result<DecisionMapACT, String>> {
    let tower = chr_iter_budgeted(&task.input, k, budget)?;
    let level = &tower.level(k).complex;
    let mut carrier_dim: BTreeMap<VertexId, usize> = BTreeMap::new();
    for v in level.vertices() {
        carrier_dim.insert(v.id, tower.carrier_dim_in_base(k, v.id)?);
    }
    // Per-vertex candidates: color-matching output vertices whose
    // singleton lies in Δ(carrier).
    let mut candidates: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for v in level.vertices() {
        let carrier = tower.carrier_of(k, &[v.id], 0)?;
        let mut cands: Vec<VertexId> = task
            .output
            .vertices()
            .filter(|w| w.color == v.color && task.delta_contains(&carrier, &[w.id]))
            .map(|w| w.id)
            .collect();
        if cands.is_empty() {
            let image = task.delta_of(&carrier);
            let why = if image.is_empty() {
                "Δ there is empty".to_string()
            } else {
                format!("Δ there has no vertex of color {}", v.color.0)
            };
            return Ok(Err(format!(
                "k={k}: no admissible output for subdivision vertex {:?} \
                 (carrier {:?}): {why}",
                v.name,
                tower.base().names(&carrier)
            )));
        }
        // Prefer the output vertex with the same name, if one exists:
        // for affine tasks whose output sits in the same subdivision,
        // the inert choice is tried first and search degenerates to a
        // straight walk.
        cands.sort_unstable_by_key(|&w| (task.output.vertex(w).name != v.name, w));
        candidates.insert(v.id, cands);
    }
    // Simplex constraints, each attached to all its vertices so partial
    // assignments are pruned as early as possible.
    let mut constraints: BTreeMap<VertexId, Vec<(Simplex, Vec<Simplex>)>> = BTreeMap::new();
    for sigma in level.simplices() {
        if sigma.len() < 2 {
            continue;
        }
        let carrier = tower.carrier_of(k, sigma, 0)?;
        let tops: Vec<Simplex> = task.delta_of(&carrier).to_vec();
        for &v in sigma {
            constraints
                .entry(v)
                .or_default()
                .push((sigma.clone(), tops.clone()));
        }
    }
    let mut order: Vec<VertexId> = level.vertices().map(|v| v.id).collect();
    order.sort_unstable_by_key(|v| (carrier_dim[v], *v));
    let search = LevelSearch {
        order,
        candidates,
        constraints,
    };
    let mut assignment: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    if backtrack(&search, 0, &mut assignment, budget)? {
        Ok(Ok(DecisionMapACT { k, eta: assignment }))
    } else {
        Ok(Err(format!(
            "k={k}: exhaustive search found no chromatic simplicial map \
             satisfying the carrier condition"
        )))
    }
}

fn backtrack(
    search: &LevelSearch,
    index: usize,
    assignment: &mut BTreeMap<VertexId, VertexId>,
    budget: &mut Budget,
) -> Result<bool> {
    if index == search.order.len() {
        return Ok(true);
    }
    let v = search.order[index];
    for &w in &search.candidates[&v] {
        budget.charge(1, "decision map search")?;
        assignment.insert(v, w);
        if feasible(search, v, assignment) && backtrack(search, index + 1, assignment, budget)? {
            return Ok(true);
        }
        assignment.remove(&v);
    }
    Ok(false)
}

/// Every simplex through `v` must keep its assigned part inside one of
/// its allowed image tops. Checking subsets is exact: once a simplex is
/// fully assigned, "assigned part fits in a top" is exactly "the image
/// is a face of a top".
fn feasible(
    search: &LevelSearch,
    v: VertexId,
    assignment: &BTreeMap<VertexId, VertexId>,
) -> bool {
    let Some(list) = search.constraints.get(&v) else {
        return true;
    };
    for (sigma, tops) in list {
        let mut image: Vec<VertexId> = sigma
            .iter()
            .filter_map(|u| assignment.get(u).copied())
            .collect();
        image.sort_unstable();
        image.dedup();
        if !tops
            .iter()
            .any(|top| image.iter().all(|x| top.binary_search(x).is_ok()))
        {
            return false;
        }
    }
    true
}

/// Searches levels `0 ..= k_max` for a decision map, returning the
/// first hit or a per-level refutation list.
pub fn act_search(task: &TaskSpec, k_max: usize, budget: &mut Budget) -> Result<ActOutcome> {
    let mut certificates = Vec::new();
    for k in 0..=k_max {
        match search_level(task, k, budget)? {
            Ok(map) => return Ok(ActOutcome::Found(map)),
            Err(reason) => certificates.push(reason),
        }
    }
    Ok(ActOutcome::Unsolvable {
        k_max,
        certificates,
    })
}

/// The findings of [`act_verify`].
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    /// Violations found; empty means the map satisfies the criterion.
    pub violations: Vec<String>,
}

impl VerifyReport {
    /// Whether the map passed.
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "decision map verified")
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

/// Exhaustively re-checks a decision map: chromaticity, simpliciality,
/// and the carrier condition `η(σ) ∈ Δ(τ)` for every input face `τ` and
/// every `σ ∈ Chr^k τ`. Errors if the map's domain is not exactly the
/// vertex set of `Chr^k I` or mentions unknown output vertices.
pub fn act_verify(map: &DecisionMapACT, task: &TaskSpec) -> Result<VerifyReport> {
    let tower = chr_iter(&task.input, map.k)?;
    let level = &tower.level(map.k).complex;
    let domain: BTreeSet<VertexId> = map.eta.keys().copied().collect();
    let expected: BTreeSet<VertexId> = level.vertices().map(|v| v.id).collect();
    if domain != expected {
        return Err(Error::invalid(
            "decision map",
            format!(
                "level mismatch: domain has {} vertices, Chr^{} of the input has {}",
                domain.len(),
                map.k,
                expected.len()
            ),
        ));
    }
    for &w in map.eta.values() {
        if w as usize >= task.output.vertex_count() {
            return Err(Error::invalid(
                "decision map",
                format!("unknown output vertex id {w}"),
            ));
        }
    }
    let mut violations = Vec::new();
    for v in level.vertices() {
        let w = map.eta[&v.id];
        if task.output.vertex(w).color != v.color {
            violations.push(format!(
                "not chromatic: {} ↦ {} changes color {} to {}",
                v.name,
                task.output.vertex(w).name,
                v.color.0,
                task.output.vertex(w).color.0
            ));
        }
    }
    let input_simplices: Vec<Simplex> = task.input.simplices().cloned().collect();
    for sigma in level.simplices() {
        let mut image: Vec<VertexId> = sigma.iter().map(|u| map.eta[u]).collect();
        image.sort_unstable();
        image.dedup();
        if !task.output.contains_simplex(&image) {
            violations.push(format!(
                "not simplicial: image of {:?} is {:?}, not a simplex of the output",
                level.names(sigma),
                task.output.names(&image)
            ));
            continue;
        }
        let carrier = tower.carrier_of(map.k, sigma, 0)?;
        for tau in &input_simplices {
            if carrier.iter().all(|c| tau.binary_search(c).is_ok())
                && !task.delta_contains(tau, &image)
            {
                violations.push(format!(
                    "carrier condition fails: σ = {:?} lies in Chr^{} of τ = {:?} \
                     but its image {:?} is not in Δ(τ)",
                    level.names(sigma),
                    map.k,
                    task.input.names(tau),
                    task.output.names(&image)
                ));
            }
        }
    }
    Ok(VerifyReport { violations })
}

/// Turns a decision map into the protocol that decides at round `k`:
/// `Π(round-k view at vertex v) = η(v)`, undefined at earlier rounds.
pub fn protocol_from_map(map: &DecisionMapACT, task: &TaskSpec) -> Result<Protocol> {
    let tower = chr_iter(&task.input, map.k)?;
    let level = &tower.level(map.k).complex;
    let mut pi = Protocol::empty();
    for v in level.vertices() {
        let &w = map.eta.get(&v.id).ok_or_else(|| {
            Error::invalid(
                "decision map",
                format!("no value for level-{} vertex {:?}", map.k, v.name),
            )
        })?;
        if w as usize >= task.output.vertex_count() {
            return Err(Error::invalid(
                "decision map",
                format!("unknown output vertex id {w}"),
            ));
        }
        pi.define(map.k, v.name.clone(), task.output.vertex(w).name.clone());
    }
    Ok(pi)
}
