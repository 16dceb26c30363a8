//! Terminating subdivisions and the generalized computability criterion.
//!
//! A *terminating subdivision* interleaves chromatic subdivision steps
//! with termination: at each level a subcomplex `Σ_k` is declared
//! stable and never subdivided again, so `C_{k+1}` is the partial
//! subdivision of `C_k` away from `Σ_k`. Stable simplices persist
//! through all later levels; their union is the stable complex `K`,
//! realized inside `|I|`.
//!
//! The general criterion: a model solves a task iff some terminating
//! subdivision of the input complex is *admissible* for the model —
//! every run, on every top input simplex, eventually has its round
//! simplex contained in (the color projection of) a stable simplex —
//! together with a chromatic map `δ: K → O` sending every stable
//! simplex geometrically inside an input face `σ` into `Δ(σ)`.
//! [`admissible_check`] verifies admissibility over enumerated runs up
//! to bounds; [`gact_verify`] adds the exhaustive carrier condition;
//! [`protocol_from_gact`] and [`subdiv_from_protocol`] translate
//! between `(T, δ)` pairs and protocols.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::complex::{ChromaticComplex, Color, Simplex};
use crate::geometry::{point_in_simplex, solve_barycentric, Rat};
use crate::models::{enumerate_model_runs, Model};
use crate::runs::{Pid, RunSpec};
use crate::solvability::{input_assignment, view_name_rounds, Protocol};
use crate::subdivision::{chr_iter_budgeted, Tower};
use crate::tasks::TaskSpec;
use crate::{Budget, Error, Result};

// ----------------------------------------------------------------------
// schedules and materialization

/// Rule producing the stable set `Σ_k` from the level-`k` complex.
#[derive(Debug, Clone)]
pub enum Schedule {
    /// Never terminate anything: the stable complex stays empty.
    Never,
    /// Terminate every simplex from level `k` on (the plain `Chr^k`
    /// subdivision, viewed as a terminating one).
    EverythingAt(usize),
    /// From `from_level` on, terminate every simplex all of whose
    /// vertices have base-carrier dimension at least `min_dim`.
    CarrierDimAtLeast {
        /// Minimum carrier dimension a vertex needs to stabilize.
        min_dim: usize,
        /// First level at which anything stabilizes.
        from_level: usize,
    },
    /// Explicit per-level stable families, each simplex given by its
    /// vertex names (levels past the end of the vector are empty).
    Explicit(Vec<BTreeSet<Vec<String>>>),
}

impl Schedule {
    /// The stable set at level `k` of the tower, in level-`k` ids.
    fn sigma_at(&self, tower: &Tower, k: usize) -> Result<BTreeSet<Simplex>> {
        let complex = &tower.level(k).complex;
        match self {
            Schedule::Never => Ok(BTreeSet::new()),
            Schedule::EverythingAt(m) => {
                if k < *m {
                    Ok(BTreeSet::new())
                } else {
                    Ok(complex.simplices().cloned().collect())
                }
            }
            Schedule::CarrierDimAtLeast {
                min_dim,
                from_level,
            } => {
                if k < *from_level {
                    return Ok(BTreeSet::new());
                }
                let mut deep = vec![false; complex.vertex_count()];
                for v in complex.vertices() {
                    deep[v.id as usize] = tower.carrier_dim_in_base(k, v.id)? >= *min_dim;
                }
                Ok(complex
                    .simplices()
                    .filter(|s| s.iter().all(|&v| deep[v as usize]))
                    .cloned()
                    .collect())
            }
            Schedule::Explicit(levels) => {
                let mut sigma = BTreeSet::new();
                for names in levels.get(k).into_iter().flatten() {
                    let ids = complex.ids_for(names)?;
                    if !complex.contains_simplex(&ids) {
                        return Err(Error::invalid(
                            "schedule",
                            format!("{names:?} is not a simplex of level {k}"),
                        ));
                    }
                    sigma.insert(ids);
                }
                Ok(sigma)
            }
        }
    }
}

/// The stable complex `K` of a materialized terminating subdivision:
/// the union of the `Σ_k`, with per-simplex stabilization rounds.
#[derive(Debug, Clone)]
pub struct StableComplex {
    /// The union of all stable simplices, with the coordinates they
    /// carry in `|I|`.
    pub complex: ChromaticComplex,
    /// Earliest level at which each simplex (own ids) became stable.
    pub round: BTreeMap<Simplex, usize>,
}

impl StableComplex {
    /// Whether nothing ever stabilized.
    pub fn is_empty(&self) -> bool {
        self.round.is_empty()
    }
}

/// A materialized terminating subdivision: the levels `C_0 ..= C_D`,
/// the stable sets `Σ_0 ⊆ … ⊆ Σ_D`, and their union `K`.
#[derive(Debug, Clone)]
pub struct TerminatingSubdivision {
    tower: Tower,
    /// `sigmas[k]` is `Σ_k` in level-`k` ids.
    sigmas: Vec<BTreeSet<Simplex>>,
    stable: StableComplex,
}

impl TerminatingSubdivision {
    /// The deepest materialized level `D`.
    pub fn depth(&self) -> usize {
        self.sigmas.len() - 1
    }

    /// The tower of levels `C_0 ..= C_D`.
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// The base complex `C_0 = I`.
    pub fn base(&self) -> &ChromaticComplex {
        self.tower.base()
    }

    /// The stable set `Σ_k`, in level-`k` ids.
    pub fn sigma(&self, k: usize) -> &BTreeSet<Simplex> {
        &self.sigmas[k]
    }

    /// The stable complex `K`.
    pub fn stable(&self) -> &StableComplex {
        &self.stable
    }
}

/// One partial chromatic subdivision step: the simplices in `stable`
/// (a downward-closed family) are kept whole, everything else is
/// subdivided around them.
pub fn partial_chr_step(
    c: &ChromaticComplex,
    stable: &BTreeSet<Simplex>,
) -> Result<ChromaticComplex> {
    let mut tower = Tower::new(c.clone())?;
    tower.subdivide_partial(stable)?;
    Ok(tower.top().complex.clone())
}

/// Materializes a terminating subdivision of `base` down to level
/// `depth`, evaluating the schedule at every level and accumulating
/// the stable complex.
pub fn materialize(
    base: &ChromaticComplex,
    schedule: &Schedule,
    depth: usize,
    budget: &mut Budget,
) -> Result<TerminatingSubdivision> {
    let mut tower = Tower::new(base.clone())?;
    let mut sigmas: Vec<BTreeSet<Simplex>> = Vec::with_capacity(depth + 1);
    let mut prev_names: BTreeSet<Vec<String>> = BTreeSet::new();
    for k in 0..=depth {
        let complex = &tower.level(k).complex;
        budget.charge(complex.simplices().count() as u64, "terminating subdivision")?;
        let sigma = schedule.sigma_at(&tower, k)?;
        let names: BTreeSet<Vec<String>> = sigma
            .iter()
            .map(|s| {
                let mut ns = tower.level(k).complex.names(s);
                ns.sort();
                ns
            })
            .collect();
        if let Some(lost) = prev_names.difference(&names).next() {
            return Err(Error::invalid(
                "schedule",
                format!("stable simplex {lost:?} dropped at level {k}"),
            ));
        }
        prev_names = names;
        sigmas.push(sigma);
        if k < depth {
            let sigma = sigmas[k].clone();
            tower.subdivide_partial(&sigma)?;
        }
    }
    let stable = assemble_stable(&tower, &sigmas)?;
    Ok(TerminatingSubdivision {
        tower,
        sigmas,
        stable,
    })
}

/// Builds the stable complex from per-level stable sets: vertices and
/// simplices are identified across levels by name (stable simplices
/// persist unchanged), each simplex stamped with its earliest level.
fn assemble_stable(tower: &Tower, sigmas: &[BTreeSet<Simplex>]) -> Result<StableComplex> {
    let mut round_by_names: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    let mut vertex_info: BTreeMap<String, (Color, Option<Vec<Rat>>)> = BTreeMap::new();
    for (k, sigma) in sigmas.iter().enumerate() {
        let complex = &tower.level(k).complex;
        for s in sigma {
            let mut names = complex.names(s);
            names.sort();
            round_by_names.entry(names).or_insert(k);
            for &id in s {
                let v = complex.vertex(id);
                vertex_info
                    .entry(v.name.clone())
                    .or_insert_with(|| (v.color, v.coords.clone()));
            }
        }
    }
    let mut complex = ChromaticComplex::new();
    for (name, (color, coords)) in &vertex_info {
        complex.add_vertex(name.clone(), *color, coords.clone())?;
    }
    let mut round = BTreeMap::new();
    for (names, k) in &round_by_names {
        let ids = complex.ids_for(names)?;
        complex.add_simplex(&ids)?;
        round.insert(ids, *k);
    }
    Ok(StableComplex { complex, round })
}

// ----------------------------------------------------------------------
// the decision map on the stable complex

/// A chromatic assignment from stable-complex vertices (by name) to
/// output vertices (by name).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecisionMapGACT {
    /// stable vertex name → output vertex name.
    pub delta: BTreeMap<String, String>,
}

/// Reads a wait-free level-`k` decision map as a stable-complex map:
/// level vertex names to output vertex names.
pub fn delta_from_act(
    map: &crate::solvability::DecisionMapACT,
    task: &TaskSpec,
) -> Result<DecisionMapGACT> {
    let tower = crate::subdivision::chr_iter(&task.input, map.k)?;
    let level = &tower.level(map.k).complex;
    let mut delta = BTreeMap::new();
    for v in level.vertices() {
        let &w = map.eta.get(&v.id).ok_or_else(|| {
            Error::invalid("decision map", format!("no value for vertex {:?}", v.name))
        })?;
        delta.insert(v.name.clone(), task.output.vertex(w).name.clone());
    }
    Ok(DecisionMapGACT { delta })
}

// ----------------------------------------------------------------------
// admissibility

/// Verdict of [`admissible_check`], always bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibleVerdict {
    /// Every enumerated run landed in a stable simplex within `depth`
    /// rounds.
    Admissible {
        /// Rounds explored per run (also the enumeration depth).
        depth: usize,
        /// Tail periods enumerated.
        tail_period: usize,
        /// Number of runs checked.
        runs_checked: usize,
    },
    /// A run that never lands within the bounds.
    NotAdmissible {
        /// The witness run.
        run: RunSpec,
        /// The input simplex, by vertex names.
        input_names: Vec<String>,
        /// What failed.
        detail: String,
    },
}

impl AdmissibleVerdict {
    /// Whether the verdict is a (bounded) pass.
    pub fn is_pass(&self) -> bool {
        matches!(self, AdmissibleVerdict::Admissible { .. })
    }
}

impl fmt::Display for AdmissibleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleVerdict::Admissible {
                depth,
                tail_period,
                runs_checked,
            } => write!(
                f,
                "admissible up to depth {depth} (tail periods ≤ {tail_period}; \
                 {runs_checked} runs)"
            ),
            AdmissibleVerdict::NotAdmissible {
                run,
                input_names,
                detail,
            } => write!(
                f,
                "not admissible on input {input_names:?}: {detail} \
                 [run: prefix {:?}, tail {:?}]",
                run.prefix, run.tail
            ),
        }
    }
}

/// A stable simplex prepared for geometric covering tests: its color
/// projection into `|s|`, with a floating-point bounding box used only
/// to prune candidates before the exact test.
struct StableCand {
    rho: Vec<Vec<Rat>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    ids: Simplex,
}

const BBOX_EPS: f64 = 1e-9;

fn approx(coords: &[Rat]) -> Vec<f64> {
    coords.iter().map(|r| r.to_f64().unwrap_or(0.5)).collect()
}

fn bbox(points: &[Vec<Rat>]) -> (Vec<f64>, Vec<f64>) {
    let dim = points[0].len();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for (d, c) in approx(p).into_iter().enumerate() {
            lo[d] = lo[d].min(c - BBOX_EPS);
            hi[d] = hi[d].max(c + BBOX_EPS);
        }
    }
    (lo, hi)
}

fn bbox_contains(lo: &[f64], hi: &[f64], point: &[f64]) -> bool {
    point
        .iter()
        .enumerate()
        .all(|(d, &c)| lo[d] <= c && c <= hi[d])
}

/// The color projection `ρ(v)` of a stable vertex into `|s|`: write the
/// vertex's point barycentrically over a base simplex containing it and
/// push each weight onto the corner of that base vertex's color.
fn rho_coords(base: &ChromaticComplex, n: usize, point: &[Rat]) -> Result<Vec<Rat>> {
    for tau in base.tops() {
        let verts = base
            .coords_of(&tau)
            .ok_or_else(|| Error::invalid("complex", "missing coordinates"))?;
        if let Some(lambda) = solve_barycentric(point, &verts)? {
            if lambda.iter().all(|l| !l.is_negative()) {
                let mut image = vec![Rat::zero(); n + 1];
                for (l, &id) in lambda.iter().zip(tau.iter()) {
                    image[base.vertex(id).color.0 as usize] += l;
                }
                return Ok(image);
            }
        }
    }
    Err(Error::invalid(
        "stable complex",
        "a stable vertex lies outside every base simplex".to_string(),
    ))
}

fn stable_candidates(
    t: &TerminatingSubdivision,
    n: usize,
) -> Result<Vec<StableCand>> {
    let k = &t.stable;
    let mut rho_by_vertex: Vec<Vec<Rat>> = Vec::with_capacity(k.complex.vertex_count());
    for v in k.complex.vertices() {
        let point = v
            .coords
            .as_deref()
            .ok_or_else(|| Error::invalid("stable complex", "missing coordinates"))?;
        rho_by_vertex.push(rho_coords(t.base(), n, point)?);
    }
    let mut cands = Vec::with_capacity(k.round.len());
    for s in k.round.keys() {
        let rho: Vec<Vec<Rat>> = s.iter().map(|&v| rho_by_vertex[v as usize].clone()).collect();
        let (lo, hi) = bbox(&rho);
        cands.push(StableCand {
            lo,
            hi,
            ids: s.clone(),
            rho,
        });
    }
    Ok(cands)
}

/// Checks that every enumerated run of the model, on every top input
/// simplex ω, has some round simplex `σ_k` (1 ≤ k ≤ depth) contained in
/// `ρ(|τ|)` for a stable simplex τ with `|τ| ⊆ |ω|`. Exact rational
/// containment; a bounding-box prefilter only prunes candidates.
pub fn admissible_check(
    t: &TerminatingSubdivision,
    model: &Model,
    depth: usize,
    tail_period: usize,
    budget: &mut Budget,
) -> Result<AdmissibleVerdict> {
    let n = t
        .base()
        .dim()
        .ok_or_else(|| Error::invalid("admissibility check", "empty base complex"))?;
    if model.n() != n {
        return Err(Error::invalid(
            "admissibility check",
            format!("model universe n = {} but the base has n = {n}", model.n()),
        ));
    }
    let cands = stable_candidates(t, n)?;
    // Per top input simplex: the maximal stable simplices with |τ| ⊆ |ω|.
    let tops = t.base().tops();
    let mut per_omega: Vec<Vec<&StableCand>> = Vec::with_capacity(tops.len());
    for omega in &tops {
        let verts = t
            .base()
            .coords_of(omega)
            .ok_or_else(|| Error::invalid("complex", "missing coordinates"))?;
        let mut inside: Vec<&StableCand> = Vec::new();
        'cand: for cand in &cands {
            let stable_coords = t.stable().complex.coords_of(&cand.ids).expect("checked");
            for point in stable_coords {
                if !point_in_simplex(point, &verts)? {
                    continue 'cand;
                }
            }
            inside.push(cand);
        }
        let maximal: Vec<&StableCand> = inside
            .iter()
            .filter(|c| {
                !inside.iter().any(|other| {
                    other.ids.len() > c.ids.len()
                        && c.ids.iter().all(|v| other.ids.binary_search(v).is_ok())
                })
            })
            .copied()
            .collect();
        per_omega.push(maximal);
    }
    // Shared realization of all runs over the standard simplex.
    let shared = chr_iter_budgeted(&ChromaticComplex::standard_simplex(n), depth, budget)?;
    let mut level_points: Vec<BTreeMap<String, (Vec<Rat>, Vec<f64>)>> = Vec::new();
    for k in 0..=depth {
        let complex = &shared.level(k).complex;
        let mut points = BTreeMap::new();
        for v in complex.vertices() {
            let coords = v.coords.clone().expect("standard towers carry coordinates");
            let f = approx(&coords);
            points.insert(v.name.clone(), (coords, f));
        }
        level_points.push(points);
    }
    let runs = enumerate_model_runs(model, n, depth, tail_period, budget)?;
    for r in &runs {
        let round0: BTreeMap<Pid, String> =
            r.part().into_iter().map(|p| (p, p.to_string())).collect();
        let table = view_name_rounds(r, depth, &round0, budget)?;
        for (omega, cands_here) in tops.iter().zip(&per_omega) {
            let mut covered = false;
            'rounds: for k in 1..=depth {
                let points: Vec<&(Vec<Rat>, Vec<f64>)> = table[k]
                    .values()
                    .map(|name| &level_points[k][name])
                    .collect();
                'cand: for cand in cands_here {
                    for (_, f) in &points {
                        if !bbox_contains(&cand.lo, &cand.hi, f) {
                            continue 'cand;
                        }
                    }
                    let verts: Vec<&[Rat]> = cand.rho.iter().map(|c| c.as_slice()).collect();
                    for (p, _) in &points {
                        if !point_in_simplex(p, &verts)? {
                            continue 'cand;
                        }
                    }
                    covered = true;
                    break 'rounds;
                }
            }
            if !covered {
                return Ok(AdmissibleVerdict::NotAdmissible {
                    run: r.clone(),
                    input_names: t.base().names(omega),
                    detail: format!(
                        "no stable simplex contains any round simplex σ_k for 1 ≤ k ≤ {depth}"
                    ),
                });
            }
        }
    }
    Ok(AdmissibleVerdict::Admissible {
        depth,
        tail_period,
        runs_checked: runs.len(),
    })
}

// ----------------------------------------------------------------------
// the full criterion

/// Verdict of [`gact_verify`]: the carrier condition is exact and
/// exhaustive, admissibility is bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GactVerdict {
    /// Both conditions hold (admissibility within its bounds).
    Pass {
        /// Rounds explored per run.
        depth: usize,
        /// Tail periods enumerated.
        tail_period: usize,
        /// Runs checked for admissibility.
        runs_checked: usize,
        /// Stable simplices checked for the carrier condition.
        stable_checked: usize,
    },
    /// Admissibility failed on a witness run.
    NotAdmissible {
        /// The witness run.
        run: RunSpec,
        /// The input simplex, by vertex names.
        input_names: Vec<String>,
        /// What failed.
        detail: String,
    },
    /// The carrier condition failed on a stable simplex.
    CarrierViolation {
        /// The stable simplex, by vertex names.
        stable_names: Vec<String>,
        /// The input simplex it sits in, by vertex names.
        input_names: Vec<String>,
        /// What failed.
        detail: String,
    },
}

impl GactVerdict {
    /// Whether both conditions passed (within the admissibility bounds).
    pub fn is_pass(&self) -> bool {
        matches!(self, GactVerdict::Pass { .. })
    }
}

impl fmt::Display for GactVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GactVerdict::Pass {
                depth,
                tail_period,
                runs_checked,
                stable_checked,
            } => write!(
                f,
                "criterion holds: carrier condition exact on {stable_checked} stable \
                 simplices; admissible up to depth {depth} (tail periods ≤ {tail_period}; \
                 {runs_checked} runs)"
            ),
            GactVerdict::NotAdmissible {
                run,
                input_names,
                detail,
            } => write!(
                f,
                "not admissible on input {input_names:?}: {detail} \
                 [run: prefix {:?}, tail {:?}]",
                run.prefix, run.tail
            ),
            GactVerdict::CarrierViolation {
                stable_names,
                input_names,
                detail,
            } => write!(
                f,
                "carrier condition fails for stable simplex {stable_names:?} \
                 inside input simplex {input_names:?}: {detail}"
            ),
        }
    }
}

pub(crate) fn ensure_same_complex(
    a: &ChromaticComplex,
    b: &ChromaticComplex,
    what: &'static str,
) -> Result<()> {
    let av: BTreeMap<&str, Color> = a.vertices().map(|v| (v.name.as_str(), v.color)).collect();
    let bv: BTreeMap<&str, Color> = b.vertices().map(|v| (v.name.as_str(), v.color)).collect();
    let a_simps: BTreeSet<Vec<String>> = a
        .simplices()
        .map(|s| {
            let mut ns = a.names(s);
            ns.sort();
            ns
        })
        .collect();
    let b_simps: BTreeSet<Vec<String>> = b
        .simplices()
        .map(|s| {
            let mut ns = b.names(s);
            ns.sort();
            ns
        })
        .collect();
    if av != bv || a_simps != b_simps {
        return Err(Error::invalid(what, "complexes disagree".to_string()));
    }
    Ok(())
}

/// Verifies the full criterion for `(T, δ)` against a task and model:
/// (b) exactly and exhaustively — for every stable simplex τ and every
/// input simplex σ with `|τ| ⊆ |σ|`, `δ(τ) ∈ Δ(σ)` — and (a) via
/// [`admissible_check`] up to the stated bounds. A non-chromatic or
/// non-total δ is an error, not a verdict.
pub fn gact_verify(
    t: &TerminatingSubdivision,
    delta: &DecisionMapGACT,
    task: &TaskSpec,
    model: &Model,
    depth: usize,
    tail_period: usize,
    budget: &mut Budget,
) -> Result<GactVerdict> {
    ensure_same_complex(t.base(), &task.input, "criterion check")?;
    let k = t.stable();
    for v in k.complex.vertices() {
        let out_name = delta.delta.get(&v.name).ok_or_else(|| {
            Error::invalid("decision map", format!("δ undefined on stable vertex {:?}", v.name))
        })?;
        let w = task.output.vertex_by_name(out_name).ok_or_else(|| {
            Error::invalid("decision map", format!("unknown output vertex {out_name:?}"))
        })?;
        if w.color != v.color {
            return Err(Error::invalid(
                "decision map",
                format!(
                    "not chromatic: {} ↦ {} changes color {} to {}",
                    v.name, w.name, v.color.0, w.color.0
                ),
            ));
        }
    }
    let input_simplices: Vec<Simplex> = task.input.simplices().cloned().collect();
    for tau in k.round.keys() {
        budget.charge(input_simplices.len() as u64, "carrier condition")?;
        let mut stable_names = k.complex.names(tau);
        stable_names.sort();
        let image_names: BTreeSet<String> = tau
            .iter()
            .map(|&v| delta.delta[&k.complex.vertex(v).name].clone())
            .collect();
        let image_names: Vec<String> = image_names.into_iter().collect();
        let image = task.output.ids_for(&image_names)?;
        if !task.output.contains_simplex(&image) {
            return Ok(GactVerdict::CarrierViolation {
                stable_names,
                input_names: Vec::new(),
                detail: format!("image {image_names:?} is not a simplex of the output"),
            });
        }
        let points = k
            .complex
            .coords_of(tau)
            .ok_or_else(|| Error::invalid("stable complex", "missing coordinates"))?;
        for sigma in &input_simplices {
            let verts = task
                .input
                .coords_of(sigma)
                .ok_or_else(|| Error::invalid("complex", "missing coordinates"))?;
            let mut inside = true;
            for point in &points {
                if !point_in_simplex(point, &verts)? {
                    inside = false;
                    break;
                }
            }
            if inside && !task.delta_contains(sigma, &image) {
                return Ok(GactVerdict::CarrierViolation {
                    stable_names,
                    input_names: task.input.names(sigma),
                    detail: format!("its image {image_names:?} is not in Δ there"),
                });
            }
        }
    }
    match admissible_check(t, model, depth, tail_period, budget)? {
        AdmissibleVerdict::Admissible { runs_checked, .. } => Ok(GactVerdict::Pass {
            depth,
            tail_period,
            runs_checked,
            stable_checked: k.round.len(),
        }),
        AdmissibleVerdict::NotAdmissible {
            run,
            input_names,
            detail,
        } => Ok(GactVerdict::NotAdmissible {
            run,
            input_names,
            detail,
        }),
    }
}

// ----------------------------------------------------------------------
// protocols from the criterion and back

/// Whether the named vertices span a simplex of the stable complex.
fn spans_stable(k: &ChromaticComplex, names: &[String]) -> bool {
    let ids: Option<Simplex> = names
        .iter()
        .map(|n| k.vertex_by_name(n).map(|v| v.id))
        .collect();
    ids.is_some_and(|ids| k.contains_simplex(&ids))
}

/// Builds the protocol a terminating subdivision induces. Each view of
/// the full tower is mapped to the process's state in the partial
/// subdivision: the state starts at the process's input vertex and,
/// each round, moves to the vertex the freshly seen states define —
/// unless the process has already frozen. A process freezes the first
/// round its state vertex belongs to a simplex that has stabilized by
/// then; from that round on its view decides the δ-image of the frozen
/// vertex, and the state never moves again.
pub fn protocol_from_gact(
    t: &TerminatingSubdivision,
    delta: &DecisionMapGACT,
    budget: &mut Budget,
) -> Result<Protocol> {
    let depth = t.depth();
    let k = t.stable();
    for v in k.complex.vertices() {
        if !delta.delta.contains_key(&v.name) {
            return Err(Error::invalid(
                "decision map",
                format!("δ undefined on stable vertex {:?}", v.name),
            ));
        }
    }
    let mut pi = Protocol::empty();
    if k.is_empty() {
        return Ok(pi);
    }
    // Earliest stabilization round of each stable vertex, taken over
    // every declared simplex it belongs to.
    let mut vertex_round: BTreeMap<String, usize> = BTreeMap::new();
    for (s, &round) in &k.round {
        for &v in s {
            let name = &k.complex.vertex(v).name;
            let e = vertex_round.entry(name.clone()).or_insert(round);
            *e = (*e).min(round);
        }
    }
    // Inverse of the carrier map, pooled over every level of the
    // partial tower: (color, names of the defining face) → vertex name.
    // The pool resolves the vertex a set of seen states moves a process
    // to even when the span was subdivided at an earlier level than the
    // current round — frozen processes lag behind, so their neighbours
    // meet old faces late. Persisted vertices carry their own
    // singleton, so a solo process resolves to where it already is.
    let partial = t.tower();
    let mut trans: BTreeMap<(Color, Vec<String>), String> = BTreeMap::new();
    for j in 0..=depth {
        let level = partial.level(j);
        let prev = if j == 0 { level } else { partial.level(j - 1) };
        for v in level.complex.vertices() {
            let mut face: Vec<String> = level.carriers[v.id as usize]
                .iter()
                .map(|&u| prev.complex.vertex(u).name.clone())
                .collect();
            face.sort();
            trans.insert((v.color, face), v.name.clone());
        }
    }
    // State of the process behind each full-tower view: the name of its
    // partial-tower vertex, and whether it has frozen there.
    let full = chr_iter_budgeted(t.base(), depth, budget)?;
    let mut states: Vec<Vec<(String, bool)>> = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        let level = full.level(j);
        budget.charge(level.complex.vertex_count() as u64, "protocol extraction")?;
        let mut q = Vec::with_capacity(level.complex.vertex_count());
        for v in level.complex.vertices() {
            let state = if j == 0 {
                let frozen = vertex_round.get(&v.name) == Some(&0);
                (v.name.clone(), frozen)
            } else {
                let members = &level.carriers[v.id as usize];
                let prev = &states[j - 1];
                let own = members
                    .iter()
                    .find(|&&u| full.level(j - 1).complex.vertex(u).color == v.color)
                    .ok_or_else(|| Error::invalid("tower", "carrier misses the vertex color"))?;
                let own_state = &prev[*own as usize];
                if own_state.1 {
                    own_state.clone()
                } else {
                    let mut seen: Vec<String> = members
                        .iter()
                        .map(|&u| prev[u as usize].0.clone())
                        .collect();
                    seen.sort();
                    seen.dedup();
                    let name = match trans.get(&(v.color, seen.clone())) {
                        Some(name) => name.clone(),
                        // The span the process sees was never subdivided:
                        // it must sit inside the stable complex, and the
                        // process stays on its own vertex of it.
                        None if spans_stable(&k.complex, &seen) => own_state.0.clone(),
                        None => {
                            return Err(Error::invalid(
                                "subdivision",
                                format!("no vertex for the states {:?} sees", v.name),
                            ));
                        }
                    };
                    let frozen = vertex_round.get(&name).is_some_and(|&r| r <= j);
                    (name, frozen)
                }
            };
            if state.1 {
                pi.define(j, v.name.clone(), delta.delta[&state.0].clone());
            }
            q.push(state);
        }
        states.push(q);
    }
    Ok(pi)
}

/// Rebuilds a terminating subdivision and decision map from a protocol:
/// `Σ_k` collects the level-`k` simplices all of whose vertices are
/// views the protocol has decided by round `k` in some enumerated run
/// of the model, and δ reads the decided values off the stable
/// vertices. Bounded by `depth` in both the run enumeration and the
/// materialized levels.
pub fn subdiv_from_protocol(
    pi: &Protocol,
    base: &ChromaticComplex,
    model: &Model,
    depth: usize,
    tail_period: usize,
    budget: &mut Budget,
) -> Result<(TerminatingSubdivision, DecisionMapGACT)> {
    let n = base
        .dim()
        .ok_or_else(|| Error::invalid("subdivision extraction", "empty base complex"))?;
    if model.n() != n {
        return Err(Error::invalid(
            "subdivision extraction",
            format!("model universe n = {} but the base has n = {n}", model.n()),
        ));
    }
    let runs = enumerate_model_runs(model, n, depth, tail_period, budget)?;
    let tops = base.tops();
    // Reachable decided views: name → (first defined round, value).
    let mut decided: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for r in &runs {
        for omega in &tops {
            let round0 = input_assignment(base, omega);
            let table = view_name_rounds(r, depth, &round0, budget)?;
            for (k, names) in table.iter().enumerate() {
                for name in names.values() {
                    let Some(value) = pi.decide(k, name) else { continue };
                    match decided.get_mut(name) {
                        None => {
                            decided.insert(name.clone(), (k, value.to_string()));
                        }
                        Some((round, prev)) => {
                            if prev != value {
                                return Err(Error::invalid(
                                    "protocol",
                                    format!(
                                        "inconsistent outputs for view {name:?}: \
                                         {prev:?} and {value:?}"
                                    ),
                                ));
                            }
                            if k < *round {
                                *round = k;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut tower = Tower::new(base.clone())?;
    let mut sigmas: Vec<BTreeSet<Simplex>> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let complex = &tower.level(k).complex;
        budget.charge(complex.simplices().count() as u64, "subdivision extraction")?;
        let sigma: BTreeSet<Simplex> = complex
            .simplices()
            .filter(|s| {
                s.iter().all(|&v| {
                    decided
                        .get(&complex.vertex(v).name)
                        .is_some_and(|(round, _)| *round <= k)
                })
            })
            .cloned()
            .collect();
        sigmas.push(sigma);
        if k < depth {
            let sigma = sigmas[k].clone();
            tower.subdivide_partial(&sigma)?;
        }
    }
    let stable = assemble_stable(&tower, &sigmas)?;
    let mut delta = BTreeMap::new();
    for v in stable.complex.vertices() {
        let (_, value) = decided
            .get(&v.name)
            .expect("stable vertices are decided views");
        delta.insert(v.name.clone(), value.clone());
    }
    Ok((
        TerminatingSubdivision {
            tower,
            sigmas,
            stable,
        },
        DecisionMapGACT { delta },
    ))
}
