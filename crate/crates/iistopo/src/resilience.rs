//! The t-resilient worked example, end to end.
//!
//! The task `L_t` (all of `Chr² s` away from the `(n−t−1)`-skeleton) is
//! solvable against the t-resilient model, and the proof is a concrete
//! terminating subdivision: regions `R_0, R_1, R_2, …` peel the simplex
//! away from the skeleton level by level ([`regions`]), the schedule
//! stabilizes exactly the deep simplices from level 2 on
//! ([`build_res_subdivision`]), and the decision map fixes `R_0`
//! pointwise while pushing everything else onto the boundary
//! `R_0 ∩ R_1` — found by backtracking search ([`delta_search`]) with
//! radial projection away from the skeleton ([`radial_heuristic`]) as
//! the candidate-ordering heuristic. The search result is verified
//! independently by the criterion checker; the heuristic is never a
//! correctness authority.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::complex::{ChromaticComplex, Simplex, VertexId};
use crate::geometry::{normalized_volume, Rat};
use crate::subdivision::{chr_iter_budgeted, Tower};
use crate::tasks::TaskSpec;
use crate::terminating::{
    ensure_same_complex, materialize, DecisionMapGACT, Schedule, TerminatingSubdivision,
};
use crate::{Budget, Error, Result};

// ----------------------------------------------------------------------
// regions

/// The region decomposition of `|s|` away from the `(n−t−1)`-skeleton:
/// `R_j` is a set of top simplices of `Chr^{j+2} s` (faces implied),
/// `R_0` is the carrier of `L_t`, and each later `R_j` is the closure
/// of what level `j+2` reaches beyond level `j+1`. Regions have
/// pairwise-disjoint interiors and their union exhausts everything the
/// deepest level reaches.
#[derive(Debug, Clone)]
pub struct RegionDecomposition {
    n: usize,
    t: usize,
    tower: Tower,
    /// `regions[j]` = the top simplices of `R_j`, in level-`(j+2)` ids.
    regions: Vec<Vec<Simplex>>,
}

impl RegionDecomposition {
    /// The universe bound (processes `0 ..= n`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// The resilience parameter.
    pub fn t(&self) -> usize {
        self.t
    }

    /// The largest region index `j_max`.
    pub fn depth(&self) -> usize {
        self.regions.len() - 1
    }

    /// The tower of `Chr^k s`, `0 ≤ k ≤ j_max + 2`.
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// The subdivision level that `R_j` lives in.
    pub fn level_of(&self, j: usize) -> usize {
        j + 2
    }

    /// The top simplices of `R_j`, in level-`(j+2)` ids.
    pub fn region(&self, j: usize) -> &[Simplex] {
        &self.regions[j]
    }

    /// The exact total volume of `R_j`.
    pub fn volume(&self, j: usize) -> Result<Rat> {
        region_volume(
            &self.tower.level(self.level_of(j)).complex,
            &self.regions[j],
        )
    }
}

fn region_volume(complex: &ChromaticComplex, tops: &[Simplex]) -> Result<Rat> {
    let mut sum = Rat::zero();
    for top in tops {
        let coords = complex
            .coords_of(top)
            .ok_or_else(|| Error::invalid("region", "missing coordinates"))?;
        sum += normalized_volume(&coords)?;
    }
    Ok(sum)
}

/// Computes `R_0 ..= R_{j_max}` for the `(n, t)` skeleton. `R̃_j` is
/// read off level `j+2` by the carrier-dimension filter (every vertex
/// strictly off the `(n−t−1)`-skeleton); `R_j` keeps the tops of `R̃_j`
/// whose level-`(j+1)` carrier is not already in `R̃_{j−1}`. The
/// construction verifies exhaustion exactly: the region volumes up to
/// `j` must sum to the volume of `R̃_j`.
pub fn regions(n: usize, t: usize, j_max: usize, budget: &mut Budget) -> Result<RegionDecomposition> {
    if t > n {
        return Err(Error::invalid(
            "regions",
            format!("t = {t} exceeds n = {n}"),
        ));
    }
    let top_level = j_max + 2;
    let tower = chr_iter_budgeted(&ChromaticComplex::standard_simplex(n), top_level, budget)?;
    // Per level, which vertices sit strictly off the skeleton.
    let mut deep: Vec<Vec<bool>> = Vec::with_capacity(top_level + 1);
    for k in 0..=top_level {
        let complex = &tower.level(k).complex;
        let mut flags = vec![false; complex.vertex_count()];
        for v in complex.vertices() {
            flags[v.id as usize] = tower.carrier_dim_in_base(k, v.id)? >= n - t;
        }
        deep.push(flags);
    }
    let mut regions = Vec::with_capacity(j_max + 1);
    let mut covered = Rat::zero();
    for j in 0..=j_max {
        let level = j + 2;
        let complex = &tower.level(level).complex;
        let tops = complex.tops();
        budget.charge(tops.len() as u64, "regions")?;
        let mut r_tilde_vol = Rat::zero();
        let mut region: Vec<Simplex> = Vec::new();
        for top in tops {
            if !top.iter().all(|&v| deep[level][v as usize]) {
                continue;
            }
            let coords = complex
                .coords_of(&top)
                .ok_or_else(|| Error::invalid("region", "missing coordinates"))?;
            r_tilde_vol += normalized_volume(&coords)?;
            let new = if j == 0 {
                true
            } else {
                let carrier = tower.carrier_of(level, &top, level - 1)?;
                !carrier.iter().all(|&v| deep[level - 1][v as usize])
            };
            if new {
                region.push(top);
            }
        }
        covered += region_volume(complex, &region)?;
        if covered != r_tilde_vol {
            return Err(Error::invalid(
                "regions",
                format!(
                    "R_0 ∪ … ∪ R_{j} does not exhaust level {level} away from the \
                     skeleton: covered {covered} of {r_tilde_vol}"
                ),
            ));
        }
        regions.push(region);
    }
    Ok(RegionDecomposition {
        n,
        t,
        tower,
        regions,
    })
}

// ----------------------------------------------------------------------
// the schedule

/// Materializes the t-resilient terminating subdivision down to level
/// `depth ≥ 2`: nothing stabilizes before level 2, and from level 2 on
/// every simplex strictly off the `(n−t−1)`-skeleton is stable — so the
/// stable simplices appearing at level `j+2` fill exactly the region
/// `R_j`.
pub fn build_res_subdivision(
    n: usize,
    t: usize,
    depth: usize,
    budget: &mut Budget,
) -> Result<TerminatingSubdivision> {
    if t > n {
        return Err(Error::invalid(
            "resilient subdivision",
            format!("t = {t} exceeds n = {n}"),
        ));
    }
    if depth < 2 {
        return Err(Error::invalid(
            "resilient subdivision",
            format!("needs depth ≥ 2, got {depth}"),
        ));
    }
    materialize(
        &ChromaticComplex::standard_simplex(n),
        &Schedule::CarrierDimAtLeast {
            min_dim: n - t,
            from_level: 2,
        },
        depth,
        budget,
    )
}

// ----------------------------------------------------------------------
// radial projection

/// The data the radial heuristic projects onto: the excluded corners
/// (ray origins) and the polygonal boundary between the stable level-2
/// region and the rest — the stable level-2 edges that border an
/// unstable triangle.
#[derive(Debug, Clone)]
pub struct RadialBoundary {
    corners: Vec<Vec<Rat>>,
    segments: Vec<[Vec<Rat>; 2]>,
}

impl RadialBoundary {
    /// Reads the boundary off a materialized terminating subdivision
    /// with a 2-dimensional base (the `n = 2, t = 1` picture).
    pub fn from_subdivision(t: &TerminatingSubdivision) -> Result<RadialBoundary> {
        let base = t.base();
        if base.dim() != Some(2) {
            return Err(Error::invalid(
                "radial boundary",
                "the projection picture needs a 2-dimensional base".to_string(),
            ));
        }
        let stable = &t.stable().complex;
        let corners: Vec<Vec<Rat>> = base
            .vertices()
            .filter(|v| stable.vertex_by_name(&v.name).is_none())
            .map(|v| {
                v.coords
                    .clone()
                    .ok_or_else(|| Error::invalid("radial boundary", "missing coordinates"))
            })
            .collect::<Result<_>>()?;
        let level2 = &t.tower().level(2).complex;
        let is_stable = |id: VertexId| stable.vertex_by_name(&level2.vertex(id).name).is_some();
        let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
        let mut segments = Vec::new();
        for top in level2.tops() {
            if top.iter().all(|&v| is_stable(v)) {
                continue;
            }
            for (i, &a) in top.iter().enumerate() {
                for &b in &top[i + 1..] {
                    if !is_stable(a) || !is_stable(b) {
                        continue;
                    }
                    let mut names = level2.names(&[a, b]);
                    names.sort();
                    if !seen.insert(names) {
                        continue;
                    }
                    let pa = level2.vertex(a).coords.clone();
                    let pb = level2.vertex(b).coords.clone();
                    match (pa, pb) {
                        (Some(pa), Some(pb)) => segments.push([pa, pb]),
                        _ => {
                            return Err(Error::invalid(
                                "radial boundary",
                                "missing coordinates".to_string(),
                            ))
                        }
                    }
                }
            }
        }
        Ok(RadialBoundary { corners, segments })
    }

    /// The number of boundary segments.
    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }
}

fn sq_dist(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .sum()
}

/// Projects `point` onto the stable boundary along the ray from the
/// nearest excluded corner: the exact rational intersection of the ray
/// with the nearest boundary segment it crosses. A point already on the
/// boundary projects to itself. Errors when the point is a corner (the
/// ray is undefined) or the ray misses every segment.
///
/// This is an ordering heuristic for [`delta_search`], not a
/// correctness authority: verification never consults it.
pub fn radial_heuristic(point: &[Rat], boundary: &RadialBoundary) -> Result<Vec<Rat>> {
    let dim = point.len();
    if dim < 3
        || point.iter().sum::<Rat>() != Rat::one()
        || point.iter().any(|c| c < &Rat::zero())
    {
        return Err(Error::invalid(
            "radial heuristic",
            format!("not a barycentric point of the base: {point:?}"),
        ));
    }
    if boundary.corners.iter().any(|c| c.as_slice() == point) {
        return Err(Error::invalid(
            "radial heuristic",
            "the ray is undefined at an excluded corner".to_string(),
        ));
    }
    let corner = boundary
        .corners
        .iter()
        .min_by_key(|c| sq_dist(c, point))
        .ok_or_else(|| {
            Error::invalid("radial heuristic", "no excluded corners".to_string())
        })?;
    // Solve ray ∩ segment in the affine chart (coordinates 1 and 2):
    // corner + s·(point − corner) = a + u·(b − a), s > 0, 0 ≤ u ≤ 1.
    let chart = |p: &[Rat]| (p[1].clone(), p[2].clone());
    let cross = |x: &(Rat, Rat), y: &(Rat, Rat)| &x.0 * &y.1 - &x.1 * &y.0;
    let (cx, cy) = chart(corner);
    let (px, py) = chart(point);
    let d = (&px - &cx, &py - &cy);
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    for [a, b] in &boundary.segments {
        let (ax, ay) = chart(a);
        let (bx, by) = chart(b);
        let e = (&bx - &ax, &by - &ay);
        let det = cross(&d, &e);
        if det.is_zero() {
            continue;
        }
        let f = (&ax - &cx, &ay - &cy);
        let s = cross(&f, &e) / &det;
        let u = cross(&f, &d) / &det;
        if s <= Rat::zero() || u < Rat::zero() || u > Rat::one() {
            continue;
        }
        if best.as_ref().is_none_or(|(bs, _)| &s < bs) {
            let q: Vec<Rat> = corner
                .iter()
                .zip(point)
                .map(|(c, p)| c + &s * (p - c))
                .collect();
            best = Some((s, q));
        }
    }
    best.map(|(_, q)| q).ok_or_else(|| {
        Error::invalid(
            "radial heuristic",
            format!("the ray through {point:?} misses the boundary"),
        )
    })
}

// ----------------------------------------------------------------------
// the decision-map search

/// Outcome of [`delta_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaOutcome {
    /// A chromatic, simplicial, carrier-respecting decision map.
    Found(DecisionMapGACT),
    /// The search space is exhausted; no map extends the identity.
    Exhausted {
        /// The stable simplex (by vertex names) that rejected the last
        /// candidate — the first unsatisfiable constraint encountered.
        stable_names: Vec<String>,
    },
}

impl DeltaOutcome {
    /// Whether a map was found.
    pub fn is_found(&self) -> bool {
        matches!(self, DeltaOutcome::Found(_))
    }
}

impl fmt::Display for DeltaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaOutcome::Found(map) => {
                write!(f, "decision map found on {} stable vertices", map.delta.len())
            }
            DeltaOutcome::Exhausted { stable_names } => write!(
                f,
                "search exhausted: no assignment satisfies stable simplex {stable_names:?}"
            ),
        }
    }
}

struct DeltaConstraint {
    /// Stable-complex vertex ids of the simplex.
    members: Simplex,
    /// Top simplices of `Δ(min face)`, in output ids.
    image_tops: Vec<Simplex>,
}

/// Searches for a decision map `δ` on the stable complex of `t` into
/// the task's output: the identity on every stable vertex whose name is
/// an output vertex (in the worked example, all of `R_0` — the output
/// complex itself), and backtracking over color-matching output
/// vertices for the rest, constrained so that every stable simplex maps
/// into `Δ` of the smallest base face containing it. Candidates are
/// tried nearest-first to the vertex's radial projection onto the
/// stable boundary.
pub fn delta_search(
    t: &TerminatingSubdivision,
    task: &TaskSpec,
    budget: &mut Budget,
) -> Result<DeltaOutcome> {
    ensure_same_complex(t.base(), &task.input, "delta search")?;
    let stable = t.stable();
    let vertex_count = stable.complex.vertex_count();
    // Input corner id per coordinate axis.
    let n = t
        .base()
        .dim()
        .ok_or_else(|| Error::invalid("delta search", "empty base complex"))?;
    let mut corner_ids = vec![u32::MAX; n + 1];
    for v in task.input.vertices() {
        let coords = v
            .coords
            .as_deref()
            .ok_or_else(|| Error::invalid("delta search", "missing input coordinates"))?;
        let support: Vec<usize> = (0..coords.len()).filter(|&i| !coords[i].is_zero()).collect();
        if let [axis] = support[..] {
            corner_ids[axis] = v.id;
        }
    }
    if corner_ids.iter().any(|&id| id == u32::MAX) {
        return Err(Error::invalid(
            "delta search",
            "the input complex is not a coordinate simplex".to_string(),
        ));
    }
    // The smallest base face containing a stable vertex, as input ids.
    let support_face = |coords: &[Rat]| -> Simplex {
        (0..coords.len())
            .filter(|&i| !coords[i].is_zero())
            .map(|i| corner_ids[i])
            .collect()
    };
    // Seed the identity wherever the output shares a vertex name; every
    // round-2 stable vertex (the output complex itself) must be shared.
    let mut assign: Vec<Option<VertexId>> = vec![None; vertex_count];
    let mut vertex_round = vec![usize::MAX; vertex_count];
    for (s, &round) in &stable.round {
        if let [v] = s[..] {
            vertex_round[v as usize] = round;
        }
    }
    for v in stable.complex.vertices() {
        match task.output.vertex_by_name(&v.name) {
            Some(w) => {
                if w.color != v.color {
                    return Err(Error::invalid(
                        "delta search",
                        format!("output vertex {:?} has a different color", v.name),
                    ));
                }
                assign[v.id as usize] = Some(w.id);
            }
            None if vertex_round[v.id as usize] == 2 => {
                return Err(Error::invalid(
                    "delta search",
                    format!("the output complex lacks the region-0 vertex {:?}", v.name),
                ));
            }
            None => {}
        }
    }
    // One constraint per stable simplex: its image must fit in Δ of the
    // smallest base face containing it.
    let mut constraints: Vec<DeltaConstraint> = Vec::with_capacity(stable.round.len());
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for s in stable.round.keys() {
        let mut face: BTreeSet<VertexId> = BTreeSet::new();
        for &v in s {
            let coords = stable.complex.vertex(v).coords.as_deref().ok_or_else(|| {
                Error::invalid("delta search", "missing stable coordinates")
            })?;
            face.extend(support_face(coords));
        }
        let face: Simplex = face.into_iter().collect();
        let image_tops = task.delta_of(&face).to_vec();
        if image_tops.is_empty() {
            let mut names = stable.complex.names(s);
            names.sort();
            return Ok(DeltaOutcome::Exhausted {
                stable_names: names,
            });
        }
        let index = constraints.len();
        for &v in s {
            by_vertex[v as usize].push(index);
        }
        constraints.push(DeltaConstraint {
            members: s.clone(),
            image_tops,
        });
    }
    let feasible = |assign: &[Option<VertexId>], constraint: &DeltaConstraint| -> bool {
        let mut probe: Vec<VertexId> = constraint
            .members
            .iter()
            .filter_map(|&v| assign[v as usize])
            .collect();
        probe.sort_unstable();
        probe.dedup();
        constraint
            .image_tops
            .iter()
            .any(|top| probe.iter().all(|v| top.binary_search(v).is_ok()))
    };
    // Reject a seeded contradiction before searching.
    for constraint in &constraints {
        if constraint
            .members
            .iter()
            .all(|&v| assign[v as usize].is_some())
            && !feasible(&assign, constraint)
        {
            let mut names = stable.complex.names(&constraint.members);
            names.sort();
            return Ok(DeltaOutcome::Exhausted {
                stable_names: names,
            });
        }
    }
    // Unassigned vertices become search variables. Candidates are tried
    // nearest-first to the vertex's radial projection onto the stable
    // boundary; the search forward-checks explicit candidate domains and
    // always branches on a smallest remaining domain.
    let vars: Vec<VertexId> = (0..vertex_count as u32)
        .filter(|&v| assign[v as usize].is_none())
        .collect();
    let boundary = if vars.is_empty() {
        None
    } else {
        Some(RadialBoundary::from_subdivision(t)?)
    };
    let mut var_of = vec![usize::MAX; vertex_count];
    let mut domains: Vec<Vec<VertexId>> = Vec::with_capacity(vars.len());
    for (j, &v) in vars.iter().enumerate() {
        var_of[v as usize] = j;
        let vert = stable.complex.vertex(v);
        let mut pool: Vec<VertexId> = task
            .output
            .vertices()
            .filter(|w| w.color == vert.color)
            .map(|w| w.id)
            .collect();
        let target = boundary.as_ref().and_then(|b| {
            radial_heuristic(vert.coords.as_deref().unwrap_or_default(), b).ok()
        });
        if let Some(q) = target {
            pool.sort_by_key(|&w| {
                let coords = task.output.vertex(w).coords.as_deref().unwrap_or_default();
                (sq_dist(coords, &q), w)
            });
        }
        domains.push(pool);
    }
    // Candidate liveness per domain slot, with a trail of removals so
    // backtracking can restore them.
    let mut active: Vec<Vec<bool>> = domains.iter().map(|d| vec![true; d.len()]).collect();
    let mut live_count: Vec<usize> = domains.iter().map(Vec::len).collect();
    let mut trail: Vec<(usize, usize)> = Vec::new();

    /// Filters the domains of `constraints[ci]`'s unassigned members down
    /// to candidates compatible with its assigned members, trailing every
    /// removal. False on a wiped-out domain or an already-broken image.
    fn revise(
        ci: usize,
        constraints: &[DeltaConstraint],
        assign: &[Option<VertexId>],
        var_of: &[usize],
        domains: &[Vec<VertexId>],
        active: &mut [Vec<bool>],
        live_count: &mut [usize],
        trail: &mut Vec<(usize, usize)>,
    ) -> bool {
        let c = &constraints[ci];
        let mut probe: Vec<VertexId> = c
            .members
            .iter()
            .filter_map(|&v| assign[v as usize])
            .collect();
        probe.sort_unstable();
        let live: Vec<&Simplex> = c
            .image_tops
            .iter()
            .filter(|top| probe.iter().all(|v| top.binary_search(v).is_ok()))
            .collect();
        if live.is_empty() {
            return false;
        }
        for &u in &c.members {
            let j = var_of[u as usize];
            if j == usize::MAX || assign[u as usize].is_some() {
                continue;
            }
            for idx in 0..domains[j].len() {
                if !active[j][idx] {
                    continue;
                }
                let w = domains[j][idx];
                if !live.iter().any(|top| top.binary_search(&w).is_ok()) {
                    active[j][idx] = false;
                    live_count[j] -= 1;
                    trail.push((j, idx));
                }
            }
            if live_count[j] == 0 {
                return false;
            }
        }
        true
    }

    // Prune every domain against the seeded assignments up front.
    for ci in 0..constraints.len() {
        if !revise(
            ci,
            &constraints,
            &assign,
            &var_of,
            &domains,
            &mut active,
            &mut live_count,
            &mut trail,
        ) {
            let mut names = stable.complex.names(&constraints[ci].members);
            names.sort();
            return Ok(DeltaOutcome::Exhausted {
                stable_names: names,
            });
        }
    }

    struct Decision {
        var: usize,
        value_idx: usize,
        mark: usize,
    }
    let mut stack: Vec<Decision> = Vec::new();
    let mut wipeout: Option<usize> = None;
    let mut assigned_vars = 0usize;
    'search: while assigned_vars < vars.len() {
        let mut var = (0..vars.len())
            .filter(|&j| assign[vars[j] as usize].is_none())
            .min_by_key(|&j| (live_count[j], j))
            .expect("an unassigned variable remains");
        let mut next_idx = 0usize;
        loop {
            let found = (next_idx..domains[var].len()).find(|&idx| active[var][idx]);
            match found {
                Some(idx) => {
                    budget.charge(1, "delta search")?;
                    let mark = trail.len();
                    assign[vars[var] as usize] = Some(domains[var][idx]);
                    let broken = by_vertex[vars[var] as usize].iter().copied().find(|&ci| {
                        !revise(
                            ci,
                            &constraints,
                            &assign,
                            &var_of,
                            &domains,
                            &mut active,
                            &mut live_count,
                            &mut trail,
                        )
                    });
                    match broken {
                        None => {
                            stack.push(Decision {
                                var,
                                value_idx: idx,
                                mark,
                            });
                            assigned_vars += 1;
                            continue 'search;
                        }
                        Some(ci) => {
                            wipeout = Some(ci);
                            while trail.len() > mark {
                                let (j, k) = trail.pop().expect("trail underflow");
                                active[j][k] = true;
                                live_count[j] += 1;
                            }
                            assign[vars[var] as usize] = None;
                            next_idx = idx + 1;
                        }
                    }
                }
                None => match stack.pop() {
                    Some(d) => {
                        while trail.len() > d.mark {
                            let (j, k) = trail.pop().expect("trail underflow");
                            active[j][k] = true;
                            live_count[j] += 1;
                        }
                        assign[vars[d.var] as usize] = None;
                        assigned_vars -= 1;
                        var = d.var;
                        next_idx = d.value_idx + 1;
                    }
                    None => {
                        let witness = wipeout.map(|ci| &constraints[ci].members);
                        let mut names = witness
                            .map(|s| stable.complex.names(s))
                            .unwrap_or_default();
                        names.sort();
                        return Ok(DeltaOutcome::Exhausted {
                            stable_names: names,
                        });
                    }
                },
            }
        }
    }
    let mut delta = BTreeMap::new();
    for v in stable.complex.vertices() {
        let w = assign[v.id as usize].expect("search assigned every vertex");
        delta.insert(v.name.clone(), task.output.vertex(w).name.clone());
    }
    Ok(DeltaOutcome::Found(DecisionMapGACT { delta }))
}
