//! The standard chromatic subdivision `Chr` and its iterates.
//!
//! For a chromatic complex C, the subdivision Chr C has one vertex (i, t)
//! for every simplex t of C and color i of t, except that (i, {w}) is
//! identified with w itself — subdividing cannot move a vertex.
//! A tuple of such pairs, one per color of a base simplex τ, spans a top
//! simplex of Chr τ exactly when
//!
//! * (a) the carriers t_i are pairwise face-comparable, and
//! * (b) j ∈ χ(t_i) implies t_j ⊆ t_i.
//!
//! Geometrically, the new vertex (i, t) sits at
//! `1/(2k−1) · w_i + 2/(2k−1) · Σ_{w ∈ t, w ≠ w_i} w` where k = |t| and
//! `w_i` is t's vertex of color i; every coordinate stays an exact
//! rational.
//!
//! [`Tower`] keeps the whole stack of levels with per-vertex carriers, so
//! carriers can be chased down to the base; [`Tower::subdivide_partial`]
//! subdivides while leaving a declared *stable* set of simplices intact
//! (identifying (i, t) with t's color-i vertex whenever t is stable),
//! which is the engine behind terminating subdivisions.

use crate::complex::{
    is_subset, nonempty_subsets_of, ChromaticComplex, Color, Simplex, VertexId,
};
use crate::geometry::{self, Rat};
use crate::{Budget, Error, Result};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One level of a subdivision tower.
#[derive(Debug, Clone)]
pub struct SubdivisionLevel {
    /// Position in the tower; level 0 is the base complex.
    pub level: usize,
    /// The complex at this level.
    pub complex: ChromaticComplex,
    /// For each vertex (by id), the simplex of the *previous* level in
    /// whose relative interior it lies. Vertices that persist from the
    /// previous level carry their own singleton. At level 0, identity
    /// singletons.
    pub carriers: Vec<Simplex>,
    /// The stable set declared on the previous level when this level was
    /// built (empty for a full subdivision step and at level 0).
    pub stable_declared: BTreeSet<Simplex>,
}

/// A stack of complexes, each subdividing the one below.
#[derive(Debug, Clone)]
pub struct Tower {
    levels: Vec<SubdivisionLevel>,
}

impl Tower {
    /// A tower consisting of just the base complex.
    pub fn new(base: ChromaticComplex) -> Result<Self> {
        for v in base.vertices() {
            if !name_is_clean_or_derived(&v.name) {
                return Err(Error::invalid(
                    "complex",
                    format!("vertex name {:?} contains reserved characters", v.name),
                ));
            }
        }
        let carriers = (0..base.vertex_count() as VertexId).map(|id| vec![id]).collect();
        Ok(Tower {
            levels: vec![SubdivisionLevel {
                level: 0,
                complex: base,
                carriers,
                stable_declared: BTreeSet::new(),
            }],
        })
    }

    /// Number of subdivision steps applied (the index of the top level).
    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, m: usize) -> &SubdivisionLevel {
        &self.levels[m]
    }

    pub fn top(&self) -> &SubdivisionLevel {
        self.levels.last().expect("towers are never empty")
    }

    pub fn base(&self) -> &ChromaticComplex {
        &self.levels[0].complex
    }

    /// Apply one full chromatic subdivision step to the top level.
    pub fn subdivide(&mut self) -> Result<&SubdivisionLevel> {
        self.subdivide_partial(&BTreeSet::new())
    }

    /// Apply one subdivision step that keeps every simplex in `stable`
    /// (a downward-closed family of simplices of the current top level)
    /// un-subdivided: wherever the construction would create (i, t) with t
    /// stable, the existing color-i vertex of t is used instead.
    pub fn subdivide_partial(&mut self, stable: &BTreeSet<Simplex>) -> Result<&SubdivisionLevel> {
        let prev = &self.top().complex;
        for s in stable {
            if !prev.contains_simplex(s) {
                return Err(Error::invalid(
                    "stable set",
                    format!("simplex {s:?} is not in the complex"),
                ));
            }
            for facet in nonempty_subsets_of(s) {
                if !stable.contains(&facet) {
                    return Err(Error::invalid(
                        "stable set",
                        format!("not downward-closed: {s:?} lacks face {facet:?}"),
                    ));
                }
            }
        }
        let (complex, carriers) = chr_quotient(prev, stable)?;
        let level = self.levels.len();
        self.levels.push(SubdivisionLevel {
            level,
            complex,
            carriers,
            stable_declared: stable.clone(),
        });
        Ok(self.top())
    }

    /// The carrier of a level-`m` simplex at level `target` ≤ m: the
    /// minimal simplex of the target level whose realization contains it,
    /// computed by chasing per-vertex carriers downward and uniting.
    pub fn carrier_of(&self, m: usize, simplex: &[VertexId], target: usize) -> Result<Simplex> {
        if m > self.height() || target > m {
            return Err(Error::invalid(
                "carrier query",
                format!("levels {target} ≤ {m} ≤ {} violated", self.height()),
            ));
        }
        let mut cur: BTreeSet<VertexId> = simplex.iter().copied().collect();
        for lvl in ((target + 1)..=m).rev() {
            let carriers = &self.levels[lvl].carriers;
            let mut next = BTreeSet::new();
            for v in cur {
                let c = carriers.get(v as usize).ok_or_else(|| {
                    Error::invalid("carrier query", format!("vertex {v} not at level {lvl}"))
                })?;
                next.extend(c.iter().copied());
            }
            cur = next;
        }
        Ok(cur.into_iter().collect())
    }

    /// Dimension of the base-level carrier of a vertex.
    pub fn carrier_dim_in_base(&self, m: usize, vertex: VertexId) -> Result<usize> {
        Ok(self.carrier_of(m, &[vertex], 0)?.len() - 1)
    }
}

/// One full chromatic subdivision of a complex.
pub fn chr(c: &ChromaticComplex) -> Result<ChromaticComplex> {
    let mut tower = Tower::new(c.clone())?;
    tower.subdivide()?;
    Ok(tower.top().complex.clone())
}

/// The m-fold iterated chromatic subdivision, with every intermediate
/// level retained. `chr_iter(c, 0)` is the base tower. The budget caps the
/// total number of simplices materialized.
pub fn chr_iter_budgeted(c: &ChromaticComplex, m: usize, budget: &mut Budget) -> Result<Tower> {
    let mut tower = Tower::new(c.clone())?;
    budget.charge(tower.base().simplex_count() as u64, "chr_iter")?;
    for _ in 0..m {
        let level = tower.subdivide()?;
        budget.charge(level.complex.simplex_count() as u64, "chr_iter")?;
    }
    Ok(tower)
}

/// [`chr_iter_budgeted`] with the default budget.
pub fn chr_iter(c: &ChromaticComplex, m: usize) -> Result<Tower> {
    chr_iter_budgeted(c, m, &mut Budget::default())
}

/// The coordinate formula for a subdivision vertex of color `color` whose
/// carrier has the given members (color and coordinates): own corner
/// weighted 1/(2k−1), every other corner 2/(2k−1), k the carrier size.
pub fn chromatic_coords(color: Color, members: &[(Color, &[Rat])]) -> Vec<Rat> {
    let k = members.len() as i64;
    let own = geometry::rat(1, 2 * k - 1);
    let other = geometry::rat(2, 2 * k - 1);
    let dim = members[0].1.len();
    let mut acc = vec![Rat::zero(); dim];
    let mut saw_own = false;
    for (c, coords) in members {
        let w = if *c == color {
            saw_own = true;
            &own
        } else {
            &other
        };
        for (a, x) in acc.iter_mut().zip(coords.iter()) {
            *a += w * x;
        }
    }
    assert!(saw_own, "color {color} not among carrier members");
    acc
}

/// Counts and the geometric checksum of a complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stats {
    pub vertex_count: usize,
    /// simplex counts by dimension (index = dimension)
    pub by_dim: Vec<usize>,
    pub top_count: usize,
    /// Exact total normalized volume of the top simplices, when the
    /// complex is geometric and every top simplex is full-dimensional.
    pub volume_sum: Option<Rat>,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices; by dim {:?}; {} tops",
            self.vertex_count, self.by_dim, self.top_count
        )?;
        if let Some(v) = &self.volume_sum {
            write!(f, "; total volume {}", geometry::format_rat(v))?;
        }
        Ok(())
    }
}

/// Vertex/simplex counts plus the exact volume checksum.
pub fn subdivision_stats(c: &ChromaticComplex) -> Stats {
    let tops = c.tops();
    let volume_sum = (|| {
        let mut sum = Rat::zero();
        for t in &tops {
            let coords = c.coords_of(t)?;
            if coords.iter().any(|p| p.len() != t.len()) {
                return None;
            }
            sum += geometry::normalized_volume(&coords).ok()?;
        }
        Some(sum)
    })();
    Stats {
        vertex_count: c.vertex_count(),
        by_dim: c.count_by_dim(),
        top_count: tops.len(),
        volume_sum,
    }
}

// ----------------------------------------------------------------------
// construction internals

/// Canonical name of a derived subdivision vertex from its color index
/// and the names of its carrier members, already sorted by color: joined
/// with ',' while member names are base names and '/' once nesting
/// appears.
pub(crate) fn compose_derived_name(color: u32, member_names: &[&str]) -> String {
    let sep = if member_names.iter().any(|n| n.contains('@')) {
        "/"
    } else {
        ","
    };
    format!("c{color}@[{}]", member_names.join(sep))
}

/// Canonical name of the subdivision vertex (color, t), where t is a
/// non-singleton simplex of `prev`.
pub(crate) fn derived_name(prev: &ChromaticComplex, color: Color, t: &Simplex) -> String {
    let mut members: Vec<_> = t.iter().map(|&id| prev.vertex(id)).collect();
    members.sort_by_key(|v| v.color);
    let names: Vec<&str> = members.iter().map(|v| v.name.as_str()).collect();
    compose_derived_name(color.0, &names)
}

/// Accept names that either avoid all structural characters or are
/// themselves well-formed derived names, so generated names can never
/// collide.
pub(crate) fn name_is_clean_or_derived(name: &str) -> bool {
    fn is_clean(s: &str) -> bool {
        !s.contains(['@', '[', ']', ',', '/'])
    }
    fn is_derived(s: &str) -> bool {
        let Some(rest) = s.strip_prefix('c') else {
            return false;
        };
        let Some(at) = rest.find('@') else {
            return false;
        };
        let (digits, bracketed) = rest.split_at(at);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
        let Some(inner) = bracketed
            .strip_prefix("@[")
            .and_then(|b| b.strip_suffix(']'))
        else {
            return false;
        };
        // split at depth-0 separators
        let mut depth = 0usize;
        let mut start = 0usize;
        let mut members = Vec::new();
        for (i, ch) in inner.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => {
                    if depth == 0 {
                        return false;
                    }
                    depth -= 1;
                }
                ',' | '/' if depth == 0 => {
                    members.push(&inner[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return false;
        }
        members.push(&inner[start..]);
        !members.is_empty() && members.iter().all(|m| is_clean(m) || is_derived(m))
    }
    is_clean(name) || is_derived(name)
}

/// Core construction: one chromatic subdivision step with a stable set
/// quotient. Returns the new complex and the carrier simplex (in `prev`)
/// of each new vertex.
fn chr_quotient(
    prev: &ChromaticComplex,
    stable: &BTreeSet<Simplex>,
) -> Result<(ChromaticComplex, Vec<Simplex>)> {
    for v in prev.vertices() {
        if !name_is_clean_or_derived(&v.name) {
            return Err(Error::invalid(
                "complex",
                format!("vertex name {:?} contains reserved characters", v.name),
            ));
        }
    }
    let mut next = ChromaticComplex::new();
    let mut carriers: Vec<Simplex> = Vec::new();
    // (color, carrier simplex) -> id in `next`
    let mut vertex_cache: BTreeMap<(Color, Simplex), VertexId> = BTreeMap::new();
    let mut new_tops: BTreeSet<Simplex> = BTreeSet::new();

    for tau in prev.tops() {
        // all subdivision vertices living over faces of tau, per color
        let faces = nonempty_subsets_of(&tau);
        let colors: Vec<Color> = prev.chi(&tau).into_iter().collect();
        let mut candidates: BTreeMap<Color, Vec<&Simplex>> = BTreeMap::new();
        for face in &faces {
            for c in prev.chi(face) {
                candidates.entry(c).or_default().push(face);
            }
        }
        // enumerate tuples satisfying (a) comparability and (b) containment
        let mut chosen: Vec<&Simplex> = Vec::with_capacity(colors.len());
        let mut tuples: Vec<Vec<&Simplex>> = Vec::new();
        enumerate_tops(prev, &colors, &candidates, &mut chosen, &mut tuples);
        for tuple in tuples {
            let mut simplex: Simplex = Vec::with_capacity(tuple.len());
            for (pos, t) in tuple.iter().enumerate() {
                let color = colors[pos];
                let id = intern_vertex(
                    prev,
                    stable,
                    &mut next,
                    &mut carriers,
                    &mut vertex_cache,
                    color,
                    t,
                )?;
                simplex.push(id);
            }
            simplex.sort_unstable();
            new_tops.insert(simplex);
        }
    }
    for top in &new_tops {
        next.add_simplex(top)?;
    }
    Ok((next, carriers))
}

/// Backtracking enumeration of the top-simplex tuples of Chr τ.
fn enumerate_tops<'a>(
    prev: &ChromaticComplex,
    colors: &[Color],
    candidates: &BTreeMap<Color, Vec<&'a Simplex>>,
    chosen: &mut Vec<&'a Simplex>,
    out: &mut Vec<Vec<&'a Simplex>>,
) {
    let pos = chosen.len();
    if pos == colors.len() {
        out.push(chosen.clone());
        return;
    }
    let color = colors[pos];
    'cand: for t in &candidates[&color] {
        let chi_t = prev.chi(t);
        for (j, prior) in chosen.iter().enumerate() {
            let comparable = is_subset(t, prior) || is_subset(prior, t);
            if !comparable {
                continue 'cand;
            }
            // (b): j's color in χ(t) forces prior ⊆ t, and vice versa
            if chi_t.contains(&colors[j]) && !is_subset(prior, t) {
                continue 'cand;
            }
            if prev.chi(prior).contains(&color) && !is_subset(t, prior) {
                continue 'cand;
            }
        }
        chosen.push(t);
        enumerate_tops(prev, colors, candidates, chosen, out);
        chosen.pop();
    }
}

/// Resolve the subdivision vertex (color, t) to an id in `next`, creating
/// it if needed: singletons and stable carriers persist the old vertex,
/// everything else gets a fresh named, positioned vertex.
#[allow(clippy::too_many_arguments)]
fn intern_vertex(
    prev: &ChromaticComplex,
    stable: &BTreeSet<Simplex>,
    next: &mut ChromaticComplex,
    carriers: &mut Vec<Simplex>,
    cache: &mut BTreeMap<(Color, Simplex), VertexId>,
    color: Color,
    t: &Simplex,
) -> Result<VertexId> {
    if let Some(&id) = cache.get(&(color, t.clone())) {
        return Ok(id);
    }
    let persisted = t.len() == 1 || stable.contains(t);
    let (name, coords, carrier) = if persisted {
        let w = t
            .iter()
            .map(|&id| prev.vertex(id))
            .find(|v| v.color == color)
            .expect("color is in χ(t)");
        (w.name.clone(), w.coords.clone(), vec![w.id])
    } else {
        let name = derived_name(prev, color, t);
        let coords = prev.coords_of(t).map(|pts| {
            let members: Vec<(Color, &[Rat])> = t
                .iter()
                .zip(pts)
                .map(|(&id, p)| (prev.vertex(id).color, p))
                .collect();
            chromatic_coords(color, &members)
        });
        (name, coords, t.clone())
    };
    let id = next.ensure_vertex(name, color, coords)?;
    if id as usize == carriers.len() {
        carriers.push(carrier);
    } else {
        debug_assert_eq!(carriers[id as usize], carrier, "carrier mismatch on glue");
    }
    cache.insert((color, t.clone()), id);
    Ok(id)
}
