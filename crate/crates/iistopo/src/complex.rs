//! Finite chromatic simplicial complexes.
//!
//! A *chromatic complex* is a finite, downward-closed family of nonempty
//! simplices over a vertex set where every vertex carries a color and no
//! simplex repeats a color. Vertices may carry exact barycentric
//! coordinates over the corners of a base simplex; all geometry is exact
//! (see [`crate::geometry`]).
//!
//! Vertices are identified by canonical name strings. Within one complex
//! they also get dense numeric ids ([`VertexId`]) for compact simplex
//! storage; ids are an internal matter — equality of complexes and all
//! serialization go through names.

use crate::geometry::{barycenter, Rat};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// A process color `0..=n` (colors and process ids are identified).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u32);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense per-complex vertex index.
pub type VertexId = u32;

/// A simplex: a sorted, duplicate-free, nonempty list of vertex ids.
pub type Simplex = Vec<VertexId>;

/// A colored vertex, optionally realized as an exact barycentric point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub name: String,
    pub color: Color,
    pub coords: Option<Vec<Rat>>,
}

/// A finite chromatic simplicial complex.
#[derive(Debug, Clone, Default)]
pub struct ChromaticComplex {
    vertices: Vec<Vertex>,
    name_to_id: BTreeMap<String, VertexId>,
    simplices: BTreeSet<Simplex>,
}

/// One structural violation found by [`ChromaticComplex::validate_parts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertexName { name: String },
    UnknownVertex { simplex: Vec<String>, name: String },
    DuplicateColor { simplex: Vec<String>, color: Color },
    EmptySimplex,
    MissingFace { simplex: Vec<String>, missing: Vec<String> },
    MissingSingleton { vertex: String },
    BadCoords { vertex: String, why: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertexName { name } => {
                write!(f, "vertex name {name:?} declared twice")
            }
            Violation::UnknownVertex { simplex, name } => {
                write!(f, "simplex {simplex:?} names unknown vertex {name:?}")
            }
            Violation::DuplicateColor { simplex, color } => {
                write!(f, "simplex {simplex:?} repeats color {color}")
            }
            Violation::EmptySimplex => write!(f, "empty simplex listed"),
            Violation::MissingFace { simplex, missing } => {
                write!(f, "simplex {simplex:?} lacks face {missing:?}")
            }
            Violation::MissingSingleton { vertex } => {
                write!(f, "vertex {vertex:?} has no singleton simplex")
            }
            Violation::BadCoords { vertex, why } => {
                write!(f, "vertex {vertex:?} has bad coordinates: {why}")
            }
        }
    }
}

/// Outcome of validating raw complex data.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

/// Three-valued verdict for properties that are only partially decidable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriBool::True => write!(f, "true"),
            TriBool::False => write!(f, "false"),
            TriBool::Unknown => write!(f, "unknown"),
        }
    }
}

/// Star and link of a simplex, per [`ChromaticComplex::local_structure`].
#[derive(Debug, Clone)]
pub struct LocalStructure {
    /// Simplices having σ as a face (not itself a complex).
    pub open_star: Vec<Simplex>,
    /// Smallest subcomplex containing the open star.
    pub closed_star: ChromaticComplex,
    /// What remains of the closed star after removing everything that
    /// meets σ: the subcomplex of simplices τ with τ ∩ σ = ∅ and τ ∪ σ a
    /// simplex. For a vertex this is the familiar "closed star minus open
    /// star"; for the top simplex it is empty.
    pub link: ChromaticComplex,
}

impl ChromaticComplex {
    /// The empty complex.
    pub fn new() -> Self {
        Self::default()
    }

    /// The standard chromatic n-simplex: corners named `"0"..="n"`, corner
    /// `i` colored `i` and placed at the i-th barycentric unit vector, with
    /// all faces present.
    pub fn standard_simplex(n: usize) -> Self {
        let mut c = Self::new();
        let mut top = Vec::new();
        for i in 0..=n {
            let coords: Vec<Rat> = (0..=n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect();
            let id = c
                .add_vertex(i.to_string(), Color(i as u32), Some(coords))
                .expect("fresh names");
            top.push(id);
        }
        c.add_simplex(&top).expect("corners have distinct colors");
        c
    }

    /// Add a vertex. Fails on duplicate names.
    pub fn add_vertex(
        &mut self,
        name: impl Into<String>,
        color: Color,
        coords: Option<Vec<Rat>>,
    ) -> Result<VertexId> {
        let name = name.into();
        if self.name_to_id.contains_key(&name) {
            return Err(Error::invalid("vertex", format!("duplicate name {name:?}")));
        }
        let id = self.vertices.len() as VertexId;
        self.name_to_id.insert(name.clone(), id);
        self.vertices.push(Vertex {
            id,
            name,
            color,
            coords,
        });
        self.simplices.insert(vec![id]);
        Ok(id)
    }

    /// Add a vertex, or return the existing one if an identical vertex
    /// (same name, color, and coordinates) is already present. Used when
    /// gluing overlapping pieces.
    pub fn ensure_vertex(
        &mut self,
        name: impl Into<String>,
        color: Color,
        coords: Option<Vec<Rat>>,
    ) -> Result<VertexId> {
        let name = name.into();
        if let Some(&id) = self.name_to_id.get(&name) {
            let v = &self.vertices[id as usize];
            if v.color != color || v.coords != coords {
                return Err(Error::invalid(
                    "vertex",
                    format!("name {name:?} reused with different color or coordinates"),
                ));
            }
            return Ok(id);
        }
        self.add_vertex(name, color, coords)
    }

    /// Insert a simplex together with all its faces. Vertex ids must be
    /// known and colors pairwise distinct.
    pub fn add_simplex(&mut self, ids: &[VertexId]) -> Result<()> {
        let simplex = self.check_simplex(ids)?;
        for face in nonempty_subsets_of(&simplex) {
            self.simplices.insert(face);
        }
        Ok(())
    }

    fn check_simplex(&self, ids: &[VertexId]) -> Result<Simplex> {
        if ids.is_empty() {
            return Err(Error::invalid("simplex", "empty".to_string()));
        }
        let mut simplex: Simplex = ids.to_vec();
        simplex.sort_unstable();
        simplex.dedup();
        if simplex.len() != ids.len() {
            return Err(Error::invalid("simplex", format!("repeated vertex in {ids:?}")));
        }
        let mut colors = BTreeSet::new();
        for &id in &simplex {
            let v = self
                .vertices
                .get(id as usize)
                .ok_or_else(|| Error::invalid("simplex", format!("unknown vertex id {id}")))?;
            if !colors.insert(v.color) {
                return Err(Error::invalid(
                    "simplex",
                    format!("color {} repeated in {:?}", v.color, self.names(&simplex)),
                ));
            }
        }
        Ok(simplex)
    }

    /// Diagnose raw complex data against the complex axioms without
    /// constructing anything: reports duplicate names, unknown vertices,
    /// repeated colors, missing faces/singletons, and bad coordinates.
    pub fn validate_parts(
        vertices: &[(String, Color, Option<Vec<Rat>>)],
        simplices: &[Vec<String>],
    ) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut names = BTreeMap::new();
        let mut coord_dim: Option<usize> = None;
        let mut with_coords = 0usize;
        for (name, color, coords) in vertices {
            if names.insert(name.clone(), *color).is_some() {
                report
                    .violations
                    .push(Violation::DuplicateVertexName { name: name.clone() });
            }
            if let Some(cs) = coords {
                with_coords += 1;
                let sum: Rat = cs.iter().sum();
                if !sum.is_one() {
                    report.violations.push(Violation::BadCoords {
                        vertex: name.clone(),
                        why: format!("sum {} ≠ 1", crate::geometry::format_rat(&sum)),
                    });
                }
                if cs.iter().any(|c| c.is_negative()) {
                    report.violations.push(Violation::BadCoords {
                        vertex: name.clone(),
                        why: "negative entry".to_string(),
                    });
                }
                match coord_dim {
                    None => coord_dim = Some(cs.len()),
                    Some(d) if d != cs.len() => report.violations.push(Violation::BadCoords {
                        vertex: name.clone(),
                        why: format!("dimension {} ≠ {}", cs.len(), d),
                    }),
                    _ => {}
                }
            }
        }
        if with_coords != 0 && with_coords != vertices.len() {
            for (name, _, coords) in vertices {
                if coords.is_none() {
                    report.violations.push(Violation::BadCoords {
                        vertex: name.clone(),
                        why: "some vertices have coordinates, this one does not".to_string(),
                    });
                }
            }
        }

        let family: BTreeSet<Vec<&String>> = simplices
            .iter()
            .map(|s| {
                let mut v: Vec<&String> = s.iter().collect();
                v.sort();
                v
            })
            .collect();
        for simplex in simplices {
            if simplex.is_empty() {
                report.violations.push(Violation::EmptySimplex);
                continue;
            }
            let mut colors = BTreeSet::new();
            let mut all_known = true;
            for name in simplex {
                match names.get(name) {
                    None => {
                        all_known = false;
                        report.violations.push(Violation::UnknownVertex {
                            simplex: simplex.clone(),
                            name: name.clone(),
                        });
                    }
                    Some(color) => {
                        if !colors.insert(*color) {
                            report.violations.push(Violation::DuplicateColor {
                                simplex: simplex.clone(),
                                color: *color,
                            });
                        }
                    }
                }
            }
            if !all_known {
                continue;
            }
            // downward closure: every proper nonempty subset must be listed
            let sorted: Vec<&String> = {
                let mut v: Vec<&String> = simplex.iter().collect();
                v.sort();
                v
            };
            let k = sorted.len();
            for mask in 1..(1u32 << k) - 1 {
                let face: Vec<&String> = (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| sorted[i])
                    .collect();
                if !family.contains(&face) {
                    report.violations.push(Violation::MissingFace {
                        simplex: simplex.clone(),
                        missing: face.into_iter().cloned().collect(),
                    });
                }
            }
        }
        for name in names.keys() {
            if !family.contains(&vec![name]) {
                report
                    .violations
                    .push(Violation::MissingSingleton {
                        vertex: name.clone(),
                    });
            }
        }
        report
    }

    /// Build a complex from raw data, rejecting it with the first
    /// violations if the axioms fail. The simplex family is taken as
    /// given (it must already be downward-closed).
    pub fn from_parts(
        vertices: Vec<(String, Color, Option<Vec<Rat>>)>,
        simplices: &[Vec<String>],
    ) -> Result<Self> {
        let report = Self::validate_parts(&vertices, simplices);
        if !report.is_valid() {
            return Err(Error::invalid("complex", report.to_string()));
        }
        let mut c = Self::new();
        for (name, color, coords) in vertices {
            c.add_vertex(name, color, coords)?;
        }
        for simplex in simplices {
            let ids: Vec<VertexId> = simplex.iter().map(|n| c.name_to_id[n]).collect();
            let sorted = c.check_simplex(&ids)?;
            c.simplices.insert(sorted);
        }
        Ok(c)
    }

    /// Re-validate this complex (always valid for complexes built through
    /// the constructor API; useful after manual surgery in tests).
    pub fn validate(&self) -> ValidationReport {
        let vertices: Vec<(String, Color, Option<Vec<Rat>>)> = self
            .vertices
            .iter()
            .map(|v| (v.name.clone(), v.color, v.coords.clone()))
            .collect();
        let simplices: Vec<Vec<String>> = self.simplices.iter().map(|s| self.names(s)).collect();
        Self::validate_parts(&vertices, &simplices)
    }

    // ------------------------------------------------------------------
    // accessors

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<&Vertex> {
        self.name_to_id.get(name).map(|&id| &self.vertices[id as usize])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains_simplex(&self, simplex: &[VertexId]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.simplices.contains(&s)
    }

    /// Highest simplex dimension, or None for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// Simplices not properly contained in any other simplex.
    pub fn tops(&self) -> Vec<Simplex> {
        // Downward closure means a non-maximal simplex is a facet of some
        // simplex one dimension up, so one pass over all facets suffices.
        let mut facets: HashSet<Simplex> = HashSet::new();
        for s in &self.simplices {
            if s.len() < 2 {
                continue;
            }
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                facets.insert(f);
            }
        }
        self.simplices
            .iter()
            .filter(|s| !facets.contains(*s))
            .cloned()
            .collect()
    }

    /// Numbers of simplices by dimension (index = dimension).
    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for s in &self.simplices {
            let d = s.len() - 1;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    /// The color set χ(σ).
    pub fn chi(&self, simplex: &[VertexId]) -> BTreeSet<Color> {
        simplex.iter().map(|&id| self.vertex(id).color).collect()
    }

    /// Names of a simplex's vertices, in id order.
    pub fn names(&self, simplex: &[VertexId]) -> Vec<String> {
        simplex
            .iter()
            .map(|&id| self.vertex(id).name.clone())
            .collect()
    }

    /// Translate names to ids, failing on unknown names.
    pub fn ids_for(&self, names: &[impl AsRef<str>]) -> Result<Simplex> {
        let mut ids = Vec::with_capacity(names.len());
        for n in names {
            let id = self
                .name_to_id
                .get(n.as_ref())
                .ok_or_else(|| Error::invalid("simplex", format!("unknown vertex {:?}", n.as_ref())))?;
            ids.push(*id);
        }
        ids.sort_unstable();
        Ok(ids)
    }

    /// Coordinates of a simplex's vertices (present only if the complex is
    /// geometric).
    pub fn coords_of(&self, simplex: &[VertexId]) -> Option<Vec<&[Rat]>> {
        simplex
            .iter()
            .map(|&id| self.vertex(id).coords.as_deref())
            .collect()
    }

    // ------------------------------------------------------------------
    // structural operations

    /// Open star, closed star, and their difference for a simplex of this
    /// complex. The closed star of any face of the standard simplex is the
    /// whole simplex.
    pub fn local_structure(&self, simplex: &[VertexId]) -> Result<LocalStructure> {
        let mut key = simplex.to_vec();
        key.sort_unstable();
        if !self.simplices.contains(&key) {
            return Err(Error::invalid("simplex", format!("not in complex: {key:?}")));
        }
        let open_star: Vec<Simplex> = self
            .simplices
            .iter()
            .filter(|s| is_subset(&key, s))
            .cloned()
            .collect();
        let mut closed_set: BTreeSet<Simplex> = BTreeSet::new();
        for s in &open_star {
            for face in nonempty_subsets_of(s) {
                closed_set.insert(face);
            }
        }
        let link_family = self.standard_link(&key);
        let closed_star = self.subcomplex(closed_set.iter());
        let link = self.subcomplex(link_family.iter());
        Ok(LocalStructure {
            open_star,
            closed_star,
            link,
        })
    }

    /// The subcomplex of simplices of dimension ≤ k.
    pub fn skeleton(&self, k: usize) -> ChromaticComplex {
        self.subcomplex(self.simplices.iter().filter(|s| s.len() <= k + 1))
    }

    /// Is every simplex of dimension ≤ n and a face of some n-simplex?
    pub fn is_pure(&self, n: usize) -> bool {
        self.simplices.iter().all(|s| {
            s.len() <= n + 1
                && self
                    .simplices
                    .iter()
                    .any(|t| t.len() == n + 1 && is_subset(s, t))
        })
    }

    /// The link of a simplex, as a raw family: all τ disjoint from σ with
    /// τ ∪ σ a simplex.
    pub fn standard_link(&self, simplex: &[VertexId]) -> Vec<Simplex> {
        let key: BTreeSet<VertexId> = simplex.iter().copied().collect();
        self.simplices
            .iter()
            .filter(|tau| {
                tau.iter().all(|v| !key.contains(v)) && {
                    let mut union: Simplex = tau.to_vec();
                    union.extend(simplex.iter().copied());
                    union.sort_unstable();
                    self.simplices.contains(&union)
                }
            })
            .cloned()
            .collect()
    }

    /// Check link-connectedness for a complex that is pure of dimension
    /// `n`: the link of every simplex σ must be (n − dim σ − 2)-connected.
    ///
    /// Degrees ≤ 0 are decided exactly ((−1)-connected = nonempty,
    /// 0-connected = path-connected). For degrees ≥ 1 a sufficient
    /// condition is tried (the link is a cone, hence contractible); if it
    /// is inconclusive anywhere and no exact check failed, the verdict is
    /// [`TriBool::Unknown`].
    pub fn is_link_connected(&self, n: usize) -> Result<TriBool> {
        if !self.is_pure(n) {
            return Err(Error::invalid(
                "complex",
                format!("not pure of dimension {n}"),
            ));
        }
        let mut saw_unknown = false;
        for sigma in &self.simplices {
            let dim_sigma = sigma.len() as isize - 1;
            let degree = n as isize - dim_sigma - 2;
            if degree <= -2 {
                continue;
            }
            let link = self.standard_link(sigma);
            if link.is_empty() {
                // (−1)-connected demands nonemptiness; higher degrees imply it
                return Ok(TriBool::False);
            }
            if degree >= 0 && !family_path_connected(&link) {
                return Ok(TriBool::False);
            }
            if degree >= 1 && !family_is_cone(&link) {
                saw_unknown = true;
            }
        }
        if saw_unknown {
            Ok(TriBool::Unknown)
        } else {
            Ok(TriBool::True)
        }
    }

    /// The barycentric subdivision: one vertex per simplex of this complex
    /// (placed at the barycenter when coordinates exist), one simplex per
    /// chain of faces. The output is chromatic only in the degenerate
    /// sense that vertices are tagged by the dimension of the simplex they
    /// subdivide; treat it as uncolored. The barycenter of a single vertex
    /// is that vertex again, so subdividing a bare vertex returns it
    /// unchanged.
    pub fn barycentric(&self) -> ChromaticComplex {
        let mut out = ChromaticComplex::new();
        let mut bary_id: BTreeMap<&Simplex, VertexId> = BTreeMap::new();
        for s in &self.simplices {
            let name = if s.len() == 1 {
                self.vertex(s[0]).name.clone()
            } else {
                format!("b[{}]", self.names(s).join(","))
            };
            let coords = self
                .coords_of(s)
                .map(|pts| barycenter(&pts));
            let id = out
                .add_vertex(name, Color((s.len() - 1) as u32), coords)
                .expect("simplex names are unique");
            bary_id.insert(s, id);
        }
        // chains: DFS over strict inclusions
        let all: Vec<&Simplex> = self.simplices.iter().collect();
        fn extend(
            all: &[&Simplex],
            chain: &mut Vec<VertexId>,
            top: &Simplex,
            bary_id: &BTreeMap<&Simplex, VertexId>,
            out: &mut ChromaticComplex,
        ) {
            out.add_simplex(chain).expect("chain dims are distinct");
            for s in all {
                if s.len() > top.len() && is_subset(top, s) {
                    chain.push(bary_id[*s]);
                    extend(all, chain, s, bary_id, out);
                    chain.pop();
                }
            }
        }
        for s in &all {
            let mut chain = vec![bary_id[*s]];
            extend(&all, &mut chain, s, &bary_id, &mut out);
        }
        out
    }

    /// Extract the subcomplex generated by the given simplices (their
    /// downward closure is taken) with freshly renumbered ids.
    pub fn subcomplex<'a>(&self, simplices: impl Iterator<Item = &'a Simplex>) -> ChromaticComplex {
        let simplices: Vec<&Simplex> = simplices.collect();
        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        for s in &simplices {
            used.extend(s.iter().copied());
        }
        let mut out = ChromaticComplex::new();
        let mut remap: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for id in used {
            let v = self.vertex(id);
            let nid = out
                .add_vertex(v.name.clone(), v.color, v.coords.clone())
                .expect("names unique in source");
            remap.insert(id, nid);
        }
        for s in simplices {
            let mapped: Simplex = {
                let mut m: Vec<VertexId> = s.iter().map(|v| remap[v]).collect();
                m.sort_unstable();
                m
            };
            for face in nonempty_subsets_of(&mapped) {
                out.simplices.insert(face);
            }
        }
        out
    }
}

impl PartialEq for ChromaticComplex {
    /// Name-based congruence: same vertices (name, color, coordinates) and
    /// the same simplices as name sets, regardless of internal id order.
    fn eq(&self, other: &Self) -> bool {
        if self.vertices.len() != other.vertices.len()
            || self.simplices.len() != other.simplices.len()
        {
            return false;
        }
        for v in &self.vertices {
            match other.vertex_by_name(&v.name) {
                Some(w) if w.color == v.color && w.coords == v.coords => {}
                _ => return false,
            }
        }
        fn key(c: &ChromaticComplex) -> BTreeSet<Vec<&str>> {
            c.simplices
                .iter()
                .map(|s| {
                    let mut names: Vec<&str> =
                        s.iter().map(|&id| c.vertex(id).name.as_str()).collect();
                    names.sort_unstable();
                    names
                })
                .collect()
        }
        key(self) == key(other)
    }
}

impl Eq for ChromaticComplex {}

/// Is `a` a subset of `b` (both sorted)?
pub(crate) fn is_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// All nonempty subsets of a sorted simplex, sorted.
pub(crate) fn nonempty_subsets_of(s: &[VertexId]) -> Vec<Simplex> {
    let k = s.len();
    let mut out = Vec::with_capacity((1 << k) - 1);
    for mask in 1u32..(1 << k) {
        out.push(
            (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| s[i])
                .collect(),
        );
    }
    out
}

/// Path-connectivity of a simplex family's vertex set through its edges.
fn family_path_connected(family: &[Simplex]) -> bool {
    let mut verts: BTreeSet<VertexId> = BTreeSet::new();
    for s in family {
        verts.extend(s.iter().copied());
    }
    let Some(&start) = verts.iter().next() else {
        return true; // empty is vacuously connected here; emptiness is checked separately
    };
    let mut reached: BTreeSet<VertexId> = BTreeSet::new();
    let mut frontier = vec![start];
    reached.insert(start);
    while let Some(v) = frontier.pop() {
        for s in family {
            if s.len() == 2 && s.contains(&v) {
                for &w in s {
                    if reached.insert(w) {
                        frontier.push(w);
                    }
                }
            }
        }
    }
    reached.len() == verts.len()
}

/// Does some vertex belong to every maximal simplex of the family? Then
/// the family is a cone with that apex, hence contractible.
fn family_is_cone(family: &[Simplex]) -> bool {
    let tops: Vec<&Simplex> = family
        .iter()
        .filter(|s| !family.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
        .collect();
    let Some(first) = tops.first() else {
        return true;
    };
    first
        .iter()
        .any(|v| tops.iter().all(|t| t.contains(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_simplex_shape() {
        let s = ChromaticComplex::standard_simplex(2);
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.simplex_count(), 7); // 3 + 3 + 1
        assert_eq!(s.dim(), Some(2));
        assert!(s.is_pure(2));
        assert!(s.validate().is_valid());
        assert_eq!(s.count_by_dim(), vec![3, 3, 1]);
        let top = s.tops();
        assert_eq!(top.len(), 1);
        assert_eq!(s.chi(&top[0]).len(), 3);
    }

    #[test]
    fn closed_star_of_any_face_is_the_whole_simplex() {
        let s = ChromaticComplex::standard_simplex(2);
        for face in s.simplices().cloned().collect::<Vec<_>>() {
            let ls = s.local_structure(&face).unwrap();
            assert_eq!(ls.closed_star, s, "face {:?}", s.names(&face));
        }
    }

    #[test]
    fn local_structure_of_corner_and_top() {
        let s = ChromaticComplex::standard_simplex(2);
        let corner = s.ids_for(&["0"]).unwrap();
        let ls = s.local_structure(&corner).unwrap();
        // link of a corner = opposite edge with its two vertices
        assert_eq!(ls.link.vertex_count(), 2);
        assert_eq!(ls.link.simplex_count(), 3);
        assert_eq!(ls.link.dim(), Some(1));
        // top simplex: open star is itself, link is empty
        let top = s.ids_for(&["0", "1", "2"]).unwrap();
        let ls = s.local_structure(&top).unwrap();
        assert_eq!(ls.open_star.len(), 1);
        assert_eq!(ls.link.simplex_count(), 0);
        // unknown simplex errors
        assert!(s.local_structure(&[17]).is_err());
    }

    #[test]
    fn skeleton_cases() {
        let s = ChromaticComplex::standard_simplex(2);
        let sk0 = s.skeleton(0);
        assert_eq!(sk0.vertex_count(), 3);
        assert_eq!(sk0.simplex_count(), 3);
        assert_eq!(s.skeleton(2), s);
        let sk1 = s.skeleton(1);
        assert_eq!(sk1.count_by_dim(), vec![3, 3]);
        assert!(!sk1.is_pure(2));
        assert!(sk1.is_pure(1));
    }

    #[test]
    fn purity_fails_without_top() {
        let s = ChromaticComplex::standard_simplex(2).skeleton(1);
        assert!(!s.is_pure(2));
    }

    #[test]
    fn validation_reports_missing_faces() {
        let vertices = vec![
            ("a".to_string(), Color(0), None),
            ("b".to_string(), Color(1), None),
        ];
        let simplices = vec![vec!["a".to_string(), "b".to_string()]];
        let report = ChromaticComplex::validate_parts(&vertices, &simplices);
        assert!(!report.is_valid());
        let missing_faces = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::MissingFace { .. }))
            .count();
        assert_eq!(missing_faces, 2); // {a} and {b}
        let missing_singletons = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::MissingSingleton { .. }))
            .count();
        assert_eq!(missing_singletons, 2);
        assert!(ChromaticComplex::from_parts(vertices, &simplices).is_err());
    }

    #[test]
    fn validation_accepts_non_pure_complexes() {
        // a valid complex need not be pure: edges without the triangle
        let vertices = vec![
            ("a".to_string(), Color(0), None),
            ("b".to_string(), Color(1), None),
            ("c".to_string(), Color(2), None),
        ];
        let simplices = vec![
            vec!["a".to_string()],
            vec!["b".to_string()],
            vec!["c".to_string()],
            vec!["a".to_string(), "b".to_string()],
            vec!["a".to_string(), "c".to_string()],
            vec!["b".to_string(), "c".to_string()],
        ];
        assert!(ChromaticComplex::validate_parts(&vertices, &simplices).is_valid());
    }

    #[test]
    fn repeated_color_rejected() {
        let mut c = ChromaticComplex::new();
        let a = c.add_vertex("a", Color(0), None).unwrap();
        let b = c.add_vertex("b", Color(0), None).unwrap();
        assert!(c.add_simplex(&[a, b]).is_err());
    }

    #[test]
    fn barycentric_of_edge_and_triangle() {
        let e = ChromaticComplex::standard_simplex(1);
        let be = e.barycentric();
        assert_eq!(be.vertex_count(), 3);
        assert_eq!(be.count_by_dim(), vec![3, 2]);
        // midpoint coordinates are exact
        let mid = be.vertex_by_name("b[0,1]").unwrap();
        assert_eq!(
            mid.coords.as_deref().unwrap(),
            &[crate::geometry::rat(1, 2), crate::geometry::rat(1, 2)][..]
        );

        let s = ChromaticComplex::standard_simplex(2);
        let bs = s.barycentric();
        assert_eq!(bs.vertex_count(), 7);
        assert_eq!(bs.tops().len(), 6);
        assert_eq!(bs.simplex_count(), 7 + 12 + 6);

        // subdividing a bare vertex returns it unchanged
        let v = ChromaticComplex::standard_simplex(0);
        assert_eq!(v.barycentric(), v);
    }

    #[test]
    fn link_connected_standard_simplices() {
        for n in 1..=3 {
            let s = ChromaticComplex::standard_simplex(n);
            assert_eq!(s.is_link_connected(n).unwrap(), TriBool::True, "n={n}");
        }
    }

    #[test]
    fn link_connected_detects_disconnection() {
        // two triangles sharing one vertex: the shared vertex's link is
        // two disjoint edges
        let mut c = ChromaticComplex::new();
        let hub = c.add_vertex("hub", Color(0), None).unwrap();
        let a = c.add_vertex("a", Color(1), None).unwrap();
        let b = c.add_vertex("b", Color(2), None).unwrap();
        let d = c.add_vertex("d", Color(1), None).unwrap();
        let e = c.add_vertex("e", Color(2), None).unwrap();
        c.add_simplex(&[hub, a, b]).unwrap();
        c.add_simplex(&[hub, d, e]).unwrap();
        assert_eq!(c.is_link_connected(2).unwrap(), TriBool::False);
        // non-pure input errors
        let sk = c.skeleton(1);
        assert!(sk.is_link_connected(2).is_err());
    }

    #[test]
    fn link_of_an_edge_is_the_opposite_corner() {
        let s = ChromaticComplex::standard_simplex(2);
        let edge = s.ids_for(&["0", "1"]).unwrap();
        let std_link = s.standard_link(&edge);
        assert_eq!(std_link.len(), 1);
        assert_eq!(s.names(&std_link[0]), vec!["2"]);
        let ls = s.local_structure(&edge).unwrap();
        assert_eq!(ls.link.simplex_count(), 1);
        assert_eq!(ls.link.vertex_by_name("2").unwrap().color, Color(2));
    }

    #[test]
    fn ensure_vertex_glues_identical_only() {
        let mut c = ChromaticComplex::new();
        c.add_vertex("a", Color(0), None).unwrap();
        assert!(c.ensure_vertex("a", Color(0), None).is_ok());
        assert!(c.ensure_vertex("a", Color(1), None).is_err());
    }
}
