//! Colored tasks `(I, O, Δ)` and the concrete constructions used in the
//! worked examples.
//!
//! A *task* pairs a pure n-dimensional chromatic input complex `I` with a
//! pure n-dimensional chromatic output complex `O` and a multi-map `Δ`
//! sending every simplex of `I` to a subcomplex of `O` — the outputs the
//! processes of that simplex may jointly choose. A well-formed `Δ`:
//!
//! * preserves colors: `χ(Δ(σ)) = χ(σ)` whenever `Δ(σ)` is nonempty,
//!   and each `Δ(σ)` is pure of dimension `dim σ` (or empty);
//! * is monotone under intersections: `Δ(σ ∩ τ) ⊆ Δ(σ) ∩ Δ(τ)`; in
//!   particular `Δ(σ') ⊆ Δ(σ)` for every face `σ' ⊆ σ`.
//!
//! Images are stored by their *top* simplices; faces are implied. An
//! input simplex with no stored entry has the empty image — processes
//! with that participation pattern have no permitted output.
//!
//! The constructions here are *affine*: the image of a face `t` of the
//! standard simplex is carved out of an iterated chromatic subdivision as
//! `L ∩ Chr^k t`, computed by carrier containment (see [`affine_task`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::complex::{is_subset, ChromaticComplex, Color, Simplex};
use crate::subdivision::{chr_iter, Tower};
use crate::{Error, Result};

/// A task `(I, O, Δ)` with images given by their top simplices.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    /// The input complex (pure n-dimensional).
    pub input: ChromaticComplex,
    /// The output complex (pure n-dimensional).
    pub output: ChromaticComplex,
    /// For each input simplex with a nonempty image, the top simplices
    /// of that image in `output`. Missing key ⇔ empty image.
    pub delta: BTreeMap<Simplex, Vec<Simplex>>,
}

impl TaskSpec {
    /// Assembles a task, normalizing the representation: simplices are
    /// sorted, dominated image entries (faces of other entries) are
    /// dropped, and empty images are stored as missing keys. No validity
    /// checking happens here — see [`validate_task`].
    pub fn new(
        input: ChromaticComplex,
        output: ChromaticComplex,
        delta: BTreeMap<Simplex, Vec<Simplex>>,
    ) -> TaskSpec {
        let delta = delta
            .into_iter()
            .filter_map(|(mut key, image)| {
                key.sort_unstable();
                let image = normalize_tops(image);
                if image.is_empty() {
                    None
                } else {
                    Some((key, image))
                }
            })
            .collect();
        TaskSpec {
            input,
            output,
            delta,
        }
    }

    /// The task's dimension `n`, if the input complex is nonempty.
    pub fn n(&self) -> Option<usize> {
        self.input.dim()
    }

    /// The top simplices of `Δ(simplex)`; empty slice for empty images.
    pub fn delta_of(&self, simplex: &[u32]) -> &[Simplex] {
        let mut key: Simplex = simplex.to_vec();
        key.sort_unstable();
        self.delta.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Whether `out_simplex` (in output ids) belongs to the subcomplex
    /// `Δ(in_simplex)`.
    pub fn delta_contains(&self, in_simplex: &[u32], out_simplex: &[u32]) -> bool {
        if out_simplex.is_empty() {
            return false;
        }
        let mut probe: Simplex = out_simplex.to_vec();
        probe.sort_unstable();
        self.delta_of(in_simplex)
            .iter()
            .any(|top| is_subset(&probe, top))
    }

    /// The image `Δ(simplex)` materialized as a chromatic complex (with
    /// vertex ids local to the result).
    pub fn delta_complex(&self, simplex: &[u32]) -> ChromaticComplex {
        self.output
            .subcomplex(self.delta_of(simplex).iter().map(|s| s as &Simplex))
    }
}

fn normalize_tops(image: Vec<Simplex>) -> Vec<Simplex> {
    let mut sorted: Vec<Simplex> = image
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s
        })
        .collect();
    sorted.sort();
    sorted.dedup();
    let kept: Vec<Simplex> = sorted
        .iter()
        .filter(|s| {
            !sorted
                .iter()
                .any(|other| other.len() > s.len() && is_subset(s, other))
        })
        .cloned()
        .collect();
    kept
}

/// The findings of [`validate_task`].
#[derive(Debug, Clone, Default)]
pub struct TaskReport {
    /// Human-readable violations; empty means the task is well-formed.
    pub issues: Vec<String>,
}

impl TaskReport {
    /// Whether no violations were found.
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for TaskReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            write!(f, "valid task")
        } else {
            writeln!(f, "{} issue(s):", self.issues.len())?;
            for issue in &self.issues {
                writeln!(f, "  - {issue}")?;
            }
            Ok(())
        }
    }
}

/// Checks a task against the multi-map conditions: structural soundness
/// of both complexes, purity, color preservation `χ(Δ(σ)) = χ(σ)`, and
/// intersection monotonicity `Δ(σ ∩ τ) ⊆ Δ(σ) ∩ Δ(τ)` (equivalently,
/// `Δ(σ') ⊆ Δ(σ)` for faces, which is what gets tested — facet steps
/// compose to arbitrary intersections). Diagnostic: never errors.
pub fn validate_task(task: &TaskSpec) -> TaskReport {
    let mut issues = Vec::new();
    for v in task.input.validate().violations {
        issues.push(format!("input complex: {v}"));
    }
    for v in task.output.validate().violations {
        issues.push(format!("output complex: {v}"));
    }
    let n = match task.input.dim() {
        Some(n) => n,
        None => {
            issues.push("input complex is empty".into());
            return TaskReport { issues };
        }
    };
    if !task.input.is_pure(n) {
        issues.push(format!("input complex is not pure of dimension {n}"));
    }
    match task.output.dim() {
        Some(m) if m == n && task.output.is_pure(n) => {}
        _ => issues.push(format!("output complex is not pure of dimension {n}")),
    }
    for (key, image) in &task.delta {
        if !task.input.contains_simplex(key) {
            issues.push(format!(
                "delta key {:?} is not a simplex of the input complex",
                task.input.names(key)
            ));
            continue;
        }
        let want = task.input.chi(key);
        for top in image {
            if !task.output.contains_simplex(top) {
                issues.push(format!(
                    "image entry {top:?} under {:?} is not a simplex of the output complex",
                    task.input.names(key)
                ));
                continue;
            }
            let got = task.output.chi(top);
            if got != want {
                issues.push(format!(
                    "color preservation fails at {:?}: image top {:?} has colors {:?}, expected {:?}",
                    task.input.names(key),
                    task.output.names(top),
                    got,
                    want
                ));
            } else if top.len() != key.len() {
                issues.push(format!(
                    "image of {:?} is not pure of dimension {}: top {:?} has dimension {}",
                    task.input.names(key),
                    key.len() - 1,
                    task.output.names(top),
                    top.len() - 1
                ));
            }
        }
    }
    // Face monotonicity, facet by facet (composes to the general
    // intersection condition).
    let input_simplices: Vec<Simplex> = task.input.simplices().cloned().collect();
    for sigma in &input_simplices {
        if sigma.len() < 2 {
            continue;
        }
        for drop in 0..sigma.len() {
            let mut facet = sigma.clone();
            facet.remove(drop);
            for top in task.delta_of(&facet) {
                if !task.delta_contains(sigma, top) {
                    issues.push(format!(
                        "monotonicity fails: Δ({:?}) has top {:?} outside Δ({:?})",
                        task.input.names(&facet),
                        task.output.names(top),
                        task.input.names(sigma)
                    ));
                }
            }
        }
    }
    TaskReport { issues }
}

/// The identity task on the standard n-simplex: `I = O = s` and
/// `Δ(t) = {faces of t}` for every face `t`.
pub fn identity_task(n: usize) -> TaskSpec {
    let s = ChromaticComplex::standard_simplex(n);
    let delta = s
        .simplices()
        .map(|t| (t.clone(), vec![t.clone()]))
        .collect();
    TaskSpec::new(s.clone(), s, delta)
}

/// Builds the affine task of a pure n-dimensional subcomplex
/// `L ⊆ Chr^k s`, where the tower iterates the standard simplex `s` and
/// `l_tops` are the top simplices of `L` at the tower's top level.
///
/// The image of each face `t ⊆ s` is `L ∩ Chr^k t`, computed by carrier
/// containment. Preconditions: `L` is pure n-dimensional, and each
/// intersection is pure of dimension `dim t` or empty — violations are
/// errors naming the offending face.
pub fn affine_task(tower: &Tower, l_tops: &[Simplex]) -> Result<TaskSpec> {
    let base = tower.base();
    let n = base
        .dim()
        .ok_or_else(|| Error::invalid("affine task", "empty base complex"))?;
    if base.tops().len() != 1 {
        return Err(Error::invalid(
            "affine task",
            "the tower must subdivide a single standard simplex",
        ));
    }
    let k = tower.height();
    let level = &tower.level(k).complex;
    let tops = normalize_tops(l_tops.to_vec());
    if tops.is_empty() {
        return Err(Error::invalid("affine task", "L has no top simplices"));
    }
    for top in &tops {
        if !level.contains_simplex(top) {
            return Err(Error::invalid(
                "affine task",
                format!("{top:?} is not a simplex of the top level"),
            ));
        }
        if top.len() != n + 1 {
            return Err(Error::invalid(
                "affine task",
                format!(
                    "L is not pure of dimension {n}: top {:?} has dimension {}",
                    level.names(top),
                    top.len() - 1
                ),
            ));
        }
    }
    // Every simplex of L, with its carrier in the base.
    let mut faces: BTreeSet<Simplex> = BTreeSet::new();
    for top in &tops {
        for mask in 1u32..(1 << top.len()) {
            let f: Simplex = top
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            faces.insert(f);
        }
    }
    let mut carriers: BTreeMap<Simplex, Simplex> = BTreeMap::new();
    for f in &faces {
        carriers.insert(f.clone(), tower.carrier_of(k, f, 0)?);
    }
    let input = base.clone();
    let output = level.subcomplex(tops.iter());
    let mut delta: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for t in input.simplices() {
        let mut inside: Vec<&Simplex> = faces
            .iter()
            .filter(|f| is_subset(&carriers[*f], t))
            .collect();
        inside.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut maximal: Vec<Simplex> = Vec::new();
        for f in inside {
            if !maximal.iter().any(|m| is_subset(f, m)) {
                maximal.push(f.clone());
            }
        }
        if maximal.is_empty() {
            continue;
        }
        if maximal.iter().any(|m| m.len() != t.len()) {
            return Err(Error::invalid(
                "affine task",
                format!(
                    "L ∩ Chr^{k} {:?} is not pure of dimension {}",
                    input.names(t),
                    t.len() - 1
                ),
            ));
        }
        // Translate level-k ids into output-complex ids by name.
        let mut image = Vec::new();
        for m in &maximal {
            let names = level.names(m);
            image.push(output.ids_for(&names)?);
        }
        delta.insert(t.clone(), image);
    }
    Ok(TaskSpec::new(input, output, delta))
}

fn chr2_tower(n: usize) -> Result<Tower> {
    chr_iter(&ChromaticComplex::standard_simplex(n), 2)
}

/// The total order task: the affine task of the `(n+1)!` top simplices of
/// `Chr² s` whose vertex carrier dimensions are exactly `{0, 1, …, n}` —
/// one vertex strictly inside a face of each dimension. Errors if the
/// count invariant breaks.
pub fn total_order_task(n: usize) -> Result<TaskSpec> {
    if n == 0 {
        return Err(Error::invalid("total order task", "needs n ≥ 1"));
    }
    let tower = chr2_tower(n)?;
    let level = &tower.level(2).complex;
    let mut selected: Vec<Simplex> = Vec::new();
    for top in level.tops() {
        let mut dims: Vec<usize> = Vec::with_capacity(top.len());
        for &v in &top {
            dims.push(tower.carrier_dim_in_base(2, v)?);
        }
        dims.sort_unstable();
        if dims == (0..=n).collect::<Vec<_>>() {
            selected.push(top);
        }
    }
    let expected: usize = (1..=n + 1).product();
    if selected.len() != expected {
        return Err(Error::invalid(
            "total order task",
            format!(
                "selection invariant broken: found {} simplices, expected {expected}",
                selected.len()
            ),
        ));
    }
    affine_task(&tower, &selected)
}

/// The affine task `L_t`: all top simplices of `Chr² s` whose vertices
/// all have carrier dimension at least `n − t`. Requires `t ≤ n`. At
/// `t = n` this is the whole of `Chr² s`.
pub fn lt_task(n: usize, t: usize) -> Result<TaskSpec> {
    if t > n {
        return Err(Error::invalid(
            "lt task",
            format!("t = {t} exceeds n = {n}"),
        ));
    }
    let tower = chr2_tower(n)?;
    let level = &tower.level(2).complex;
    let mut selected: Vec<Simplex> = Vec::new();
    for top in level.tops() {
        let mut ok = true;
        for &v in &top {
            if tower.carrier_dim_in_base(2, v)? < n - t {
                ok = false;
                break;
            }
        }
        if ok {
            selected.push(top);
        }
    }
    affine_task(&tower, &selected)
}

/// The plus-completion `T⁺`: the output complex gains one "no output"
/// vertex per color (named `plus{i}`, carrying no coordinates), every
/// output simplex `σ` gains its completion `σ⁺` padding all missing
/// colors, and each image `Δ⁺(τ)` consists of the simplices of `Δ(τ)`
/// padded with the no-output vertices of the colors in `χ(τ)` they miss.
/// Empty images stay empty.
///
/// Coordinates are dropped from the output complex: the new vertices
/// have no geometric placement, and complexes carry coordinates all or
/// nothing.
pub fn plus_completion(task: &TaskSpec) -> Result<TaskSpec> {
    let colors: BTreeSet<Color> = task.output.vertices().map(|v| v.color).collect();
    let mut output = ChromaticComplex::new();
    let mut old_ids: Vec<u32> = Vec::new();
    for v in task.output.vertices() {
        old_ids.push(output.add_vertex(v.name.clone(), v.color, None)?);
    }
    let mut plus: BTreeMap<Color, u32> = BTreeMap::new();
    for &c in &colors {
        let name = format!("plus{}", c.0);
        if task.output.vertex_by_name(&name).is_some() {
            return Err(Error::invalid(
                "plus completion",
                format!("output already has a vertex named {name}"),
            ));
        }
        plus.insert(c, output.add_vertex(name, c, None)?);
    }
    let translate = |s: &Simplex| -> Simplex {
        let mut out: Simplex = s.iter().map(|&v| old_ids[v as usize]).collect();
        out.sort_unstable();
        out
    };
    let old_simplices: Vec<Simplex> = task.output.simplices().cloned().collect();
    for s in &old_simplices {
        let mut completed = translate(s);
        let have = task.output.chi(s);
        for &c in &colors {
            if !have.contains(&c) {
                completed.push(plus[&c]);
            }
        }
        completed.sort_unstable();
        output.add_simplex(&completed)?;
    }
    let pad = |s: &Simplex, within: &BTreeSet<Color>| -> Simplex {
        let mut out = translate(s);
        let have = task.output.chi(s);
        for c in within {
            if !have.contains(c) {
                out.push(plus[c]);
            }
        }
        out.sort_unstable();
        out
    };
    let mut delta: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for (key, image) in &task.delta {
        let within = task.input.chi(key);
        let mut padded: BTreeSet<Simplex> = BTreeSet::new();
        for top in image {
            for mask in 1u32..(1 << top.len()) {
                let f: Simplex = top
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect();
                padded.insert(pad(&f, &within));
            }
        }
        delta.insert(key.clone(), padded.into_iter().collect());
    }
    Ok(TaskSpec::new(task.input.clone(), output, delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_identity_task_is_valid() {
        let t = identity_task(2);
        let report = validate_task(&t);
        assert!(report.is_valid(), "{report}");
        let s = t.input.tops().pop().unwrap();
        assert_eq!(t.delta_of(&s), &[s.clone()]);
        assert!(t.delta_contains(&s, &s[..2]));
    }

    #[test]
    fn color_preservation_violations_are_reported() {
        let s = ChromaticComplex::standard_simplex(1);
        let mut delta: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
        let top = s.tops().pop().unwrap();
        delta.insert(top.clone(), vec![top.clone()]);
        // Color 0's vertex maps to color 1's: condition (i) breaks.
        delta.insert(vec![top[0]], vec![vec![top[1]]]);
        let t = TaskSpec::new(s.clone(), s, delta);
        let report = validate_task(&t);
        assert!(!report.is_valid());
        assert!(
            report.issues.iter().any(|i| i.contains("color preservation")),
            "{report}"
        );
    }

    #[test]
    fn monotonicity_violations_are_reported() {
        let s = ChromaticComplex::standard_simplex(1);
        let top = s.tops().pop().unwrap();
        let mut delta: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
        // A vertex has an image but the edge above it has none.
        delta.insert(vec![top[0]], vec![vec![top[0]]]);
        let t = TaskSpec::new(s.clone(), s, delta);
        let report = validate_task(&t);
        assert!(
            report.issues.iter().any(|i| i.contains("monotonicity")),
            "{report}"
        );
    }

    #[test]
    fn the_full_subdivision_is_an_affine_task() {
        let tower = chr2_tower(2).unwrap();
        let all = tower.top().complex.tops();
        let t = affine_task(&tower, &all).unwrap();
        assert!(validate_task(&t).is_valid());
        assert_eq!(t.output.tops().len(), 169);
        // Faces restrict to their own second subdivisions: 9 edges per
        // side, one vertex per corner.
        for input_simplex in t.input.simplices() {
            let image = t.delta_of(input_simplex);
            match input_simplex.len() {
                1 => assert_eq!(image.len(), 1),
                2 => assert_eq!(image.len(), 9),
                3 => assert_eq!(image.len(), 169),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn the_l1_task_is_valid_and_skips_the_corners() {
        let t = lt_task(2, 1).unwrap();
        let report = validate_task(&t);
        assert!(report.is_valid(), "{report}");
        // Corners have empty images; edges and the full simplex do not.
        for input_simplex in t.input.simplices() {
            let image = t.delta_of(input_simplex);
            if input_simplex.len() == 1 {
                assert!(image.is_empty());
            } else {
                assert!(!image.is_empty());
            }
        }
        // L_1 excludes exactly the tops touching a corner of the base.
        let tower = chr2_tower(2).unwrap();
        let level = &tower.level(2).complex;
        let mut excluded = 0usize;
        for top in level.tops() {
            let touches_corner = top
                .iter()
                .any(|&v| tower.carrier_dim_in_base(2, v).unwrap() == 0);
            if touches_corner {
                excluded += 1;
            }
        }
        assert_eq!(t.output.tops().len() + excluded, 169);
        assert!(excluded > 0);
    }

    #[test]
    fn total_order_counts_and_permutations() {
        let t1 = total_order_task(1).unwrap();
        assert_eq!(t1.output.tops().len(), 2);
        assert!(validate_task(&t1).is_valid());

        let t2 = total_order_task(2).unwrap();
        assert_eq!(t2.output.tops().len(), 6);
        assert!(validate_task(&t2).is_valid());
        // Each selected simplex realizes a distinct permutation
        // color ↦ carrier dimension; together they realize all 6.
        let tower = chr2_tower(2).unwrap();
        let level = &tower.level(2).complex;
        let mut perms: BTreeSet<Vec<usize>> = BTreeSet::new();
        for top in t2.output.tops() {
            let names = t2.output.names(&top);
            let ids = level.ids_for(&names).unwrap();
            let mut by_color: Vec<(u32, usize)> = ids
                .iter()
                .map(|&v| {
                    (
                        level.vertex(v).color.0,
                        tower.carrier_dim_in_base(2, v).unwrap(),
                    )
                })
                .collect();
            by_color.sort_unstable();
            perms.insert(by_color.into_iter().map(|(_, d)| d).collect());
        }
        assert_eq!(perms.len(), 6);
    }

    #[test]
    fn lt_tasks_nest_and_top_out_at_the_full_subdivision() {
        let full = lt_task(2, 2).unwrap();
        assert_eq!(full.output.tops().len(), 169);
        let names_of = |t: &TaskSpec| -> BTreeSet<Vec<String>> {
            t.output
                .tops()
                .into_iter()
                .map(|s| t.output.names(&s))
                .collect()
        };
        let l0 = names_of(&lt_task(2, 0).unwrap());
        let l1 = names_of(&lt_task(2, 1).unwrap());
        let l2 = names_of(&full);
        assert!(l0.is_subset(&l1) && l1.is_subset(&l2));
        assert!(l0.len() < l1.len() && l1.len() < l2.len());
    }

    #[test]
    fn l0_on_the_edge_has_empty_vertex_images() {
        let t = lt_task(1, 0).unwrap();
        assert!(validate_task(&t).is_valid());
        for input_simplex in t.input.simplices() {
            if input_simplex.len() == 1 {
                assert!(t.delta_of(input_simplex).is_empty());
            }
        }
        assert!(!t.delta_of(&t.input.tops().pop().unwrap()).is_empty());
    }

    #[test]
    fn affine_rejects_an_impure_l() {
        let tower = chr2_tower(2).unwrap();
        let level = &tower.level(2).complex;
        let some_edge = level
            .simplices()
            .find(|s| s.len() == 2)
            .cloned()
            .unwrap();
        let err = affine_task(&tower, &[some_edge]).unwrap_err();
        assert!(err.to_string().contains("not pure"));
    }

    #[test]
    fn affine_rejects_an_impure_face_intersection() {
        // Build L from one top with a full edge inside the base edge
        // {0,1} and one top meeting that base edge in a single vertex
        // away from the first: the intersection with the edge mixes
        // dimensions 1 and 0.
        let tower = chr2_tower(2).unwrap();
        let level = &tower.level(2).complex;
        let base_edge = tower.base().ids_for(&["0", "1"]).unwrap();
        let carrier_in = |v: u32, t: &Simplex| -> bool {
            is_subset(&tower.carrier_of(2, &[v], 0).unwrap(), t)
        };
        let tops = level.tops();
        let with_edge = tops
            .iter()
            .find(|top| {
                top.iter().filter(|&&v| carrier_in(v, &base_edge)).count() == 2
            })
            .cloned()
            .unwrap();
        let edge_verts: BTreeSet<u32> = with_edge
            .iter()
            .copied()
            .filter(|&v| carrier_in(v, &base_edge))
            .collect();
        let with_lone_vertex = tops
            .iter()
            .find(|top| {
                let inside: Vec<u32> = top
                    .iter()
                    .copied()
                    .filter(|&v| carrier_in(v, &base_edge))
                    .collect();
                inside.len() == 1 && !edge_verts.contains(&inside[0])
            })
            .cloned()
            .unwrap();
        let err = affine_task(&tower, &[with_edge, with_lone_vertex]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not pure"), "{msg}");
        assert!(msg.contains('0') && msg.contains('1'), "{msg}");
    }

    #[test]
    fn plus_completion_pads_with_no_output_vertices() {
        let t = plus_completion(&identity_task(2)).unwrap();
        let report = validate_task(&t);
        assert!(report.is_valid(), "{report}");
        assert_eq!(t.output.vertex_count(), 6);
        // The completion of a lone base vertex is a full triangle.
        assert!(t.output.dim() == Some(2) && t.output.is_pure(2));
        // Images of positive-dimensional faces contain padded simplices.
        for input_simplex in t.input.simplices() {
            if input_simplex.len() < 2 {
                continue;
            }
            let padded = t.delta_of(input_simplex).iter().any(|top| {
                t.output
                    .names(top)
                    .iter()
                    .any(|name| name.starts_with("plus"))
            });
            assert!(padded, "no padded image under {input_simplex:?}");
        }
        // Vertex images need no padding: the vertex alone already covers
        // its color set.
        for input_simplex in t.input.simplices() {
            if input_simplex.len() == 1 {
                let image = t.delta_of(input_simplex);
                assert_eq!(image.len(), 1);
                assert_eq!(image[0].len(), 1);
            }
        }
    }

    #[test]
    fn plus_completion_keeps_empty_images_empty_and_validates_on_l1() {
        let plus = plus_completion(&lt_task(2, 1).unwrap()).unwrap();
        let report = validate_task(&plus);
        assert!(report.is_valid(), "{report}");
        for input_simplex in plus.input.simplices() {
            if input_simplex.len() == 1 {
                assert!(plus.delta_of(input_simplex).is_empty());
            }
        }
    }

    #[test]
    fn delta_complexes_are_the_stated_subcomplexes() {
        let t = lt_task(2, 1).unwrap();
        let top = t.input.tops().pop().unwrap();
        let full_image = t.delta_complex(&top);
        assert!(full_image.is_pure(2));
        assert_eq!(full_image.tops().len(), t.delta_of(&top).len());
        let edge = vec![top[0], top[1]];
        let edge_image = t.delta_complex(&edge);
        assert!(edge_image.is_pure(1));
        assert!(edge_image.simplex_count() > 0);
    }
}
