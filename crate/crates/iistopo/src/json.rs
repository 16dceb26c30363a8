//! JSON encodings for the library's entities.
//!
//! Every encoder here is canonical: object keys come out sorted (the
//! underlying [`serde_json::Map`] is a B-tree), arrays are emitted in a
//! fixed documented order, and rationals are `"p/q"` strings (`"p"` when
//! the denominator is one). Decoders validate shape as they descend and
//! report failures as [`Error::Schema`] with the JSON-path of the
//! offending value, so a bad document names its own defect.
//!
//! Encodings are by vertex *name*, not internal id: names are the stable
//! cross-complex identity (subdivision vertex names are derived from
//! views), so a document can be re-read into a fresh process and still
//! line up with a recomputed subdivision.

use crate::complex::{ChromaticComplex, Color, Simplex};
use crate::geometry::{format_rat, parse_rat, Rat};
use crate::models::{Model, ModelKind};
use crate::runs::{OrderedPartition, Pid, RunSpec};
use crate::solvability::{DecisionMapACT, Protocol};
use crate::subdivision::chr_iter_budgeted;
use crate::tasks::TaskSpec;
use crate::terminating::{materialize, DecisionMapGACT, Schedule, TerminatingSubdivision};
use crate::{Budget, Error, Result};
use serde_json::{Map, Value};
use std::collections::{BTreeMap, BTreeSet};

// ----------------------------------------------------------------------
// plumbing

/// Renders a document with sorted keys, two-space indentation, and a
/// trailing newline — byte-identical across runs on equal values.
pub fn to_pretty_string(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always render");
    text.push('\n');
    text
}

/// Parses a JSON document.
pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

/// A cursor into a document that remembers how it got there, so schema
/// errors can point at the offending value.
struct At<'a> {
    value: &'a Value,
    path: String,
}

impl<'a> At<'a> {
    fn root(value: &'a Value) -> At<'a> {
        At {
            value,
            path: "$".to_string(),
        }
    }

    fn schema<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Schema {
            path: self.path.clone(),
            message: message.into(),
        })
    }

    fn field(&self, name: &str) -> Result<At<'a>> {
        match self.value.get(name) {
            Some(value) => Ok(At {
                value,
                path: format!("{}.{name}", self.path),
            }),
            None => self.schema(format!("missing field {name:?}")),
        }
    }

    fn array(&self) -> Result<Vec<At<'a>>> {
        match self.value.as_array() {
            Some(items) => Ok(items
                .iter()
                .enumerate()
                .map(|(i, value)| At {
                    value,
                    path: format!("{}[{i}]", self.path),
                })
                .collect()),
            None => self.schema("expected an array"),
        }
    }

    fn string(&self) -> Result<&'a str> {
        self.value
            .as_str()
            .ok_or(())
            .or_else(|()| self.schema("expected a string"))
    }

    fn usize(&self) -> Result<usize> {
        self.value
            .as_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or(())
            .or_else(|()| self.schema("expected a nonnegative integer"))
    }

    fn u32(&self) -> Result<u32> {
        self.value
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .ok_or(())
            .or_else(|()| self.schema("expected a nonnegative 32-bit integer"))
    }

    fn rational(&self) -> Result<Rat> {
        let s = self.string()?;
        parse_rat(s).or_else(|_| self.schema(format!("not a rational \"p/q\": {s:?}")))
    }

    fn pid(&self) -> Result<Pid> {
        let s = self.string()?;
        s.strip_prefix('p')
            .and_then(|digits| digits.parse::<Pid>().ok())
            .ok_or(())
            .or_else(|()| self.schema(format!("not a process id \"p<i>\": {s:?}")))
    }

    fn names(&self) -> Result<Vec<String>> {
        self.array()?
            .iter()
            .map(|item| item.string().map(str::to_string))
            .collect()
    }
}

fn pid_string(p: Pid) -> Value {
    Value::String(format!("p{p}"))
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (key, value) in entries {
        map.insert(key.to_string(), value);
    }
    Value::Object(map)
}

/// Renders simplices as sorted arrays of sorted name arrays.
fn simplex_list(complex: &ChromaticComplex, simplices: &[Simplex]) -> Value {
    let mut rows: Vec<Vec<String>> = simplices
        .iter()
        .map(|s| {
            let mut names = complex.names(s);
            names.sort();
            names
        })
        .collect();
    rows.sort();
    Value::Array(
        rows.into_iter()
            .map(|names| Value::Array(names.into_iter().map(Value::String).collect()))
            .collect(),
    )
}

// ----------------------------------------------------------------------
// chromatic complexes

/// Encodes a complex: vertices in id order (name, color, coordinates or
/// null), then the top simplices as sorted name arrays.
pub fn complex_to_json(complex: &ChromaticComplex) -> Value {
    let vertices: Vec<Value> = complex
        .vertices()
        .map(|v| {
            let coords = match v.coords.as_deref() {
                Some(cs) => Value::Array(
                    cs.iter()
                        .map(|c| Value::String(format_rat(c)))
                        .collect(),
                ),
                None => Value::Null,
            };
            object(vec![
                ("color", Value::from(v.color.0)),
                ("coords", coords),
                ("name", Value::String(v.name.clone())),
            ])
        })
        .collect();
    object(vec![
        ("tops", simplex_list(complex, &complex.tops())),
        ("vertices", Value::Array(vertices)),
    ])
}

fn complex_from_at(at: &At<'_>) -> Result<ChromaticComplex> {
    let mut complex = ChromaticComplex::new();
    for vertex in at.field("vertices")?.array()? {
        let name = vertex.field("name")?.string()?.to_string();
        let color = Color(vertex.field("color")?.u32()?);
        let coords_at = vertex.field("coords")?;
        let coords = if coords_at.value.is_null() {
            None
        } else {
            let cs: Vec<Rat> = coords_at
                .array()?
                .iter()
                .map(|c| c.rational())
                .collect::<Result<_>>()?;
            Some(cs)
        };
        complex
            .add_vertex(name, color, coords)
            .or_else(|e| vertex.schema(e.to_string()))?;
    }
    for top in at.field("tops")?.array()? {
        let names = top.names()?;
        let ids = complex
            .ids_for(&names)
            .or_else(|e| top.schema(e.to_string()))?;
        complex
            .add_simplex(&ids)
            .or_else(|e| top.schema(e.to_string()))?;
    }
    Ok(complex)
}

/// Decodes a complex encoded by [`complex_to_json`].
pub fn complex_from_json(value: &Value) -> Result<ChromaticComplex> {
    complex_from_at(&At::root(value))
}

// ----------------------------------------------------------------------
// runs and models

/// Encodes a run spec: `prefix` and `tail` as arrays of rounds, each
/// round an array of blocks, each block an array of `"p<i>"` strings in
/// ascending order.
pub fn run_to_json(run: &RunSpec) -> Value {
    let rounds = |rs: &[OrderedPartition]| -> Value {
        Value::Array(
            rs.iter()
                .map(|op| {
                    Value::Array(
                        op.blocks
                            .iter()
                            .map(|b| Value::Array(b.iter().map(|&p| pid_string(p)).collect()))
                            .collect(),
                    )
                })
                .collect(),
        )
    };
    object(vec![
        ("prefix", rounds(&run.prefix)),
        ("tail", rounds(&run.tail)),
    ])
}

fn partition_from_at(at: &At<'_>) -> Result<OrderedPartition> {
    let mut blocks: Vec<Vec<Pid>> = Vec::new();
    for block in at.array()? {
        let pids: Vec<Pid> = block
            .array()?
            .iter()
            .map(|p| p.pid())
            .collect::<Result<_>>()?;
        blocks.push(pids);
    }
    OrderedPartition::new(blocks).or_else(|e| at.schema(e.to_string()))
}

/// Decodes a run spec encoded by [`run_to_json`].
pub fn run_from_json(value: &Value) -> Result<RunSpec> {
    let at = At::root(value);
    let prefix: Vec<OrderedPartition> = at
        .field("prefix")?
        .array()?
        .iter()
        .map(partition_from_at)
        .collect::<Result<_>>()?;
    let tail: Vec<OrderedPartition> = at
        .field("tail")?
        .array()?
        .iter()
        .map(partition_from_at)
        .collect::<Result<_>>()?;
    RunSpec::new(prefix, tail).or_else(|e| at.schema(e.to_string()))
}

/// Encodes a model as its kind tag plus parameters. Custom models have
/// no JSON form.
pub fn model_to_json(model: &Model) -> Result<Value> {
    let n = Value::from(model.n() as u64);
    Ok(match model.kind() {
        ModelKind::WaitFree => object(vec![("kind", Value::from("wait-free")), ("n", n)]),
        ModelKind::Resilient(t) => object(vec![
            ("kind", Value::from("resilient")),
            ("n", n),
            ("t", Value::from(*t as u64)),
        ]),
        ModelKind::ObstructionFree(k) => object(vec![
            ("k", Value::from(*k as u64)),
            ("kind", Value::from("obstruction-free")),
            ("n", n),
        ]),
        ModelKind::Adversary(allowed) => object(vec![
            (
                "allowed",
                Value::Array(
                    allowed
                        .iter()
                        .map(|set| Value::Array(set.iter().map(|&p| pid_string(p)).collect()))
                        .collect(),
                ),
            ),
            ("kind", Value::from("adversary")),
            ("n", n),
        ]),
        ModelKind::Custom(_) => {
            return Err(Error::invalid(
                "model encoding",
                "custom models have no JSON form",
            ))
        }
    })
}

/// Decodes a model encoded by [`model_to_json`].
pub fn model_from_json(value: &Value) -> Result<Model> {
    let at = At::root(value);
    let n = at.field("n")?.usize()?;
    let kind_at = at.field("kind")?;
    let kind = kind_at.string()?;
    match kind {
        "wait-free" => Ok(Model::wait_free(n)),
        "resilient" => {
            let t = at.field("t")?.usize()?;
            Model::resilient(n, t).or_else(|e| at.schema(e.to_string()))
        }
        "obstruction-free" => {
            let k = at.field("k")?.usize()?;
            Model::obstruction_free(n, k).or_else(|e| at.schema(e.to_string()))
        }
        "adversary" => {
            let mut allowed: BTreeSet<BTreeSet<Pid>> = BTreeSet::new();
            for set in at.field("allowed")?.array()? {
                let pids: BTreeSet<Pid> = set
                    .array()?
                    .iter()
                    .map(|p| p.pid())
                    .collect::<Result<_>>()?;
                allowed.insert(pids);
            }
            Model::adversary(n, allowed).or_else(|e| at.schema(e.to_string()))
        }
        other => kind_at.schema(format!("unknown model kind {other:?}")),
    }
}

// ----------------------------------------------------------------------
// tasks

/// Encodes a task: the input and output complexes plus one `delta` entry
/// per input simplex, each entry carrying the simplex (sorted names) and
/// its image simplices (possibly an empty array).
pub fn task_to_json(task: &TaskSpec) -> Value {
    let mut entries: Vec<(Vec<String>, Value)> = task
        .input
        .simplices()
        .map(|s| {
            let mut names = task.input.names(s);
            names.sort();
            let images = simplex_list(&task.output, task.delta_of(s));
            (names, images)
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let delta: Vec<Value> = entries
        .into_iter()
        .map(|(names, images)| {
            object(vec![
                ("images", images),
                (
                    "simplex",
                    Value::Array(names.into_iter().map(Value::String).collect()),
                ),
            ])
        })
        .collect();
    object(vec![
        ("delta", Value::Array(delta)),
        ("input", complex_to_json(&task.input)),
        ("output", complex_to_json(&task.output)),
    ])
}

/// Decodes a task encoded by [`task_to_json`]. Empty image arrays decode
/// to absent Δ entries, matching the normalization of [`TaskSpec::new`].
pub fn task_from_json(value: &Value) -> Result<TaskSpec> {
    let at = At::root(value);
    let input = complex_from_at(&at.field("input")?)?;
    let output = complex_from_at(&at.field("output")?)?;
    let mut delta: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for entry in at.field("delta")?.array()? {
        let simplex_at = entry.field("simplex")?;
        let key = input
            .ids_for(&simplex_at.names()?)
            .or_else(|e| simplex_at.schema(e.to_string()))?;
        let mut images = Vec::new();
        for image in entry.field("images")?.array()? {
            let ids = output
                .ids_for(&image.names()?)
                .or_else(|e| image.schema(e.to_string()))?;
            images.push(ids);
        }
        if delta.insert(key, images).is_some() {
            return simplex_at.schema("duplicate delta entry");
        }
    }
    Ok(TaskSpec::new(input, output, delta))
}

// ----------------------------------------------------------------------
// protocols and decision maps

/// Encodes a protocol as its decision list, sorted by round then view
/// name. The round is explicit: view names alone do not carry the round
/// at which a decision fires.
pub fn protocol_to_json(protocol: &Protocol) -> Value {
    let decisions: Vec<Value> = protocol
        .decision
        .iter()
        .map(|((round, view), output)| {
            object(vec![
                ("output", Value::String(output.clone())),
                ("round", Value::from(*round as u64)),
                ("view", Value::String(view.clone())),
            ])
        })
        .collect();
    object(vec![("decisions", Value::Array(decisions))])
}

/// Decodes a protocol encoded by [`protocol_to_json`].
pub fn protocol_from_json(value: &Value) -> Result<Protocol> {
    let at = At::root(value);
    let mut protocol = Protocol::empty();
    for entry in at.field("decisions")?.array()? {
        let round = entry.field("round")?.usize()?;
        let view = entry.field("view")?.string()?.to_string();
        let output = entry.field("output")?.string()?.to_string();
        if protocol
            .decision
            .insert((round, view), output)
            .is_some()
        {
            return entry.schema("duplicate decision entry");
        }
    }
    Ok(protocol)
}

/// Encodes a decision map for k-round solvability: the level `k` and the
/// vertex assignment by name, sorted by source name. Needs the task to
/// recover names, and a budget to rebuild the level-`k` subdivision.
pub fn act_map_to_json(
    task: &TaskSpec,
    map: &DecisionMapACT,
    budget: &mut Budget,
) -> Result<Value> {
    let tower = chr_iter_budgeted(&task.input, map.k, budget)?;
    let level = &tower.level(map.k).complex;
    let mut eta: Vec<(String, String)> = map
        .eta
        .iter()
        .map(|(&from, &to)| {
            (
                level.vertex(from).name.clone(),
                task.output.vertex(to).name.clone(),
            )
        })
        .collect();
    eta.sort();
    Ok(object(vec![
        (
            "eta",
            Value::Array(
                eta.into_iter()
                    .map(|(from, to)| {
                        object(vec![
                            ("from", Value::String(from)),
                            ("to", Value::String(to)),
                        ])
                    })
                    .collect(),
            ),
        ),
        ("k", Value::from(map.k as u64)),
    ]))
}

/// Decodes a decision map encoded by [`act_map_to_json`], rebuilding the
/// level-`k` subdivision of the task input to resolve names.
pub fn act_map_from_json(
    task: &TaskSpec,
    value: &Value,
    budget: &mut Budget,
) -> Result<DecisionMapACT> {
    let at = At::root(value);
    let k = at.field("k")?.usize()?;
    let tower = chr_iter_budgeted(&task.input, k, budget)?;
    let level = &tower.level(k).complex;
    let mut eta = BTreeMap::new();
    for entry in at.field("eta")?.array()? {
        let from_at = entry.field("from")?;
        let from = level
            .vertex_by_name(from_at.string()?)
            .ok_or(())
            .or_else(|()| from_at.schema("not a vertex of the level-k subdivision"))?;
        let to_at = entry.field("to")?;
        let to = task
            .output
            .vertex_by_name(to_at.string()?)
            .ok_or(())
            .or_else(|()| to_at.schema("not an output vertex"))?;
        if eta.insert(from.id, to.id).is_some() {
            return from_at.schema("duplicate eta entry");
        }
    }
    Ok(DecisionMapACT { k, eta })
}

/// Encodes a terminating-subdivision decision map as a name → name
/// object.
pub fn gact_map_to_json(map: &DecisionMapGACT) -> Value {
    let mut entries = Map::new();
    for (from, to) in &map.delta {
        entries.insert(from.clone(), Value::String(to.clone()));
    }
    object(vec![("delta", Value::Object(entries))])
}

/// Decodes a map encoded by [`gact_map_to_json`].
pub fn gact_map_from_json(value: &Value) -> Result<DecisionMapGACT> {
    let at = At::root(value);
    let delta_at = at.field("delta")?;
    let entries = match delta_at.value.as_object() {
        Some(entries) => entries,
        None => return delta_at.schema("expected an object"),
    };
    let mut delta = BTreeMap::new();
    for (from, to) in entries {
        let to_at = At {
            value: to,
            path: format!("{}.{from}", delta_at.path),
        };
        delta.insert(from.clone(), to_at.string()?.to_string());
    }
    Ok(DecisionMapGACT { delta })
}

// ----------------------------------------------------------------------
// terminating subdivisions

/// Encodes a terminating subdivision as its base complex, depth, and the
/// stable set Σ_k per round as sorted name arrays — enough to rebuild it
/// by re-running the partial subdivisions.
pub fn tsub_to_json(t: &TerminatingSubdivision) -> Value {
    let sigmas: Vec<Value> = (0..=t.depth())
        .map(|k| {
            let level = &t.tower().level(k).complex;
            let list: Vec<Simplex> = t.sigma(k).iter().cloned().collect();
            simplex_list(level, &list)
        })
        .collect();
    object(vec![
        ("base", complex_to_json(t.base())),
        ("depth", Value::from(t.depth() as u64)),
        ("sigmas", Value::Array(sigmas)),
    ])
}

/// Decodes and re-materializes a terminating subdivision encoded by
/// [`tsub_to_json`].
pub fn tsub_from_json(value: &Value, budget: &mut Budget) -> Result<TerminatingSubdivision> {
    let at = At::root(value);
    let base = complex_from_at(&at.field("base")?)?;
    let depth = at.field("depth")?.usize()?;
    let mut sigmas: Vec<BTreeSet<Vec<String>>> = Vec::new();
    for sigma in at.field("sigmas")?.array()? {
        let mut set = BTreeSet::new();
        for simplex in sigma.array()? {
            set.insert(simplex.names()?);
        }
        sigmas.push(set);
    }
    materialize(&base, &Schedule::Explicit(sigmas), depth, budget)
}
