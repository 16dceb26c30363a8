//! Iterated immediate snapshot runs.
//!
//! A run is an infinite sequence of rounds S_1 ⊇ S_2 ⊇ …, every round an
//! ordered partition of its participant set; in round k, process p sees
//! exactly the processes in the blocks up to and including its own
//! (`Vis`). [`RunSpec`] represents the eventually periodic runs — a finite
//! prefix followed by a forever-repeated tail over a fixed set — which is
//! enough to realize every participation/fast-set pattern the model
//! predicates depend on.
//!
//! Views are the recursive full-information histories: `view(p, 0)` is
//! p's input and `view(p, k)` is the set of round-(k−1) views of the
//! processes p sees in round k. Each view corresponds to exactly one
//! vertex of the k-fold chromatic subdivision, and [`run_to_simplices`]
//! realizes a run as the nested sequence of subdivided simplices spanned
//! by its views.

use crate::complex::{ChromaticComplex, Simplex};
use crate::geometry::{rat, rat_int, Rat};
use crate::subdivision::{chr_iter_budgeted, compose_derived_name, Tower};
use crate::{Budget, Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Process identifier; process i is the color-i vertex of the input
/// simplex and is written `p{i}` in the JSON encodings.
pub type Pid = u32;

/// One round: an ordered partition into disjoint nonempty blocks,
/// earlier blocks being "faster" (seen by everything later).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderedPartition {
    /// Blocks in order; each block is sorted.
    pub blocks: Vec<Vec<Pid>>,
}

impl OrderedPartition {
    /// Build a partition, sorting block members and checking the block
    /// invariants.
    pub fn new(blocks: Vec<Vec<Pid>>) -> Result<Self> {
        let mut op = OrderedPartition { blocks };
        for b in &mut op.blocks {
            b.sort_unstable();
        }
        if let Some(issue) = op.issues().into_iter().next() {
            return Err(Error::invalid("ordered partition", issue));
        }
        Ok(op)
    }

    /// The one-block partition of a set.
    pub fn single_block(ps: &BTreeSet<Pid>) -> Self {
        OrderedPartition {
            blocks: vec![ps.iter().copied().collect()],
        }
    }

    /// Diagnostic problems with this partition (empty = well-formed).
    pub fn issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.blocks.is_empty() {
            issues.push("partition has no blocks".to_string());
        }
        let mut seen: BTreeSet<Pid> = BTreeSet::new();
        for (j, b) in self.blocks.iter().enumerate() {
            if b.is_empty() {
                issues.push(format!("block {j} is empty"));
            }
            if b.windows(2).any(|w| w[0] >= w[1]) {
                issues.push(format!("block {j} is not sorted strictly"));
            }
            for &p in b {
                if !seen.insert(p) {
                    issues.push(format!("p{p} appears in more than one block"));
                }
            }
        }
        issues
    }

    /// All processes taking part in this round.
    pub fn participants(&self) -> BTreeSet<Pid> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// Index of the block containing p.
    pub fn block_of(&self, p: Pid) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&p))
    }

    /// The processes p sees this round: the union of the blocks up to and
    /// including its own.
    pub fn vis(&self, p: Pid) -> Option<BTreeSet<Pid>> {
        let j = self.block_of(p)?;
        Some(self.blocks[..=j].iter().flatten().copied().collect())
    }

    /// The partition induced on a subset (empty blocks dropped); None if
    /// nothing is left.
    pub fn restrict(&self, keep: &BTreeSet<Pid>) -> Option<Self> {
        let blocks: Vec<Vec<Pid>> = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|p| keep.contains(p)).collect())
            .filter(|b: &Vec<Pid>| !b.is_empty())
            .collect();
        if blocks.is_empty() {
            None
        } else {
            Some(OrderedPartition { blocks })
        }
    }
}

/// A finite initial segment of a run.
pub type RunPrefix = Vec<OrderedPartition>;

/// An eventually periodic run: the rounds of `prefix`, then the rounds of
/// `tail` repeated forever. All tail rounds share one participant set —
/// the infinitely-participating processes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RunSpec {
    pub prefix: RunPrefix,
    pub tail: Vec<OrderedPartition>,
}

impl RunSpec {
    /// Build and validate a run spec.
    pub fn new(prefix: RunPrefix, tail: Vec<OrderedPartition>) -> Result<Self> {
        let r = RunSpec { prefix, tail };
        if let Some(issue) = r.validate().into_iter().next() {
            return Err(Error::invalid("run spec", issue));
        }
        Ok(r)
    }

    /// The run that simply repeats one round forever.
    pub fn cyclic(tail: Vec<OrderedPartition>) -> Result<Self> {
        RunSpec::new(Vec::new(), tail)
    }

    /// Diagnostic problems (empty = valid): malformed rounds, broken
    /// nesting, inconsistent tail.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        for (k, round) in self.prefix.iter().enumerate() {
            for issue in round.issues() {
                issues.push(format!("prefix round {}: {issue}", k + 1));
            }
        }
        for (j, round) in self.tail.iter().enumerate() {
            for issue in round.issues() {
                issues.push(format!("tail round {}: {issue}", j + 1));
            }
        }
        if self.tail.is_empty() {
            issues.push("tail is empty".to_string());
            return issues;
        }
        if !issues.is_empty() {
            return issues;
        }
        for w in self.prefix.windows(2) {
            if !w[1].participants().is_subset(&w[0].participants()) {
                issues.push(format!(
                    "participants not nested: {:?} after {:?}",
                    w[1].participants(),
                    w[0].participants()
                ));
            }
        }
        let f = self.tail[0].participants();
        for round in &self.tail[1..] {
            if round.participants() != f {
                issues.push("tail rounds disagree on their participant set".to_string());
            }
        }
        if let Some(last) = self.prefix.last() {
            if !f.is_subset(&last.participants()) {
                issues.push("tail participants exceed the last prefix round".to_string());
            }
        }
        issues
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Errors with the first validation issue, if any.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().into_iter().next() {
            None => Ok(()),
            Some(issue) => Err(Error::invalid("run spec", issue)),
        }
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.tail.len()
    }

    /// The k-th round, k ≥ 1.
    pub fn round_at(&self, k: usize) -> &OrderedPartition {
        assert!(k >= 1, "rounds are 1-indexed");
        if k <= self.prefix.len() {
            &self.prefix[k - 1]
        } else {
            &self.tail[(k - 1 - self.prefix.len()) % self.tail.len()]
        }
    }

    /// S_k, the participants of round k.
    pub fn participants_at(&self, k: usize) -> BTreeSet<Pid> {
        self.round_at(k).participants()
    }

    /// part(r) = S_1.
    pub fn part(&self) -> BTreeSet<Pid> {
        self.round_at(1).participants()
    }

    /// ∞-part(r): the processes participating forever, i.e. the tail set.
    pub fn inf_part(&self) -> BTreeSet<Pid> {
        self.tail[0].participants()
    }

    /// Rounds after which the pair (this run, other) repeats jointly:
    /// checking properties up to this bound checks them everywhere.
    pub fn horizon_with(&self, other: &RunSpec) -> usize {
        self.prefix.len().max(other.prefix.len()) + lcm(self.period(), other.period())
    }

    /// The canonical spec of the denoted infinite run: primitive tail
    /// word (no shorter repeating block) and shortest prefix (prefix
    /// rounds equal to the incoming tail round are absorbed by rotating
    /// the tail).
    pub fn canonical(&self) -> RunSpec {
        let mut tail = primitive_root(&self.tail);
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if last == tail.last().expect("tail is nonempty") {
                prefix.pop();
                let t = tail.pop().expect("tail is nonempty");
                tail.insert(0, t);
            } else {
                break;
            }
        }
        RunSpec { prefix, tail }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Whether two specs denote the same infinite run.
    pub fn same_run(&self, other: &RunSpec) -> bool {
        self.canonical() == other.canonical()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// The shortest word whose repetition gives `word`.
fn primitive_root(word: &[OrderedPartition]) -> Vec<OrderedPartition> {
    let m = word.len();
    for d in 1..=m {
        if m % d == 0 && word.chunks(d).all(|c| c == &word[..d]) {
            return word[..d].to_vec();
        }
    }
    word.to_vec()
}

/// (part(r), ∞-part(r)).
pub fn participation(r: &RunSpec) -> Result<(BTreeSet<Pid>, BTreeSet<Pid>)> {
    r.ensure_valid()?;
    Ok((r.part(), r.inf_part()))
}

/// Whether `upper` is an extension of `lower` (lower ≤ upper): round
/// participants grow, and every surviving process of `lower` sees exactly
/// the same processes in both — which makes all its views identical.
/// Decided by checking one joint period past both prefixes.
pub fn extends(lower: &RunSpec, upper: &RunSpec) -> Result<bool> {
    lower.ensure_valid()?;
    upper.ensure_valid()?;
    let h = lower.horizon_with(upper);
    for k in 1..=h {
        let rl = lower.round_at(k);
        let ru = upper.round_at(k);
        if !rl.participants().is_subset(&ru.participants()) {
            return Ok(false);
        }
        for p in rl.participants() {
            if rl.vis(p) != ru.vis(p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The smallest run below r. Every run below r must, round by round,
/// contain the round's first block and be closed under what its members
/// see; the least such family of participant sets is a fixpoint
/// (constant on the tail), and restricting r to it realizes the minimum.
pub fn minimal(r: &RunSpec) -> Result<RunSpec> {
    r.ensure_valid()?;
    // least F with F = closure_j(first block_j ∪ F) for every tail round j
    let mut f: BTreeSet<Pid> = BTreeSet::new();
    loop {
        let mut next = f.clone();
        for round in &r.tail {
            let mut x: BTreeSet<Pid> = round.blocks[0].iter().copied().collect();
            x.extend(f.iter().copied());
            next.extend(vis_closure(round, &x));
        }
        if next == f {
            break;
        }
        f = next;
    }
    // prefix rounds, last to first
    let mut sets: Vec<BTreeSet<Pid>> = Vec::with_capacity(r.prefix.len());
    let mut following = f.clone();
    for round in r.prefix.iter().rev() {
        let mut x: BTreeSet<Pid> = round.blocks[0].iter().copied().collect();
        x.extend(following.iter().copied());
        let t = vis_closure(round, &x);
        sets.push(t.clone());
        following = t;
    }
    sets.reverse();
    let prefix: Vec<OrderedPartition> = r
        .prefix
        .iter()
        .zip(&sets)
        .map(|(round, keep)| round.restrict(keep).expect("first block survives"))
        .collect();
    let tail: Vec<OrderedPartition> = r
        .tail
        .iter()
        .map(|round| round.restrict(&f).expect("first block survives"))
        .collect();
    Ok(RunSpec { prefix, tail }.canonical())
}

/// Least superset of `x` closed under the round's visibility.
fn vis_closure(round: &OrderedPartition, x: &BTreeSet<Pid>) -> BTreeSet<Pid> {
    let mut out = x.clone();
    loop {
        let mut grew = false;
        for p in out.clone() {
            if let Some(v) = round.vis(p) {
                for q in v {
                    grew |= out.insert(q);
                }
            }
        }
        if !grew {
            return out;
        }
    }
}

/// fast(r) = ∞-part(minimal(r)): the largest set of processes seeing each
/// other infinitely often.
pub fn fast(r: &RunSpec) -> Result<BTreeSet<Pid>> {
    Ok(minimal(r)?.inf_part())
}

/// slow(r): the complement of fast(r) in the process universe
/// {0, …, n}.
pub fn slow(r: &RunSpec, n: usize) -> Result<BTreeSet<Pid>> {
    let f = fast(r)?;
    Ok((0..=n as Pid).filter(|p| !f.contains(p)).collect())
}

/// 1/(1+k) where k is the number of leading rounds on which the two runs
/// agree; 0 exactly when they denote the same infinite run.
pub fn run_distance(a: &RunSpec, b: &RunSpec) -> Result<Rat> {
    a.ensure_valid()?;
    b.ensure_valid()?;
    if a.same_run(b) {
        return Ok(rat_int(0));
    }
    let h = a.horizon_with(b);
    let mut k: i64 = 0;
    for j in 1..=h {
        if a.round_at(j) == b.round_at(j) {
            k += 1;
        } else {
            break;
        }
    }
    debug_assert!((k as usize) < h, "distinct runs differ within the horizon");
    Ok(rat(1, 1 + k))
}

// ----------------------------------------------------------------------
// views

/// The full-information history of one process at one round.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct View {
    pub pid: Pid,
    pub body: ViewBody,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViewBody {
    /// Round 0: the process's input (a vertex name of the input complex,
    /// or nothing when running over the bare standard simplex).
    Input(Option<String>),
    /// Round k ≥ 1: the round-(k−1) views of the processes seen.
    Seen(BTreeSet<View>),
}

impl View {
    /// The name of the subdivided-complex vertex encoding this view. A
    /// process that saw only itself keeps its previous vertex: the name
    /// collapses through singleton carriers.
    pub fn vertex_name(&self) -> String {
        match &self.body {
            ViewBody::Input(None) => self.pid.to_string(),
            ViewBody::Input(Some(name)) => name.clone(),
            ViewBody::Seen(set) => {
                if set.len() == 1 {
                    return set.first().expect("nonempty").vertex_name();
                }
                let names: Vec<String> = set.iter().map(View::vertex_name).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                compose_derived_name(self.pid, &refs)
            }
        }
    }

    /// Number of nodes in the view tree.
    pub fn size(&self) -> u64 {
        match &self.body {
            ViewBody::Input(_) => 1,
            ViewBody::Seen(set) => 1 + set.iter().map(View::size).sum::<u64>(),
        }
    }

    /// Whether the view mentions a process anywhere.
    pub fn mentions(&self, p: Pid) -> bool {
        self.pid == p
            || match &self.body {
                ViewBody::Input(_) => false,
                ViewBody::Seen(set) => set.iter().any(|v| v.mentions(p)),
            }
    }
}

/// The views of every process in S_k after k rounds of r. With `input`,
/// round-0 views carry the given input vertex names (the map must cover
/// part(r)). The budget caps the total view-tree size materialized.
pub fn views(
    r: &RunSpec,
    k: usize,
    input: Option<&BTreeMap<Pid, String>>,
    budget: &mut Budget,
) -> Result<BTreeMap<Pid, View>> {
    r.ensure_valid()?;
    if let Some(map) = input {
        for p in r.part() {
            if !map.contains_key(&p) {
                return Err(Error::invalid("views", format!("no input for p{p}")));
            }
        }
    }
    let survivors = if k == 0 { r.part() } else { r.participants_at(k) };
    let mut memo: BTreeMap<(Pid, usize), View> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for p in survivors {
        let v = view_of(r, p, k, input, &mut memo, budget)?;
        out.insert(p, v);
    }
    Ok(out)
}

fn view_of(
    r: &RunSpec,
    p: Pid,
    k: usize,
    input: Option<&BTreeMap<Pid, String>>,
    memo: &mut BTreeMap<(Pid, usize), View>,
    budget: &mut Budget,
) -> Result<View> {
    if let Some(v) = memo.get(&(p, k)) {
        return Ok(v.clone());
    }
    let v = if k == 0 {
        View {
            pid: p,
            body: ViewBody::Input(input.and_then(|m| m.get(&p).cloned())),
        }
    } else {
        let vis = r
            .round_at(k)
            .vis(p)
            .ok_or_else(|| Error::invalid("views", format!("p{p} not in round {k}")))?;
        let mut seen = BTreeSet::new();
        for q in vis {
            seen.insert(view_of(r, q, k - 1, input, memo, budget)?);
        }
        View {
            pid: p,
            body: ViewBody::Seen(seen),
        }
    };
    budget.charge(v.size(), "views")?;
    memo.insert((p, k), v.clone());
    Ok(v)
}

// ----------------------------------------------------------------------
// runs as nested subdivided simplices

/// A run realized geometrically: σ_k is the simplex of the k-th
/// subdivision level whose color-i vertex encodes view(p_i, k), for each
/// participant p_i of round k. σ_0 is the whole input simplex, and the
/// realizations nest: |σ_0| ⊇ |σ_1| ⊇ ….
#[derive(Debug)]
pub struct RunGeometry {
    pub tower: Tower,
    /// simplices[k] lives in tower level k, for k = 0..=depth.
    pub simplices: Vec<Simplex>,
}

/// Realize the first `depth` rounds of r over the standard n-simplex.
pub fn run_to_simplices(
    r: &RunSpec,
    n: usize,
    depth: usize,
    budget: &mut Budget,
) -> Result<RunGeometry> {
    r.ensure_valid()?;
    if let Some(&p) = r.part().iter().max() {
        if p as usize > n {
            return Err(Error::Dimension {
                what: "process id",
                found: p as usize,
                max: n,
            });
        }
    }
    let tower = chr_iter_budgeted(&ChromaticComplex::standard_simplex(n), depth, budget)?;
    let mut names: BTreeMap<Pid, String> =
        (0..=n as Pid).map(|p| (p, p.to_string())).collect();
    let mut simplices = vec![tower.base().tops().remove(0)];
    for k in 1..=depth {
        let round = r.round_at(k);
        let mut next: BTreeMap<Pid, String> = BTreeMap::new();
        for p in round.participants() {
            let vis = round.vis(p).expect("participant");
            if vis.len() == 1 {
                next.insert(p, names[&p].clone());
            } else {
                let members: Vec<&str> = vis.iter().map(|q| names[q].as_str()).collect();
                next.insert(p, compose_derived_name(p, &members));
            }
        }
        let level = &tower.level(k).complex;
        let sigma = level.ids_for(&next.values().collect::<Vec<_>>())?;
        debug_assert!(level.contains_simplex(&sigma), "views span a simplex");
        simplices.push(sigma);
        names = next;
    }
    Ok(RunGeometry { tower, simplices })
}

// ----------------------------------------------------------------------
// enumeration

/// All round sequences of length exactly `depth` over processes 0..=n
/// with nested participant sets, in canonical order.
pub fn enumerate_prefixes(n: usize, depth: usize, budget: &mut Budget) -> Result<Vec<RunPrefix>> {
    let universe: Vec<Pid> = (0..=n as Pid).collect();
    let mut out = Vec::new();
    let mut cur: RunPrefix = Vec::new();
    fn rec(
        over: &[Pid],
        depth: usize,
        cur: &mut RunPrefix,
        out: &mut Vec<RunPrefix>,
        budget: &mut Budget,
    ) -> Result<()> {
        if cur.len() == depth {
            budget.charge(1, "enumerate_prefixes")?;
            out.push(cur.clone());
            return Ok(());
        }
        for set in nonempty_pid_subsets(over) {
            for op in ordered_partitions(&set) {
                cur.push(op);
                rec(&set, depth, cur, out, budget)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(&universe, depth, &mut cur, &mut out, budget)?;
    out.sort();
    Ok(out)
}

/// All canonical RunSpecs over processes 0..=n with prefix length plus
/// tail period at most `depth` and period between 1 and `tail_period`.
/// Each denoted run in range appears exactly once.
pub fn enumerate_runs(
    n: usize,
    depth: usize,
    tail_period: usize,
    budget: &mut Budget,
) -> Result<Vec<RunSpec>> {
    if tail_period == 0 {
        return Err(Error::invalid("enumerate_runs", "tail period must be ≥ 1"));
    }
    let universe: Vec<Pid> = (0..=n as Pid).collect();
    let mut out: Vec<RunSpec> = Vec::new();
    let max_prefix = depth.saturating_sub(1);
    let mut prefixes: Vec<RunPrefix> = vec![Vec::new()];
    for plen in 0..=max_prefix {
        if plen > 0 {
            prefixes = extend_prefixes(&universe, prefixes);
        }
        for prefix in &prefixes {
            let over: Vec<Pid> = match prefix.last() {
                Some(round) => round.participants().into_iter().collect(),
                None => universe.clone(),
            };
            for f in nonempty_pid_subsets(&over) {
                let rounds = ordered_partitions(&f);
                let max_m = tail_period.min(depth - plen);
                for m in 1..=max_m {
                    let mut tail = vec![0usize; m];
                    enumerate_tails(&rounds, &mut tail, 0, &mut |tail_idx| {
                        let tail: Vec<OrderedPartition> =
                            tail_idx.iter().map(|&i| rounds[i].clone()).collect();
                        let spec = RunSpec {
                            prefix: prefix.clone(),
                            tail,
                        };
                        if spec.is_canonical() {
                            budget.charge(1, "enumerate_runs")?;
                            out.push(spec);
                        }
                        Ok(())
                    })?;
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Number of runs [`enumerate_runs`] would produce.
pub fn count_runs(n: usize, depth: usize, tail_period: usize) -> Result<u64> {
    let mut budget = Budget::new(u64::MAX);
    Ok(enumerate_runs(n, depth, tail_period, &mut budget)?.len() as u64)
}

fn extend_prefixes(universe: &[Pid], prefixes: Vec<RunPrefix>) -> Vec<RunPrefix> {
    let mut out = Vec::new();
    for prefix in prefixes {
        let over: Vec<Pid> = match prefix.last() {
            Some(round) => round.participants().into_iter().collect(),
            None => universe.to_vec(),
        };
        for set in nonempty_pid_subsets(&over) {
            for op in ordered_partitions(&set) {
                let mut next = prefix.clone();
                next.push(op);
                out.push(next);
            }
        }
    }
    out
}

fn enumerate_tails(
    rounds: &[OrderedPartition],
    idx: &mut [usize],
    pos: usize,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if pos == idx.len() {
        return f(idx);
    }
    for i in 0..rounds.len() {
        idx[pos] = i;
        enumerate_tails(rounds, idx, pos + 1, f)?;
    }
    Ok(())
}

/// All nonempty subsets of a sorted pid slice, in canonical order.
fn nonempty_pid_subsets(set: &[Pid]) -> Vec<Vec<Pid>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << set.len()) {
        out.push(
            set.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect(),
        );
    }
    out.sort();
    out
}

/// All ordered partitions of a sorted pid slice.
pub(crate) fn ordered_partitions(set: &[Pid]) -> Vec<OrderedPartition> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<Pid>> = Vec::new();
    fn rec(rest: &[Pid], blocks: &mut Vec<Vec<Pid>>, out: &mut Vec<OrderedPartition>) {
        if rest.is_empty() {
            out.push(OrderedPartition {
                blocks: blocks.clone(),
            });
            return;
        }
        for first in nonempty_pid_subsets(rest) {
            let remaining: Vec<Pid> = rest.iter().copied().filter(|p| !first.contains(p)).collect();
            blocks.push(first);
            rec(&remaining, blocks, out);
            blocks.pop();
        }
    }
    rec(set, &mut blocks, &mut out);
    out.sort();
    out
}
