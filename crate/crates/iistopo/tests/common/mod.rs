//! Independent brute-force oracles for the test suite.
//!
//! Everything in this module is written directly against the definitions,
//! in the slowest, most obviously-correct way available, and never calls
//! into the library under test. Expected values in the test files are
//! frozen from these oracles (or from hand counts), not from the library.

#![allow(dead_code)] // each integration-test binary uses a subset

use itertools::Itertools;
use std::collections::BTreeSet;

/// All compositions of `n` (ordered tuples of positive integers summing to `n`).
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every ordered partition of `items` into nonempty blocks, the slow way:
/// enumerate all permutations, cut each at every composition, sort each
/// block, deduplicate. Blocks are kept in order; block contents are sorted.
pub fn ordered_partitions_bruteforce(items: &[u32]) -> BTreeSet<Vec<Vec<u32>>> {
    let n = items.len();
    let mut out = BTreeSet::new();
    for perm in items.iter().copied().permutations(n) {
        for cuts in compositions(n) {
            let mut blocks = Vec::with_capacity(cuts.len());
            let mut idx = 0;
            for c in cuts {
                let mut block: Vec<u32> = perm[idx..idx + c].to_vec();
                block.sort_unstable();
                blocks.push(block);
                idx += c;
            }
            out.insert(blocks);
        }
    }
    out
}

/// Ordered Bell number via the brute-force enumerator.
pub fn ordered_bell_bruteforce(n: usize) -> usize {
    let items: Vec<u32> = (0..n as u32).collect();
    ordered_partitions_bruteforce(&items).len()
}

/// All nonempty subsets of `items`, as sorted vectors.
pub fn nonempty_subsets(items: &[u32]) -> Vec<Vec<u32>> {
    let n = items.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<u32> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i])
            .collect();
        out.push(subset);
    }
    out
}

/// One scheduling round: an ordered partition (list of blocks, each a sorted
/// set of process ids).
pub type OracleRound = Vec<Vec<u32>>;

/// Canonicalize an eventually-periodic run given as (prefix rounds, tail
/// rounds): make the tail primitive (not a proper power as a word), then
/// strip prefix rounds equal to the last tail round, rotating the tail
/// right each time. The result is the unique (minimal-prefix,
/// primitive-tail) representation of the same infinite round sequence.
pub fn canonicalize_run_bruteforce(
    prefix: &[OracleRound],
    tail: &[OracleRound],
) -> (Vec<OracleRound>, Vec<OracleRound>) {
    assert!(!tail.is_empty());
    let m = tail.len();
    let mut prim = m;
    'divisors: for d in 1..m {
        if m % d == 0 {
            for i in 0..m {
                if tail[i] != tail[i % d] {
                    continue 'divisors;
                }
            }
            prim = d;
            break;
        }
    }
    let mut tail: Vec<OracleRound> = tail[..prim].to_vec();
    let mut prefix: Vec<OracleRound> = prefix.to_vec();
    while let Some(last) = prefix.last() {
        if last == tail.last().unwrap() {
            let t = tail.pop().unwrap();
            tail.insert(0, t);
            prefix.pop();
        } else {
            break;
        }
    }
    (prefix, tail)
}

/// All decreasing chains S_1 ⊇ S_2 ⊇ … ⊇ S_k of nonempty subsets of
/// {0,…,n}, each round assigned an ordered partition of its set — i.e. all
/// length-`k` run prefixes for n+1 processes, enumerated brute-force.
pub fn prefixes_bruteforce(n: u32, k: usize) -> Vec<Vec<OracleRound>> {
    let all: Vec<u32> = (0..=n).collect();
    let mut out: Vec<Vec<OracleRound>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for pref in &out {
            let ground: Vec<u32> = match pref.last() {
                None => all.clone(),
                Some(round) => round.iter().flatten().copied().sorted().collect(),
            };
            for set in nonempty_subsets(&ground) {
                for part in ordered_partitions_bruteforce(&set) {
                    let mut np = pref.clone();
                    np.push(part);
                    next.push(np);
                }
            }
        }
        out = next;
    }
    out
}

/// All canonical eventually-periodic runs with prefix_len + period ≤ depth
/// and 1 ≤ period ≤ tail_period, for processes {0,…,n}: enumerate every raw
/// (prefix, tail) pair within the bounds, canonicalize, deduplicate.
/// Tail rounds must all partition the same set (the sets of an infinite
/// decreasing-and-periodic sequence are eventually constant), a subset of
/// the last prefix set.
pub fn runs_bruteforce(
    n: u32,
    depth: usize,
    tail_period: usize,
) -> BTreeSet<(Vec<OracleRound>, Vec<OracleRound>)> {
    let all: Vec<u32> = (0..=n).collect();
    let mut out = BTreeSet::new();
    for p in 0..depth {
        for prefix in prefixes_bruteforce(n, p) {
            let ground: Vec<u32> = match prefix.last() {
                None => all.clone(),
                Some(round) => round.iter().flatten().copied().sorted().collect(),
            };
            for set in nonempty_subsets(&ground) {
                let parts: Vec<OracleRound> =
                    ordered_partitions_bruteforce(&set).into_iter().collect();
                let max_m = tail_period.min(depth - p);
                let mut tails: Vec<Vec<OracleRound>> = vec![vec![]];
                for _ in 0..max_m {
                    let mut next = Vec::new();
                    for t in &tails {
                        for part in &parts {
                            let mut nt = t.clone();
                            nt.push(part.clone());
                            next.push(nt);
                        }
                    }
                    // collect every length 1..=max_m, so build incrementally
                    for t in &next {
                        if !t.is_empty() {
                            out.insert(canonicalize_run_bruteforce(&prefix, t));
                        }
                    }
                    tails = next;
                }
            }
        }
    }
    out
}

/// Maximal chains of proper nonempty faces of an n-simplex ordered by strict
/// inclusion, i.e. flags f_0 ⊊ f_1 ⊊ … ⊊ f_n with dim f_i = i. These are the
/// top simplices of the barycentric subdivision; brute-force over orderings.
pub fn barycentric_top_count_bruteforce(n: usize) -> usize {
    // A maximal flag is determined by the order in which vertices join:
    // every permutation of the n+1 vertices gives one flag, bijectively.
    (1..=n + 1).product()
}

/// All flags (chains of faces, maximal or not) of the n-simplex: the
/// simplices of the barycentric subdivision, counted brute-force.
pub fn barycentric_simplex_count_bruteforce(n: usize) -> usize {
    let verts: Vec<u32> = (0..=n as u32).collect();
    let faces = nonempty_subsets(&verts);
    // chains of faces under strict inclusion, nonempty chains
    fn extend(faces: &[Vec<u32>], chain_top: &[u32]) -> usize {
        let mut count = 0;
        for f in faces {
            if f.len() > chain_top.len() && chain_top.iter().all(|v| f.contains(v)) {
                count += 1 + extend(faces, f);
            }
        }
        count
    }
    let mut total = 0;
    for f in &faces {
        total += 1 + extend(&faces, f);
    }
    total
}
