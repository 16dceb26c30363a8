//! Cross-checks of the library against the independent brute-force
//! oracles in `common`.

mod common;

use iistopo::complex::ChromaticComplex;
use iistopo::runs::{enumerate_prefixes, enumerate_runs, OrderedPartition, RunSpec};
use iistopo::subdivision::chr;
use iistopo::Budget;
use std::collections::BTreeSet;

/// An implementation run spec in oracle form.
fn to_oracle(r: &RunSpec) -> (Vec<common::OracleRound>, Vec<common::OracleRound>) {
    let conv = |ops: &[OrderedPartition]| -> Vec<common::OracleRound> {
        ops.iter().map(|op| op.blocks.clone()).collect()
    };
    (conv(&r.prefix), conv(&r.tail))
}

#[test]
fn prefix_enumeration_matches_the_oracle() {
    let mut budget = Budget::new(u64::MAX);
    for n in 0..=2usize {
        for depth in 1..=3usize {
            if n == 2 && depth == 3 {
                continue; // 5005 prefixes: covered by the count test below
            }
            let ours: BTreeSet<Vec<common::OracleRound>> =
                enumerate_prefixes(n, depth, &mut budget)
                    .unwrap()
                    .iter()
                    .map(|p| p.iter().map(|op| op.blocks.clone()).collect())
                    .collect();
            let oracle: BTreeSet<Vec<common::OracleRound>> =
                common::prefixes_bruteforce(n as u32, depth).into_iter().collect();
            assert_eq!(ours, oracle, "n={n} depth={depth}");
        }
    }
}

#[test]
fn prefix_counts_match_the_oracle_at_depth_3() {
    let mut budget = Budget::new(u64::MAX);
    assert_eq!(enumerate_prefixes(2, 3, &mut budget).unwrap().len(), 5005);
}

#[test]
fn run_enumeration_matches_the_oracle() {
    let mut budget = Budget::new(u64::MAX);
    for (n, depth, period) in [(1, 2, 2), (1, 3, 3), (2, 2, 2)] {
        let ours: BTreeSet<_> = enumerate_runs(n, depth, period, &mut budget)
            .unwrap()
            .iter()
            .map(to_oracle)
            .collect();
        let oracle = common::runs_bruteforce(n as u32, depth, period);
        assert_eq!(ours, oracle, "n={n} depth={depth} period={period}");
    }
}

#[test]
fn run_family_counts_by_shape() {
    let mut budget = Budget::new(u64::MAX);
    let family = enumerate_runs(2, 3, 3, &mut budget).unwrap();
    assert_eq!(family.len(), 9577);
    let count = |p: usize, m: usize| {
        family
            .iter()
            .filter(|r| r.prefix_len() == p && r.period() == m)
            .count()
    };
    assert_eq!(count(0, 1), 25);
    assert_eq!(count(0, 2), 174);
    assert_eq!(count(0, 3), 2256);
    assert_eq!(count(1, 1), 348);
    assert_eq!(count(1, 2), 2142);
    assert_eq!(count(2, 1), 4632);
}

#[test]
fn period_one_runs_biject_with_prefixes() {
    // padding a canonical period-1 run with its repeated round out to
    // depth 3 is a bijection onto the depth-3 prefixes: stripping the
    // repeated trailing rounds inverts it
    let mut budget = Budget::new(u64::MAX);
    let runs = enumerate_runs(2, 3, 1, &mut budget).unwrap();
    let prefixes = enumerate_prefixes(2, 3, &mut budget).unwrap();
    let image: BTreeSet<Vec<OrderedPartition>> = runs
        .iter()
        .map(|r| {
            let mut p = r.prefix.clone();
            while p.len() < 3 {
                p.push(r.tail[0].clone());
            }
            p
        })
        .collect();
    let all: BTreeSet<Vec<OrderedPartition>> = prefixes.into_iter().collect();
    assert_eq!(image.len(), runs.len());
    assert_eq!(image, all);
}

#[test]
fn chr_top_counts_match_ordered_partition_oracle() {
    for n in 0..=3usize {
        let colors: Vec<u32> = (0..=n as u32).collect();
        let expected = common::ordered_partitions_bruteforce(&colors).len();
        let c = chr(&ChromaticComplex::standard_simplex(n)).unwrap();
        assert_eq!(c.tops().len(), expected, "n={n}");
    }
}

#[test]
fn chr_tops_are_exactly_the_ordered_partitions() {
    // not only the count: every top of Chr s is the simplex read off an
    // ordered partition through prefix-union carriers, and conversely
    let n = 2usize;
    let c = chr(&ChromaticComplex::standard_simplex(n)).unwrap();
    let colors: Vec<u32> = (0..=n as u32).collect();
    let mut expected = BTreeSet::new();
    for partition in common::ordered_partitions_bruteforce(&colors) {
        let mut names = Vec::new();
        let mut seen: Vec<u32> = Vec::new();
        for block in &partition {
            seen.extend(block.iter().copied());
            seen.sort_unstable();
            for &p in block {
                if seen.len() == 1 {
                    names.push(seen[0].to_string());
                } else {
                    let members: Vec<String> = seen.iter().map(u32::to_string).collect();
                    names.push(format!("c{p}@[{}]", members.join(",")));
                }
            }
        }
        let ids = c.ids_for(&names).unwrap();
        expected.insert(ids);
    }
    let actual: BTreeSet<_> = c.tops().into_iter().collect();
    assert_eq!(actual, expected);
}
