//! Sanity checks for the independent oracles themselves, against hand
//! counts. The oracles validate the library elsewhere; these tests pin the
//! oracles to values computable on paper, so a bug in an oracle cannot
//! silently ratify a matching bug in the library.

mod common;

use common::*;

#[test]
fn compositions_counts_are_powers_of_two() {
    // compositions of n are in bijection with subsets of the n-1 gaps
    for n in 1..=6 {
        assert_eq!(compositions(n).len(), 1 << (n - 1), "n={n}");
    }
    assert_eq!(compositions(0), vec![Vec::<usize>::new()]);
    // spot value by hand: 3 = 1+1+1 = 1+2 = 2+1 = 3
    assert_eq!(compositions(3).len(), 4);
}

#[test]
fn ordered_partition_counts_match_hand_recurrence() {
    // a(n) = sum_k C(n,k) a(n-k), a(0)=1: 1, 3, 13, 75, 541
    assert_eq!(ordered_bell_bruteforce(1), 1);
    assert_eq!(ordered_bell_bruteforce(2), 3);
    assert_eq!(ordered_bell_bruteforce(3), 13);
    assert_eq!(ordered_bell_bruteforce(4), 75);
    assert_eq!(ordered_bell_bruteforce(5), 541);
}

#[test]
fn ordered_partitions_of_a_pair_listed_exactly() {
    let parts = ordered_partitions_bruteforce(&[0, 1]);
    let expect: Vec<Vec<Vec<u32>>> = vec![
        vec![vec![0], vec![1]],
        vec![vec![0, 1]],
        vec![vec![1], vec![0]],
    ];
    assert_eq!(parts.into_iter().collect::<Vec<_>>().len(), 3);
    let parts = ordered_partitions_bruteforce(&[0, 1]);
    for e in expect {
        assert!(parts.contains(&e), "missing {e:?}");
    }
}

#[test]
fn prefix_counts_small() {
    // one round: ordered partitions over all nonempty participant subsets
    assert_eq!(prefixes_bruteforce(1, 1).len(), 5); // ({0}) ({1}) ({0,1}) ({0},{1}) ({1},{0})
    assert_eq!(prefixes_bruteforce(2, 1).len(), 25); // 3*1 + 3*3 + 13
    assert_eq!(prefixes_bruteforce(2, 2).len(), 373);
    assert_eq!(prefixes_bruteforce(2, 3).len(), 5005);
}

#[test]
fn canonicalization_strips_and_primitivizes() {
    let a: OracleRound = vec![vec![0, 1]];
    let b: OracleRound = vec![vec![0], vec![1]];
    // tail (a,b,a,b) is a proper power -> primitive (a,b)
    let (p, t) = canonicalize_run_bruteforce(&[], &[a.clone(), b.clone(), a.clone(), b.clone()]);
    assert!(p.is_empty());
    assert_eq!(t, vec![a.clone(), b.clone()]);
    // prefix ending in the tail's last round gets absorbed, rotating the tail
    let (p, t) = canonicalize_run_bruteforce(&[b.clone()], &[a.clone(), b.clone()]);
    assert!(p.is_empty());
    assert_eq!(t, vec![b.clone(), a.clone()]);
    // rotations of a periodic run are distinct canonical runs
    let (_, t1) = canonicalize_run_bruteforce(&[], &[a.clone(), b.clone()]);
    let (_, t2) = canonicalize_run_bruteforce(&[], &[b.clone(), a.clone()]);
    assert_ne!(t1, t2);
}

#[test]
fn run_family_counts_depth3() {
    // canonical eventually-periodic runs, prefix_len + period <= 3, n = 2
    let fam = runs_bruteforce(2, 3, 3);
    let mut by_shape = std::collections::BTreeMap::<(usize, usize), usize>::new();
    for (p, t) in &fam {
        *by_shape.entry((p.len(), t.len())).or_default() += 1;
    }
    // closed-form counts over ordered partitions of subsets:
    //   (p=0,m=1): sum OP = 25
    //   (0,2): sum OP^2 - sum OP = 199 - 25 = 174       (primitive pairs)
    //   (0,3): sum OP^3 - sum OP = 2281 - 25 = 2256     (3 prime: only the cube of a round is imprimitive)
    //   (1,1): 373 - 25 = 348                            (strip r1 == tail)
    //   (1,2): 2316 - 174 = 2142
    //   (2,1): 5005 - 373 = 4632
    assert_eq!(by_shape.get(&(0, 1)), Some(&25));
    assert_eq!(by_shape.get(&(0, 2)), Some(&174));
    assert_eq!(by_shape.get(&(0, 3)), Some(&2256));
    assert_eq!(by_shape.get(&(1, 1)), Some(&348));
    assert_eq!(by_shape.get(&(1, 2)), Some(&2142));
    assert_eq!(by_shape.get(&(2, 1)), Some(&4632));
    assert_eq!(fam.len(), 25 + 174 + 2256 + 348 + 2142 + 4632); // 9577
}

#[test]
fn run_family_counts_depth4_period1() {
    // period-1 runs with prefix+1 <= 4 are in bijection with depth-4
    // prefixes (pad the tail round to length 4; strip to come back)
    let fam = runs_bruteforce(2, 4, 1);
    assert_eq!(fam.len(), 65545);
    assert_eq!(prefixes_bruteforce(2, 4).len(), 65545);
}

#[test]
fn solo_process_has_one_run_per_depth() {
    for depth in 1..=4 {
        assert_eq!(runs_bruteforce(0, depth, depth).len(), 1, "depth={depth}");
    }
}

#[test]
fn barycentric_counts_by_hand() {
    // flags of the triangle: 7 faces, 12 two-chains, 6 maximal flags
    assert_eq!(barycentric_top_count_bruteforce(2), 6);
    assert_eq!(barycentric_simplex_count_bruteforce(2), 7 + 12 + 6);
    assert_eq!(barycentric_top_count_bruteforce(1), 2);
    assert_eq!(barycentric_simplex_count_bruteforce(1), 3 + 2);
    assert_eq!(barycentric_top_count_bruteforce(3), 24);
}
