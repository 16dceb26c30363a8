//! The acceptance gate: one test per criterion, each ending in a single
//! `criterion N: pass — …` line (visible under `--nocapture`) with the
//! measured wall time, and failing loudly otherwise.
//!
//! Expected values are frozen: counts come from the independent
//! brute-force oracles in `common` or from hand derivation, never from
//! the library itself.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use iistopo::complex::{ChromaticComplex, Color, Simplex, TriBool};
use iistopo::geometry::{point_in_simplex, rat, triangle_interiors_disjoint, Rat};
use iistopo::models::Model;
use iistopo::resilience::{build_res_subdivision, delta_search, DeltaOutcome};
use iistopo::runs::{
    enumerate_runs, minimal, run_distance, run_to_simplices, OrderedPartition, RunSpec,
};
use iistopo::solvability::{act_search, check_protocol_solvability, ActOutcome};
use iistopo::subdivision::{chr, chr_iter, chromatic_coords, subdivision_stats};
use iistopo::tasks::{identity_task, lt_task, total_order_task, validate_task, TaskSpec};
use iistopo::terminating::{
    delta_from_act, gact_verify, materialize, protocol_from_gact, subdiv_from_protocol, Schedule,
    TerminatingSubdivision,
};
use iistopo::Budget;
use num_traits::{One, Zero};

fn op(blocks: &[&[u32]]) -> OrderedPartition {
    OrderedPartition {
        blocks: blocks.iter().map(|b| b.to_vec()).collect(),
    }
}

fn run(prefix: &[&[&[u32]]], tail: &[&[&[u32]]]) -> RunSpec {
    RunSpec {
        prefix: prefix.iter().map(|r| op(r)).collect(),
        tail: tail.iter().map(|r| op(r)).collect(),
    }
}

fn within(t0: Instant, limit: Duration) -> Duration {
    let dt = t0.elapsed();
    assert!(dt <= limit, "took {dt:?}, limit {limit:?}");
    dt
}

#[test]
fn criterion_01_subdivision_counts() {
    let t0 = Instant::now();
    for (n, frozen) in [(1usize, 3usize), (2, 13), (3, 75)] {
        let items: Vec<u32> = (0..=n as u32).collect();
        let oracle = common::ordered_partitions_bruteforce(&items).len();
        assert_eq!(oracle, frozen, "oracle disagrees with the frozen count");
        let once = chr(&ChromaticComplex::standard_simplex(n)).unwrap();
        assert_eq!(once.tops().len(), oracle, "Chr tops for n={n}");
    }
    let twice = chr_iter(&ChromaticComplex::standard_simplex(2), 2).unwrap();
    assert_eq!(twice.top().complex.tops().len(), 169);
    let dt = within(t0, Duration::from_secs(1));
    println!(
        "criterion 1: pass — Chr tops 3/13/75 match the ordered-set-partition \
         oracle; Chr² of the 2-simplex has 169 ({dt:?})"
    );
}

#[test]
fn criterion_02_geometric_soundness() {
    let t0 = Instant::now();
    let mut levels_checked = 0usize;
    for n in 1..=2usize {
        let tower = chr_iter(&ChromaticComplex::standard_simplex(n), 4).unwrap();
        for m in 1..=4usize {
            let complex = &tower.level(m).complex;
            let stats = subdivision_stats(complex);
            assert_eq!(stats.volume_sum, Some(Rat::one()), "n={n} level {m}");
            // Every vertex stays inside the base simplex (nonnegative
            // barycentric coordinates summing to one). Together with the
            // exact volume sum this already forces pairwise-disjoint
            // interiors: an interior overlap has positive volume, so the
            // total would exceed one.
            for v in complex.vertices() {
                let coords = v.coords.as_deref().unwrap();
                assert!(coords.iter().all(|c| *c >= Rat::zero()), "{}", v.name);
                let sum = coords.iter().fold(Rat::zero(), |a, c| a + c);
                assert!(sum.is_one(), "{}", v.name);
            }
            levels_checked += 1;
        }
        if n == 1 {
            // Direct check: at every level the edges tile [0,1] without
            // overlap once sorted by left endpoint.
            for m in 1..=4usize {
                let complex = &tower.level(m).complex;
                let mut intervals: Vec<(Rat, Rat)> = complex
                    .tops()
                    .iter()
                    .map(|top| {
                        let xs: Vec<Rat> = complex
                            .coords_of(top)
                            .unwrap()
                            .iter()
                            .map(|p| p[1].clone())
                            .collect();
                        let lo = xs.iter().min().unwrap().clone();
                        let hi = xs.iter().max().unwrap().clone();
                        assert!(lo < hi, "degenerate edge at level {m}");
                        (lo, hi)
                    })
                    .collect();
                intervals.sort();
                assert!(intervals.first().unwrap().0.is_zero());
                assert!(intervals.last().unwrap().1.is_one());
                for pair in intervals.windows(2) {
                    assert_eq!(pair[0].1, pair[1].0, "gap or overlap at level {m}");
                }
            }
        } else {
            // Direct check at the sizes where all-pairs is affordable:
            // every pair of top triangles has disjoint interiors.
            for m in 1..=2usize {
                let complex = &tower.level(m).complex;
                let charts: Vec<Vec<Vec<Rat>>> = complex
                    .tops()
                    .iter()
                    .map(|top| {
                        complex
                            .coords_of(top)
                            .unwrap()
                            .iter()
                            .map(|p| vec![p[1].clone(), p[2].clone()])
                            .collect()
                    })
                    .collect();
                for i in 0..charts.len() {
                    for j in i + 1..charts.len() {
                        assert!(
                            triangle_interiors_disjoint(&charts[i], &charts[j]),
                            "tops {i} and {j} overlap at level {m}"
                        );
                    }
                }
            }
        }
    }
    let dt = within(t0, Duration::from_secs(30));
    println!(
        "criterion 2: pass — {levels_checked} subdivision levels (n ≤ 2, m ≤ 4) \
         have exact volume 1 and pairwise-disjoint interiors ({dt:?})"
    );
}

#[test]
fn criterion_03_coordinates() {
    let t0 = Instant::now();
    let s1 = ChromaticComplex::standard_simplex(1);
    let e0 = s1.vertex_by_name("0").unwrap().coords.clone().unwrap();
    let e1 = s1.vertex_by_name("1").unwrap().coords.clone().unwrap();
    let members = [(Color(0), e0.as_slice()), (Color(1), e1.as_slice())];
    assert_eq!(
        chromatic_coords(Color(0), &members),
        vec![rat(1, 3), rat(2, 3)]
    );
    let s2 = ChromaticComplex::standard_simplex(2);
    let corners: Vec<Vec<Rat>> = (0..=2)
        .map(|i| {
            s2.vertex_by_name(&i.to_string())
                .unwrap()
                .coords
                .clone()
                .unwrap()
        })
        .collect();
    let members: Vec<(Color, &[Rat])> = corners
        .iter()
        .enumerate()
        .map(|(i, c)| (Color(i as u32), c.as_slice()))
        .collect();
    assert_eq!(
        chromatic_coords(Color(1), &members),
        vec![rat(2, 5), rat(1, 5), rat(2, 5)]
    );
    let dt = within(t0, Duration::from_secs(1));
    println!(
        "criterion 3: pass — (0,{{0,1}}) ↦ (1/3, 2/3) and (1,{{0,1,2}}) ↦ \
         (2/5, 1/5, 2/5) exactly ({dt:?})"
    );
}

#[test]
fn criterion_04_run_machinery() {
    let t0 = Instant::now();
    let mut budget = Budget::new(u64::MAX);
    let family = enumerate_runs(2, 3, 3, &mut budget).unwrap();
    assert_eq!(family.len(), 9577, "frozen family size");

    // Ultrametric laws on all ordered pairs: symmetry, identity of
    // indiscernibles (distance zero exactly on equal runs).
    for a in &family {
        for b in &family {
            let dab = run_distance(a, b).unwrap();
            let dba = run_distance(b, a).unwrap();
            assert_eq!(dab, dba);
            assert_eq!(dab.is_zero(), a.same_run(b));
        }
    }
    // Strong triangle inequality on a deterministic strided subfamily
    // (every 97th run), via a precomputed distance matrix.
    let sample: Vec<&RunSpec> = family.iter().step_by(97).collect();
    let matrix: Vec<Vec<Rat>> = sample
        .iter()
        .map(|a| sample.iter().map(|b| run_distance(a, b).unwrap()).collect())
        .collect();
    for i in 0..sample.len() {
        for j in 0..sample.len() {
            for k in 0..sample.len() {
                assert!(
                    matrix[i][k] <= matrix[i][j].clone().max(matrix[j][k].clone()),
                    "strong triangle fails on ({i},{j},{k})"
                );
            }
        }
    }

    // minimal is idempotent across the whole family.
    for r in &family {
        let m = minimal(r).unwrap();
        assert_eq!(minimal(&m).unwrap(), m, "{r:?}");
    }

    // The worked example: r' alternating ({p0},{p1}) forever has
    // part(r') = ∞-part(r') = {p0, p1}.
    let rp = run(&[], &[&[&[0], &[1]]]);
    let both: BTreeSet<u32> = [0, 1].into();
    assert_eq!(rp.part(), both);
    assert_eq!(rp.inf_part(), both);

    // run_to_simplices yields strictly nested simplices on every
    // enumerated depth-3 run: each round simplex sits inside the hull of
    // the previous one, properly so whenever the previous hull has any
    // interior to lose (dimension ≥ 1).
    let mut nested = 0usize;
    for r in &family {
        let geo = run_to_simplices(r, 2, 3, &mut budget).unwrap();
        for k in 1..=3usize {
            let level = &geo.tower.level(k).complex;
            let prev = &geo.tower.level(k - 1).complex;
            let hull = prev.coords_of(&geo.simplices[k - 1]).unwrap();
            let mut inside: Vec<Vec<Rat>> = Vec::new();
            for &v in &geo.simplices[k] {
                let p = level.vertex(v).coords.clone().unwrap();
                assert!(point_in_simplex(&p, &hull).unwrap(), "k={k} of {r:?}");
                inside.push(p);
            }
            if geo.simplices[k - 1].len() >= 2 {
                let mut outer: Vec<Vec<Rat>> =
                    hull.iter().map(|p| p.to_vec()).collect();
                outer.sort();
                inside.sort();
                assert_ne!(inside, outer, "k={k} of {r:?} did not shrink");
            }
        }
        nested += 1;
    }

    let dt = within(t0, Duration::from_secs(60));
    println!(
        "criterion 4: pass — ultrametric laws on {0}×{0} pairs (triples on a \
         stride-97 sample), minimal idempotent, part(r') = ∞-part(r') = {{p0,p1}}, \
         {nested} runs strictly nested ({dt:?})",
        family.len()
    );
}

#[test]
fn criterion_05_task_constructions() {
    let t0 = Instant::now();
    let to2 = total_order_task(2).unwrap();
    assert_eq!(to2.output.tops().len(), 6);
    let to1 = total_order_task(1).unwrap();
    assert_eq!(to1.output.tops().len(), 2);
    for n in 1..=2usize {
        let full = lt_task(n, n).unwrap();
        let whole = chr_iter(&ChromaticComplex::standard_simplex(n), 2).unwrap();
        assert_eq!(full.output, whole.top().complex, "n={n}");
    }
    let constructed: Vec<(&str, TaskSpec)> = vec![
        ("identity(1)", identity_task(1)),
        ("identity(2)", identity_task(2)),
        ("total_order(1)", to1),
        ("total_order(2)", to2),
        ("lt(1,0)", lt_task(1, 0).unwrap()),
        ("lt(1,1)", lt_task(1, 1).unwrap()),
        ("lt(2,0)", lt_task(2, 0).unwrap()),
        ("lt(2,1)", lt_task(2, 1).unwrap()),
        ("lt(2,2)", lt_task(2, 2).unwrap()),
    ];
    for (name, task) in &constructed {
        let report = validate_task(task);
        assert!(report.is_valid(), "{name}: {report}");
    }
    let dt = within(t0, Duration::from_secs(10));
    println!(
        "criterion 5: pass — total-order tops 6/2, lt(n,n) = Chr² exactly, \
         {} constructed tasks validate ({dt:?})",
        constructed.len()
    );
}

#[test]
fn criterion_06_link_connectedness() {
    let t0 = Instant::now();
    let lord = total_order_task(2).unwrap().output;
    assert_eq!(lord.is_link_connected(2).unwrap(), TriBool::False);
    let l1 = lt_task(2, 1).unwrap();
    let mut images = 0usize;
    let faces: Vec<Simplex> = l1.input.simplices().cloned().collect();
    for t in &faces {
        let image = l1.delta_complex(t);
        assert_eq!(
            image.is_link_connected(t.len() - 1).unwrap(),
            TriBool::True,
            "Δ({:?})",
            l1.input.names(t)
        );
        images += 1;
    }
    let dt = within(t0, Duration::from_secs(10));
    println!(
        "criterion 6: pass — the order complex is not link-connected; all \
         {images} images Δ(t) of L_1 are ({dt:?})"
    );
}

#[test]
fn criterion_07_act() {
    let t0 = Instant::now();
    let mut budget = Budget::default();

    let identity = identity_task(2);
    let map = match act_search(&identity, 0, &mut budget).unwrap() {
        ActOutcome::Found(map) => map,
        other => panic!("identity task: expected a map, got {other}"),
    };
    assert_eq!(map.k, 0);
    for (from, to) in &map.eta {
        assert_eq!(
            identity.input.vertex(*from).name,
            identity.output.vertex(*to).name
        );
    }

    let full = lt_task(2, 2).unwrap();
    let map = match act_search(&full, 2, &mut budget).unwrap() {
        ActOutcome::Found(map) => map,
        other => panic!("lt(2,2): expected a map, got {other}"),
    };
    assert_eq!(map.k, 2);
    let level2 = chr_iter(&full.input, 2).unwrap();
    for (from, to) in &map.eta {
        assert_eq!(
            level2.top().complex.vertex(*from).name,
            full.output.vertex(*to).name,
            "not the identity map"
        );
    }

    let hard = lt_task(1, 0).unwrap();
    match act_search(&hard, 3, &mut budget).unwrap() {
        ActOutcome::Unsolvable { k_max, certificates } => {
            assert_eq!(k_max, 3);
            assert_eq!(certificates.len(), 4, "one certificate per level");
            assert!(
                certificates.iter().any(|c| c.contains("empty")),
                "no Δ-emptiness certificate in {certificates:?}"
            );
        }
        other => panic!("lt(1,0): expected unsolvable, got {other}"),
    }

    let dt = within(t0, Duration::from_secs(60));
    println!(
        "criterion 7: pass — identity at k=0, lt(2,2) at k=2 by the identity \
         map, lt(1,0) unsolvable for k ≤ 3 with Δ-emptiness certificates ({dt:?})"
    );
}

#[test]
fn criterion_08_partial_subdivision() {
    let t0 = Instant::now();
    let s2 = ChromaticComplex::standard_simplex(2);
    let mut budget = Budget::default();

    // One stable edge: it survives unsubdivided, and the two vertices the
    // full subdivision would place on it never appear.
    let edge: BTreeSet<Vec<String>> = [vec!["0".to_string(), "1".to_string()]]
        .into_iter()
        .collect();
    let t = materialize(&s2, &Schedule::Explicit(vec![edge]), 1, &mut budget).unwrap();
    let level1 = &t.tower().level(1).complex;
    let stable_edge = level1.ids_for(&["0", "1"]).unwrap();
    assert!(level1.contains_simplex(&stable_edge));
    assert!(level1.vertex_by_name("c0@[0,1]").is_none());
    assert!(level1.vertex_by_name("c1@[0,1]").is_none());
    let report = level1.validate();
    assert!(report.is_valid(), "{report}");

    // Empty stable families give the plain iterated subdivision.
    let never = materialize(&s2, &Schedule::Never, 2, &mut budget).unwrap();
    let plain = chr_iter(&s2, 2).unwrap();
    for k in 0..=2usize {
        assert_eq!(
            never.tower().level(k).complex,
            plain.level(k).complex,
            "level {k}"
        );
    }

    // Stabilizing everything is a fixpoint.
    let frozen = materialize(&s2, &Schedule::EverythingAt(1), 3, &mut budget).unwrap();
    let first = &frozen.tower().level(1).complex;
    for k in 2..=3usize {
        assert_eq!(&frozen.tower().level(k).complex, first, "level {k}");
    }

    let dt = within(t0, Duration::from_secs(10));
    println!(
        "criterion 8: pass — the stable edge survives with no interior \
         vertices, Σ = ∅ gives Chr exactly, Σ = C is a fixpoint ({dt:?})"
    );
}

#[test]
fn criterion_09_gact_end_to_end() {
    let t0 = Instant::now();
    let mut budget = Budget::new(2_000_000_000);

    let t = build_res_subdivision(2, 1, 4, &mut budget).unwrap();
    let task = lt_task(2, 1).unwrap();

    let delta = match delta_search(&t, &task, &mut budget).unwrap() {
        DeltaOutcome::Found(map) => map,
        other => panic!("expected a decision map, got {other}"),
    };
    // Identity on the innermost region: the output complex is that
    // region, so exactly its vertex names are shared.
    let mut pinned = 0usize;
    for v in t.stable().complex.vertices() {
        if task.output.vertex_by_name(&v.name).is_some() {
            assert_eq!(delta.delta[&v.name], v.name, "not the identity on R_0");
            pinned += 1;
        }
    }
    assert!(pinned > 0, "no shared output vertex names");

    // Runs specified by windows of ≤ 4 rounds (prefix length plus tail
    // period ≤ 4, period exactly 1); the 1-resilient model keeps those
    // with |fast| ≥ 2. A run whose prefix hugs a corner for p rounds
    // reaches the deep region at level p + 1, so depth-4 enumeration is
    // the exact match for the depth-4 construction.
    let model = Model::resilient(2, 1).unwrap();
    let verdict = gact_verify(&t, &delta, &task, &model, 4, 1, &mut budget).unwrap();
    assert!(verdict.is_pass(), "{verdict}");
    let stated = verdict.to_string();
    assert!(
        stated.contains("depth 4") && stated.contains("tail periods ≤ 1"),
        "verdict does not state its bounds: {stated}"
    );

    let pi = protocol_from_gact(&t, &delta, &mut budget).unwrap();
    let solve = check_protocol_solvability(&pi, &task, &model, 4, 1, &mut budget).unwrap();
    assert!(solve.is_pass(), "{solve}");

    let dt = within(t0, Duration::from_secs(600));
    println!(
        "criterion 9: pass — depth-4 construction, δ fixes R_0 ({pinned} \
         vertices); {verdict}; protocol: {solve} ({dt:?})"
    );
}

#[test]
fn criterion_10_round_trip() {
    let t0 = Instant::now();
    let mut budget = Budget::default();
    let mut cases = 0usize;
    for n in 1..=2usize {
        let task = lt_task(n, n).unwrap();
        let map = match act_search(&task, 2, &mut budget).unwrap() {
            ActOutcome::Found(map) => map,
            other => panic!("lt({n},{n}): expected a map, got {other}"),
        };
        let delta = delta_from_act(&map, &task).unwrap();
        let t = materialize(&task.input, &Schedule::EverythingAt(2), 2, &mut budget).unwrap();
        let pi = protocol_from_gact(&t, &delta, &mut budget).unwrap();
        let model = Model::wait_free(n);
        let (t2, delta2) =
            subdiv_from_protocol(&pi, &task.input, &model, 2, 1, &mut budget).unwrap();
        assert_eq!(t.stable().complex, t2.stable().complex, "n={n}");
        assert_eq!(delta, delta2, "n={n}");
        let names = |t: &TerminatingSubdivision, k: usize| -> BTreeSet<Vec<String>> {
            t.sigma(k)
                .iter()
                .map(|s| {
                    let mut ns = t.tower().level(k).complex.names(s);
                    ns.sort();
                    ns
                })
                .collect()
        };
        for k in 0..=2usize {
            assert_eq!(names(&t, k), names(&t2, k), "stable sets at level {k}, n={n}");
        }
        cases += 1;
    }
    let dt = within(t0, Duration::from_secs(60));
    println!(
        "criterion 10: pass — {cases} wait-free cases reproduce their stable \
         simplices and decision maps through the protocol ({dt:?})"
    );
}
