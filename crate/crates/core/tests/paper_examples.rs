use std::time::Instant;

use macc_core::engine::{decode, delivery, place, simulate_with, PayloadMode};
use macc_core::{
    BlockChoice, CacheRef, DemandGraph, Design, MatchingAssignment, SchemeParams, Topology,
    Transmission, UserRef,
};
use num_rational::Ratio;

#[path = "fixtures/transmissions.rs"]
mod listed;

fn topology(m: usize, b: usize, z: usize, per_group: &[&[usize]]) -> Topology {
    let access = (1..=m)
        .flat_map(|g| {
            per_group
                .iter()
                .map(move |caches| caches.iter().map(|&j| CacheRef::new(g, j)).collect())
        })
        .collect();
    Topology::new(m, b, z, access).unwrap()
}

fn example_a() -> (Topology, MatchingAssignment) {
    let access = vec![
        vec![1, 3],
        vec![2, 4],
        vec![1, 4],
        vec![2, 3],
        vec![1, 4],
        vec![2, 3],
        vec![2, 4],
        vec![1, 3],
    ];
    let access = access
        .into_iter()
        .enumerate()
        .map(|(u, caches)| {
            let g = u / 4 + 1;
            caches.into_iter().map(|j| CacheRef::new(g, j)).collect()
        })
        .collect();
    let topo = Topology::new(2, 4, 2, access).unwrap();
    let f = MatchingAssignment::new(&topo, vec![vec![1, 2, 4, 3], vec![4, 3, 2, 1]]).unwrap();
    (topo, f)
}

fn example_b() -> (Topology, MatchingAssignment) {
    let topo = topology(
        2,
        7,
        3,
        &[
            &[1, 3, 5],
            &[2, 3, 5],
            &[2, 3, 5],
            &[2, 4, 5],
            &[2, 3, 5],
            &[2, 3, 6],
            &[2, 3, 7],
        ],
    );
    let identity: Vec<usize> = (1..=7).collect();
    let f = MatchingAssignment::new(&topo, vec![identity.clone(), identity]).unwrap();
    (topo, f)
}

/// Rows whose printed `Y` disagrees with the intersection `S` printed on
/// the line above it: `(n, j1, j2, column, printed, intersection)`.
const TYPOS_A: &[(u32, u32, u32, usize, u32, u32)] = &[(1, 2, 2, 6, 1, 5)];
const TYPOS_B: &[(u32, u32, u32, usize, u32, u32)] = &[(1, 2, 7, 4, 48, 49)];

fn compare(got: &[Transmission], listing: &[[u32; 7]], b: usize, typos: &[(u32, u32, u32, usize, u32, u32)]) {
    assert_eq!(got.len(), listing.len());
    let mut hits = 0;
    for (tx, want) in got.iter().zip(listing) {
        let got = flatten(tx, b);
        let mut want = *want;
        if let Some(&(.., col, printed, actual)) =
            typos.iter().find(|t| [t.0, t.1, t.2] == want[..3])
        {
            assert_eq!(want[col], printed);
            want[col] = actual;
            hits += 1;
        }
        assert_eq!(got, want);
    }
    assert_eq!(hits, typos.len());
}

/// `[n, j1, j2, user1, subfile1, user2, subfile2]` with per-group user
/// indices, as printed.
fn flatten(tx: &Transmission, b: usize) -> [u32; 7] {
    let (u1, u2) = (tx.summands[0].user, tx.summands[1].user);
    [
        tx.n as u32,
        tx.coords[0] as u32,
        tx.coords[1] as u32,
        UserRef::from_global(u1, b).index as u32,
        tx.summands[0].subfile,
        UserRef::from_global(u2, b).index as u32,
        tx.summands[1].subfile,
    ]
}

#[test]
fn example_a_reproduces_every_listed_transmission() {
    let started = Instant::now();
    let (topo, f) = example_a();
    assert!(topo.validate().pass);
    let design = Design::construct(2, 4, 1).unwrap();
    let params = SchemeParams::new(2, 4, 2, 1, 8).unwrap();
    let placement = place(&design, &topo, &params, BlockChoice::Deterministic).unwrap();
    let demands: Vec<usize> = (1..=8).collect();
    let tx = delivery(&placement, &f, &demands).unwrap();

    compare(&tx, &listed::EXAMPLE_A, 4, TYPOS_A);
    for s in tx.iter().flat_map(|t| &t.summands) {
        assert_eq!(s.file, demands[s.user - 1]);
    }
    for user in topo.users() {
        let got = decode(user, &placement, &tx, &demands).unwrap();
        assert_eq!(got.len() + placement.cached_subfiles(user).len(), 16);
    }
    assert!(started.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn example_a_demand_graph() {
    let (topo, f) = example_a();
    let design = Design::construct(2, 4, 1).unwrap();
    let params = SchemeParams::new(2, 4, 2, 1, 8).unwrap();
    let placement = place(&design, &topo, &params, BlockChoice::Deterministic).unwrap();
    let graph = DemandGraph::build(&placement, &f).unwrap();
    // f_(i,j)(1), f_(i,j)(2) as listed, per user k(i,j)
    let listed = [
        [[2, 4], [1, 3], [2, 3], [1, 4]],
        [[2, 3], [1, 4], [1, 3], [2, 4]],
    ];
    for (g, maps) in listed.iter().enumerate() {
        for (j, want) in maps.iter().enumerate() {
            let user = UserRef::new(g + 1, j + 1);
            assert_eq!(graph.neighbors(f.cache_of(user)), want, "{user}");
        }
    }
    assert_eq!(graph.uniform_degree(), Some(2));
    assert_eq!(graph.edge_count(), 16);
}

#[test]
fn example_a_simulation() {
    let (topo, f) = example_a();
    let design = Design::construct(2, 4, 1).unwrap();
    let params = SchemeParams::new(2, 4, 2, 1, 8).unwrap();
    let demands: Vec<usize> = (1..=8).collect();
    let sim = simulate_with(
        &design,
        &topo,
        &params,
        &demands,
        PayloadMode::Seeded { seed: 7, size: 32 },
        BlockChoice::Deterministic,
        Some(&f),
    )
    .unwrap();
    let r = &sim.report;
    assert_eq!(r.transmissions, 32);
    assert_eq!(r.subpacketization, 16);
    assert_eq!(r.rate, Ratio::from_integer(2));
    assert_eq!(r.coding_gain, Some(2));
    assert!(r.all_complete && r.pass);
    assert!(r.byte_check.as_ref().unwrap().pass);
}

#[test]
fn example_b_placement_matches_listing() {
    let (topo, _) = example_b();
    assert!(topo.validate().pass);
    let design = Design::construct(2, 7, 1).unwrap();
    assert_eq!(design.block(1, 7), &[43, 44, 45, 46, 47, 48, 49]);
    assert_eq!(design.block(2, 6), &[6, 13, 20, 27, 34, 41, 48]);
    let params = SchemeParams::new(2, 7, 3, 2, 14).unwrap();
    let placement = place(&design, &topo, &params, BlockChoice::Deterministic).unwrap();
    let expected: [&[usize]; 7] = [&[1, 2], &[1, 2], &[3, 4], &[3, 4], &[5, 6], &[5, 6], &[5, 7]];
    for g in 1..=2 {
        for (j, blocks) in expected.iter().enumerate() {
            assert_eq!(placement.cache_blocks(CacheRef::new(g, j + 1)), *blocks);
        }
        for j in 1..=6 {
            assert_eq!(placement.user_blocks(UserRef::new(g, j)), &[1, 2, 3, 4, 5, 6]);
        }
        assert_eq!(placement.user_blocks(UserRef::new(g, 7)), &[1, 2, 3, 4, 5, 7]);
    }
}

#[test]
fn example_b_reproduces_listed_transmissions() {
    let started = Instant::now();
    let (topo, f) = example_b();
    let design = Design::construct(2, 7, 1).unwrap();
    let params = SchemeParams::new(2, 7, 3, 2, 14).unwrap();
    let placement = place(&design, &topo, &params, BlockChoice::Deterministic).unwrap();

    let graph = DemandGraph::build(&placement, &f).unwrap();
    for g in 1..=2 {
        for j in 1..=6 {
            assert_eq!(graph.neighbors(CacheRef::new(g, j)), &[7]);
        }
        assert_eq!(graph.neighbors(CacheRef::new(g, 7)), &[6]);
    }

    let demands: Vec<usize> = (1..=14).collect();
    let tx = delivery(&placement, &f, &demands).unwrap();
    compare(&tx, &listed::EXAMPLE_B, 7, TYPOS_B);
    for user in topo.users() {
        let got = decode(user, &placement, &tx, &demands).unwrap();
        assert_eq!(got.len() + placement.cached_subfiles(user).len(), 49, "{user}");
    }
    assert!(started.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn example_b_simulation() {
    let (topo, f) = example_b();
    let design = Design::construct(2, 7, 1).unwrap();
    let params = SchemeParams::new(2, 7, 3, 2, 14).unwrap();
    let demands: Vec<usize> = (1..=14).collect();
    let sim = simulate_with(
        &design,
        &topo,
        &params,
        &demands,
        PayloadMode::Seeded { seed: 1, size: 16 },
        BlockChoice::Deterministic,
        Some(&f),
    )
    .unwrap();
    let r = &sim.report;
    assert_eq!(r.transmissions, 49);
    assert_eq!(r.subpacketization, 49);
    assert_eq!(r.rate, Ratio::from_integer(1));
    assert_eq!(r.coding_gain, Some(2));
    assert!(r.all_complete && r.pass);
}

#[test]
fn extracted_matching_also_works() {
    let (topo, _) = example_b();
    let f = topo.extract_matchings().unwrap();
    for g in 1..=2 {
        let mut seen = f.group_map(g).to_vec();
        seen.sort_unstable();
        assert_eq!(seen, (1..=7).collect::<Vec<_>>());
    }
    let design = Design::construct(2, 7, 1).unwrap();
    let params = SchemeParams::new(2, 7, 3, 2, 14).unwrap();
    let demands: Vec<usize> = (1..=14).rev().collect();
    let sim = simulate_with(
        &design,
        &topo,
        &params,
        &demands,
        PayloadMode::None,
        BlockChoice::Deterministic,
        Some(&f),
    )
    .unwrap();
    assert!(sim.report.pass);
    assert_eq!(sim.report.transmissions, 49);
}
