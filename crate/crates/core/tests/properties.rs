use std::collections::BTreeSet;

use macc_core::analysis::{
    lemma_predicates, our_corner_points, rival_curve, rival_rate, sr1_lemma,
};
use macc_core::engine::{achievable_rate, place, simulate_with, PayloadMode};
use macc_core::topology::{cache_cell, canonical_topology, random_topology};
use macc_core::{BlockChoice, CacheRef, Design, SchemeId, SchemeParams};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(m, b, mu)` with `mu b^m <= 10^4`.
fn design_shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=5, 1usize..=12, 1usize..=3)
        .prop_filter("point budget", |&(m, b, mu)| mu * b.pow(m as u32) <= 10_000)
}

/// `(m, b, z, t)` with `b^m <= 5000` and `t` up to the zero-rate point.
fn scheme_shape() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1usize..=4, 2usize..=12)
        .prop_filter("size", |&(m, b)| b.pow(m as u32) <= 5000)
        .prop_flat_map(|(m, b)| (Just(m), Just(b), 1..=b))
        .prop_flat_map(|(m, b, z)| {
            let last = b - (z - 1) * (b / z);
            (Just(m), Just(b), Just(z), 1..=last)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_designs_verify((m, b, mu) in design_shape()) {
        let d = Design::construct(m, b, mu).unwrap();
        let r = d.verify();
        prop_assert!(r.pass);
        prop_assert_eq!(r.measured_mu, Some(mu));
        prop_assert_eq!(r.uniform_block_size, Some(mu * b.pow(m as u32 - 1)));
        prop_assert_eq!(d.num_points(), mu * b.pow(m as u32));
        prop_assert_eq!(d.quick_mu(), Some(mu));
        for i in 1..=m {
            for j in 1..=b {
                prop_assert!(d.block_cover_check(i, j));
            }
        }
    }

    #[test]
    fn quick_mu_agrees_with_exhaustive_scan(
        (m, b, mu) in design_shape().prop_filter("two blocks", |s| s.1 >= 2),
        class in any::<prop::sample::Index>(),
        from in any::<prop::sample::Index>(),
        to in any::<prop::sample::Index>(),
        pick in any::<prop::sample::Index>(),
        duplicate in any::<bool>(),
    ) {
        let d = Design::construct(m, b, mu).unwrap();
        let mut classes = d.classes().to_vec();
        let i = class.index(m);
        let src = from.index(b);
        let dst = (src + 1 + to.index(b - 1)) % b;
        let k = pick.index(classes[i][src].len());
        let p = if duplicate { classes[i][src][k] } else { classes[i][src].remove(k) };
        classes[i][dst].push(p);
        let bent = Design::from_classes(m, b, mu, classes).unwrap();
        let scan = bent.verify();
        let quick = bent.quick_mu();
        if scan.classes_partition.iter().all(|&ok| ok) {
            prop_assert_eq!(quick, scan.measured_mu);
        } else {
            prop_assert_eq!(quick, None);
        }
        prop_assert!(!scan.pass);
    }

    #[test]
    fn topologies_validate_and_match((m, b, z, _t) in scheme_shape(), seed in any::<u64>()) {
        prop_assert!(canonical_topology(m, b, z).unwrap().validate().pass);
        let topo = random_topology(m, b, z, seed).unwrap();
        prop_assert!(topo.validate().pass);
        let f = topo.extract_matchings().unwrap();
        for g in 1..=m {
            let image: BTreeSet<usize> = f.group_map(g).iter().copied().collect();
            prop_assert_eq!(image.len(), b);
        }
        for user in topo.users() {
            let c = f.cache_of(user);
            prop_assert!(topo.access(user).contains(&c));
            prop_assert_eq!(f.user_of(c), user);
        }
    }

    #[test]
    fn placement_respects_cells_and_memory(
        (m, b, z, t) in scheme_shape(),
        seed in any::<u64>(),
        n_files in 1usize..=5,
    ) {
        let d = Design::construct(m, b, 1).unwrap();
        let topo = random_topology(m, b, z, seed).unwrap();
        let params = SchemeParams::new(m, b, z, t, n_files).unwrap();
        let pl = place(&d, &topo, &params, BlockChoice::Seeded(seed)).unwrap();
        let budget = t * b.pow(m as u32 - 1) * n_files;
        for id in 1..=m * b {
            let c = CacheRef::from_global(id, b);
            let blocks = pl.cache_blocks(c);
            prop_assert!(blocks.contains(&c.index));
            let cell = cache_cell(c.index, b, z).unwrap();
            for &l in blocks {
                prop_assert_eq!(cache_cell(l, b, z).unwrap(), cell);
            }
            prop_assert!(pl.stored_subfiles(c) <= budget);
        }
    }

    #[test]
    fn three_way_rate_agreement((m, b, z, t) in scheme_shape(), seed in any::<u64>()) {
        let d = Design::construct(m, b, 1).unwrap();
        let topo = random_topology(m, b, z, seed).unwrap();
        let params = SchemeParams::new(m, b, z, t, m * b).unwrap();
        let demands: Vec<usize> = (1..=m * b).collect();
        let sim = simulate_with(&d, &topo, &params, &demands, PayloadMode::None,
            BlockChoice::Seeded(seed), None).unwrap();
        prop_assert!(sim.report.pass);
        let want = achievable_rate(b, m, z, t).unwrap();
        prop_assert_eq!(sim.report.rate, want);
        let corner = our_corner_points(m * b, z).unwrap().into_iter()
            .find(|p| p.provenance.b == Some(b) && p.provenance.t == Some(t))
            .unwrap();
        prop_assert_eq!(corner.memory, q(t as i64, b as i64));
        prop_assert_eq!(corner.rate, q(*want.numer() as i64, 1));
    }
}

fn divisors(k: usize) -> impl Iterator<Item = usize> {
    (1..=k).filter(move |d| k % d == 0)
}

#[test]
fn envelope_is_monotone_and_convex() {
    for k in 1..=120 {
        for z in 1..=k.min(12) {
            let env = rival_curve(SchemeId::Ours, k, z).unwrap();
            let pts = env.points();
            assert_eq!(pts[0].memory, q(0, 1));
            assert_eq!(pts[0].rate, q(k as i64, 1));
            assert_eq!(pts.last().unwrap().rate, q(0, 1));
            for w in pts.windows(2) {
                assert!(w[0].memory < w[1].memory);
                assert!(w[0].rate >= w[1].rate);
            }
            for w in pts.windows(3) {
                let s1 = (&w[1].rate - &w[0].rate) / (&w[1].memory - &w[0].memory);
                let s2 = (&w[2].rate - &w[1].rate) / (&w[2].memory - &w[1].memory);
                assert!(s1 < s2, "K={k} z={z}");
            }
            let grid: Vec<BigRational> = (0..=40).map(|i| q(i, 40)).collect();
            let vals: Vec<BigRational> = grid.iter().map(|x| env.eval(x)).collect();
            for w in vals.windows(3) {
                assert!(w[0] >= w[1]);
                assert!(&w[0] + &w[2] >= &w[1] * q(2, 1));
            }
        }
    }
}

fn sr1_grid() -> impl Iterator<Item = (i64, i64, i64)> {
    (2..=120i64).flat_map(|k| {
        (1..=k.min(10)).flat_map(move |z| {
            (1..=k).filter_map(move |t| {
                let kt = k - t * z;
                (kt > 1 && t.gcd(&k) == 1 && t * z + 1 != k).then_some((k, z, t))
            })
        })
    })
}

fn sr1(k: i64, z: i64, t: i64) -> BigRational {
    rival_rate(SchemeId::Sr1, k as usize, z as usize, t as usize).unwrap()
}

#[test]
fn sr1_never_beats_the_halved_bound() {
    // Only (K - t''z)/2 terms survive in the sum, each at least
    // (K - t''z + 2)/(K + 2).
    for (k, z, t) in sr1_grid() {
        let kt = k - t * z;
        assert!(sr1(k, z, t) >= q(kt * (kt + 2), 2 * (k + 2)), "K={k} z={z} t={t}");
    }
}

#[test]
fn sr1_full_bound_fails_on_the_worked_example() {
    assert_eq!(sr1(100, 5, 7), q(32, 1));
    assert!(q(65 * 67, 102) > q(32, 1));
    let below = sr1_grid()
        .filter(|&(k, z, t)| {
            let kt = k - t * z;
            sr1(k, z, t) < q(kt * (kt + 2), k + 2)
        })
        .count();
    assert!(below > 0);
}

#[test]
fn lemmas_hold_whenever_they_fire() {
    let mut fired = 0;
    for k in 2..=200 {
        for z in 2..=k.min(8) {
            for b in divisors(k).filter(|&b| b >= z) {
                let m = k / b;
                for t in 1..=b - (z - 1) * (b / z) {
                    let r = lemma_predicates(k, z, m, b, t).unwrap();
                    for c in r.all() {
                        assert!(c.consistent(), "K={k} z={z} b={b} t={t}: {c:?}");
                        fired += usize::from(c.confirmed.is_some());
                    }
                }
            }
        }
    }
    assert!(fired > 100);
}

/// The SR1 lemma inherits the full bound, so it can fire where SR1 is in
/// fact lower. Every such miss must sit where that bound exceeds SR1.
#[test]
fn sr1_lemma_misses_trace_back_to_the_bound() {
    let (mut fired, mut missed) = (0, 0);
    for k in 2..=200usize {
        for z in 2..=k.min(8) {
            let ms: Vec<usize> = divisors(k).filter(|&m| k / m >= z).collect();
            for (i, &m1) in ms.iter().enumerate() {
                for &m2 in &ms[i + 1..] {
                    for num in 0..=4 {
                        let lambda = q(num, 4);
                        let c = sr1_lemma(k, z, m1, m2, &lambda).unwrap();
                        let Some(ok) = c.confirmed else { continue };
                        fired += 1;
                        if ok {
                            continue;
                        }
                        missed += 1;
                        let t = m1 as i64 + num * (m2 - m1) as i64 / 4;
                        let kt = k as i64 - t * z as i64;
                        let full = q(kt * (kt + 2), k as i64 + 2);
                        let rival = sr1(k as i64, z as i64, t);
                        assert!(full > rival, "K={k} z={z} m1={m1} m2={m2}: {c:?}");
                    }
                }
            }
        }
    }
    assert!(fired > 100);
    assert!(missed > 0);
    let c = sr1_lemma(12, 2, 4, 6, &q(1, 2)).unwrap();
    assert_eq!((c.ours.as_deref(), c.rival.as_deref()), (Some("1/2"), Some("1/3")));
    assert_eq!(c.confirmed, Some(false));
}
