//! Checks over enumerated generators and exhaustive small scans.

mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;

use wci::arith::{factorize, lcm_all};
use wci::degree_one::{
    coprime_hypersurface, counting_inequality, in_class_p, is_degree_one, no_prime_power_degrees,
    tilde_reduce,
};
use wci::enumerate::{
    bound_check, enumerate_all, enumerate_kind, semiseries_in_box, weighted_series_in_box, Kind,
    SearchBox,
};
use wci::error::Error;
use wci::invariants::invariants;
use wci::nef::{
    classify_morphism, conjecture_main_check, find_minimal_morphism, find_nef_partition,
    find_preminimal_morphism, is_nef_partition_map, partition_from_map, MorphismClass, Search,
};
use wci::pair::{Family, Pair};
use wci::series::{classify_generator, expand, sigma_c, strip, GeneratorRecord, StripResult};
use wci::smoothness::{all_profiles, check_subset, is_combinatorially_smooth, SubsetProfile};

fn generators(max_r: u64) -> Vec<GeneratorRecord> {
    (0..=max_r)
        .flat_map(|r| enumerate_all(r).unwrap())
        .collect()
}

fn keys(recs: &[GeneratorRecord]) -> BTreeSet<(Vec<u64>, Vec<u64>)> {
    recs.iter()
        .map(|g| (g.family.weights().to_vec(), g.family.degrees().to_vec()))
        .collect()
}

#[test]
fn generator_counts_for_small_variance() {
    let counts: Vec<usize> = (0..=3).map(|r| enumerate_all(r).unwrap().len()).collect();
    assert_eq!(counts, [2, 3, 7, 15]);
}

#[test]
fn generators_are_smooth_of_the_right_variance() {
    for r in 0..=4 {
        for g in enumerate_all(r).unwrap() {
            let pair = g.family.pair();
            assert!(is_combinatorially_smooth(pair).smooth, "{pair:?}");
            assert_eq!(classify_generator(&g.family), g.kind, "{pair:?}");
            assert_eq!(g.report.variance, r as i64);
            assert_eq!(g.report.index, if pair.is_line() { 2 } else { 1 });
        }
    }
}

#[test]
fn enlarged_box_finds_nothing_new() {
    let wide = SearchBox {
        weight_slack: 2,
        codim_slack: 2,
    };
    for r in 1..=3 {
        let base = keys(&weighted_series_in_box(r, SearchBox::default()).unwrap().0);
        assert_eq!(
            keys(&weighted_series_in_box(r, wide).unwrap().0),
            base,
            "series r={r}"
        );
        let base = keys(&semiseries_in_box(r, SearchBox::default()).unwrap().0);
        assert_eq!(
            keys(&semiseries_in_box(r, wide).unwrap().0),
            base,
            "semiseries r={r}"
        );
    }
}

#[test]
fn enumeration_is_deterministic_across_thread_counts() {
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let three = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    for r in 0..=3 {
        let a = keys(&one.install(|| enumerate_all(r).unwrap()));
        let b: Vec<_> = three
            .install(|| enumerate_all(r).unwrap())
            .iter()
            .map(|g| (g.family.weights().to_vec(), g.family.degrees().to_vec()))
            .collect();
        let c: Vec<_> = enumerate_all(r)
            .unwrap()
            .iter()
            .map(|g| (g.family.weights().to_vec(), g.family.degrees().to_vec()))
            .collect();
        assert_eq!(b, c);
        assert_eq!(a, b.into_iter().collect());
    }
}

#[test]
fn no_weighted_generator_has_codimension_above_variance() {
    for r in 0..=7 {
        for g in enumerate_kind(r, Kind::Series).unwrap() {
            if g.family.weights().iter().any(|&a| a > 1) {
                assert!(g.report.codimension <= r as i64, "{:?}", g.family.pair());
            }
        }
    }
    for r in 0..=4 {
        let report = bound_check(r).unwrap();
        assert_eq!(report.series_high_found, 0);
        assert_eq!(report.semiseries_high_found, 0);
    }
}

#[test]
fn multiples_of_h_are_first_type() {
    for g in generators(4) {
        let pair = g.family.pair();
        let top = pair.weights.iter().copied().max().unwrap();
        for h in 2..=top {
            let profile = SubsetProfile::multiples_of(pair, h);
            if profile.size() > 0 {
                assert!(check_subset(pair, &profile).q1, "{pair:?} h={h}");
            }
        }
    }
}

#[test]
fn dropping_quadrics_keeps_subsets_passing() {
    for g in generators(4) {
        let pair = g.family.pair();
        if !pair.degrees.contains(&2) {
            continue;
        }
        let reduced = Pair {
            weights: pair.weights.clone(),
            degrees: pair.degrees.iter().copied().filter(|&d| d != 2).collect(),
        };
        for profile in all_profiles(&reduced) {
            assert!(check_subset(&reduced, &profile).passes(), "{pair:?}");
        }
    }
}

#[test]
fn strip_inverts_expand() {
    let conic = Family::from_lists(&[2], &[1, 1, 1]).unwrap();
    for g in generators(3) {
        let f = &g.family;
        for l in 0..=3 {
            for m in 0..=3 {
                let got = strip(&expand(f, l, m)).unwrap();
                let want = if l == 0 && m == 0 {
                    StripResult::Minimal
                } else if f.pair().is_line() && m > 0 {
                    StripResult::Stripped {
                        generator: conic.clone(),
                        l: l + 1,
                        m: m - 1,
                    }
                } else {
                    StripResult::Stripped {
                        generator: f.clone(),
                        l,
                        m,
                    }
                };
                match (got, want) {
                    (StripResult::Minimal, StripResult::Minimal) => {}
                    (
                        StripResult::Stripped {
                            generator: a,
                            l: la,
                            m: ma,
                        },
                        StripResult::Stripped {
                            generator: b,
                            l: lb,
                            m: mb,
                        },
                    ) => assert_eq!((a.pair(), la, ma), (b.pair(), lb, mb)),
                    (got, _) => panic!("{:?} l={l} m={m}: {got:?}", f.pair()),
                }
            }
        }
    }
}

#[test]
fn series_expansions_stay_smooth() {
    for g in generators(3) {
        if g.report.sporadic {
            continue;
        }
        for l in 0..=3 {
            for m in 0..=3 {
                let x = expand(&g.family, l, m);
                assert!(is_combinatorially_smooth(x.pair()).smooth, "{:?}", x.pair());
            }
        }
    }
}

#[test]
fn quadric_tower_degrees() {
    let entries = sigma_c(2, 4).unwrap();
    let first = &entries[0].family;
    for m in 0..=4u32 {
        let rep = invariants(&first.instantiate(m as u64)).unwrap();
        assert_eq!(
            rep.degree_integer(),
            Some(BigInt::from(9) * BigInt::from(6).pow(m + 1))
        );
    }
}

#[test]
fn small_weights_give_strong_maps() {
    for g in generators(4) {
        let pair = g.family.pair();
        if pair.weights.iter().all(|&a| a < 15) {
            let map = find_preminimal_morphism(pair).unwrap();
            assert!(is_nef_partition_map(pair, &map, true), "{pair:?}");
            let part = partition_from_map(pair, &map).unwrap();
            assert!(part.is_valid(pair) && part.nice, "{pair:?}");
            assert!(conjecture_main_check(&g.family));
        }
    }
}

#[test]
fn minimal_morphisms_have_positive_fiber_slack() {
    for g in generators(4) {
        let pair = g.family.pair();
        if let Search::Found(map) = find_minimal_morphism(pair, false) {
            assert_eq!(classify_morphism(pair, &map), MorphismClass::Minimal);
            let heavy: Vec<usize> = (0..pair.weights.len())
                .filter(|&i| pair.weights[i] > 1)
                .collect();
            for j in 0..pair.degrees.len() {
                let fiber: Vec<u64> = heavy
                    .iter()
                    .filter(|i| map.get(i) == Some(&j))
                    .map(|&i| pair.weights[i])
                    .collect();
                if fiber.len() >= 2 {
                    let sum: u64 = fiber.iter().sum();
                    assert!(lcm_all(&fiber) > sum, "{pair:?} fiber {fiber:?}");
                }
            }
        }
    }
}

#[test]
fn nice_partitions_for_generators() {
    for g in generators(4) {
        let part = find_nef_partition(g.family.pair(), true, false).expect("nice partition");
        assert!(part.is_valid(g.family.pair()));
    }
}

#[test]
fn coprime_hypersurfaces_are_smooth_degree_one() {
    for cs in [&[2u64, 3][..], &[2, 5], &[3, 4], &[2, 3, 5]] {
        let pair = coprime_hypersurface(cs).unwrap();
        let family = Family::new(pair.clone()).unwrap();
        assert!(is_combinatorially_smooth(&pair).smooth, "{pair:?}");
        assert!(is_degree_one(&family), "{pair:?}");
    }
}

const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// Remaining `p`-adic levels: `count[prime][exponent]`.
type Levels = [[u8; 5]; 10];

fn level_parts(d: u64) -> Vec<(usize, usize)> {
    factorize(d)
        .into_iter()
        .map(|(p, e)| (PRIMES.iter().position(|&q| q == p).unwrap(), e as usize))
        .collect()
}

/// Degree multisets in `2..=30`, at most six, whose `p`-adic levels use up
/// exactly the remaining levels of the weights. Regular pairs with equal
/// products are exactly those with matching levels, so every class member is
/// listed. Each step covers the largest remaining level; degrees covering the
/// same level come in non-increasing order, which makes the listing unique.
fn level_matched(
    parts: &[Vec<(usize, usize)>],
    levels: &mut Levels,
    left: &mut [usize; 10],
    prev: (usize, usize, u64),
    acc: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    let need = *left.iter().max().unwrap();
    if need == 0 {
        out.push(acc.clone());
        return;
    }
    if need > 6 - acc.len() {
        return;
    }
    let p = (0..10).rev().find(|&p| left[p] > 0).unwrap();
    let e = (1..5).rev().find(|&e| levels[p][e] > 0).unwrap();
    let top = if (p, e) == (prev.0, prev.1) {
        prev.2
    } else {
        30
    };
    for d in 2..=top {
        let f = &parts[d as usize];
        if !f.contains(&(p, e)) || !f.iter().all(|&(q, x)| levels[q][x] > 0) {
            continue;
        }
        for &(q, x) in f {
            levels[q][x] -= 1;
            left[q] -= 1;
        }
        acc.push(d);
        level_matched(parts, levels, left, (p, e, d), acc, out);
        acc.pop();
        for &(q, x) in f {
            levels[q][x] += 1;
            left[q] += 1;
        }
    }
}

/// Every product-balanced class member with heavy weights and degrees in
/// `2..=30`, at most six of each: the counting inequality holds, equality
/// without full cancellation only happens when cancelling leaves the class,
/// and no degree is a prime power when no degree equals a weight.
#[test]
fn product_class_scan() {
    fn heavy_sets(min: u64, left: usize, acc: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        visit(acc);
        if left == 0 {
            return;
        }
        for a in min..=30 {
            acc.push(a);
            heavy_sets(a, left - 1, acc, visit);
            acc.pop();
        }
    }
    let parts: Vec<Vec<(usize, usize)>> = (0..=30)
        .map(|d| if d < 2 { Vec::new() } else { level_parts(d) })
        .collect();
    let mut members = 0u64;
    let mut uncancelled = 0u64;
    let mut visit = |heavy: &[u64]| {
        if heavy.is_empty() {
            return;
        }
        let mut levels: Levels = [[0; 5]; 10];
        let mut left = [0usize; 10];
        for &a in heavy {
            for &(p, e) in &parts[a as usize] {
                levels[p][e] += 1;
                left[p] += 1;
            }
        }
        let mut degree_sets = Vec::new();
        level_matched(
            &parts,
            &mut levels,
            &mut left,
            (usize::MAX, 0, 0),
            &mut Vec::new(),
            &mut degree_sets,
        );
        for degrees in degree_sets {
            let mut weights = vec![1];
            weights.extend(heavy);
            let pair = Pair { weights, degrees };
            let report = match counting_inequality(&pair) {
                Err(Error::NotInClassP) => continue,
                other => other.unwrap(),
            };
            members += 1;
            assert!(report.lhs >= report.rhs, "{pair:?}");
            if report.lhs == report.rhs && !report.cancels {
                let (d, w) = tilde_reduce(&pair);
                let mut rest = vec![1];
                rest.extend(w.into_iter().filter(|&a| a > 1));
                assert!(
                    !in_class_p(&Pair {
                        weights: rest,
                        degrees: d
                    }),
                    "{pair:?}"
                );
                uncancelled += 1;
            }
            if !pair.degrees.iter().any(|d| pair.weights.contains(d)) {
                assert!(no_prime_power_degrees(&pair), "{pair:?}");
            }
        }
    };
    heavy_sets(2, 6, &mut Vec::new(), &mut visit);
    assert!(members > 0);
    // equality without cancellation does occur, e.g. (2^5,12; 1,2^4,4,6)
    assert!(uncancelled > 0);
}
