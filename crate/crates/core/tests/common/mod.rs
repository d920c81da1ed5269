//! Brute-force references shared by the integration tests. Nothing here calls
//! the search code it is compared against.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigUint;
use wci::arith::{gcd_all, lcm_all};
use wci::pair::Pair;

/// Coin-problem check by plain recursion over the basis.
pub fn combination_exists(target: u64, basis: &[u64]) -> bool {
    fn go(t: u64, basis: &[u64]) -> bool {
        match basis.split_first() {
            None => t == 0,
            Some((&b, rest)) => (0..=t / b).any(|c| go(t - c * b, rest)),
        }
    }
    let mut b: Vec<u64> = basis.to_vec();
    b.sort_unstable();
    b.dedup();
    go(target, &b)
}

/// Largest subset size for each gcd value above one.
pub fn subset_gcd_sizes(weights: &[u64]) -> BTreeMap<u64, usize> {
    let n = weights.len();
    let mut out = BTreeMap::new();
    for mask in 1u32..1 << n {
        let sub: Vec<u64> = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| weights[i])
            .collect();
        let g = gcd_all(&sub);
        if g > 1 {
            let e = out.entry(g).or_insert(0);
            *e = (*e).max(sub.len());
        }
    }
    out
}

/// Subset form of regularity: every weight subset with gcd `g > 1` has at
/// least as many degrees divisible by `g` as it has elements.
pub fn regular_by_subsets(pair: &Pair) -> bool {
    subset_gcd_sizes(&pair.weights)
        .iter()
        .all(|(&g, &size)| pair.degrees.iter().filter(|&&d| d % g == 0).count() >= size)
}

/// How the coefficients in the second subset condition may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    /// Each matrix entry has its own representation.
    PerEntry,
    /// One representation per column, so a column holds a single weight value.
    SharedPerColumn,
}

fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if items.len() < r {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], r - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn covering(cols: &[Vec<usize>], s: usize) -> bool {
    (1u32..1 << cols.len()).all(|jmask| {
        let mut touched: Vec<usize> = (0..cols.len())
            .filter(|&c| jmask >> c & 1 == 1)
            .flat_map(|c| cols[c].iter().copied())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        touched.len() + 1 >= s + jmask.count_ones() as usize
    })
}

fn some_matrix(options: &[Vec<Vec<usize>>], chosen: &mut Vec<Vec<usize>>, s: usize) -> bool {
    if chosen.len() == options.len() {
        return covering(chosen, s);
    }
    for col in &options[chosen.len()] {
        chosen.push(col.clone());
        if some_matrix(options, chosen, s) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// `(q1, q2)` for an explicit index subset by exhaustive search over the
/// representable degrees, the choice of `l`, and every e-matrix.
pub fn brute_q(pair: &Pair, subset: &[usize], reading: Reading) -> (bool, bool) {
    let g = subset.len();
    let k = pair.degrees.len();
    let rho = k.min(g);
    if rho == 0 {
        return (true, false);
    }
    let basis: Vec<u64> = subset.iter().map(|&i| pair.weights[i]).collect();
    let rep = |t: u64| combination_exists(t, &basis);
    let rep_deg: Vec<usize> = (0..k).filter(|&j| rep(pair.degrees[j])).collect();
    let q1 = rep_deg.len() >= rho;
    let complement: Vec<usize> = (0..pair.weights.len())
        .filter(|i| !subset.contains(i))
        .collect();
    for l in 0..rho {
        let s = g - l;
        for lset in combinations(&rep_deg, l) {
            let rest: Vec<usize> = (0..k).filter(|j| !lset.contains(j)).collect();
            let options: Vec<Vec<Vec<usize>>> = rest
                .iter()
                .map(|&j| {
                    let d = pair.degrees[j];
                    let cand: Vec<usize> = complement
                        .iter()
                        .copied()
                        .filter(|&e| d >= pair.weights[e] && rep(d - pair.weights[e]))
                        .collect();
                    combinations(&cand, s)
                        .into_iter()
                        .filter(|col| {
                            reading == Reading::PerEntry
                                || col.iter().all(|&e| pair.weights[e] == pair.weights[col[0]])
                        })
                        .collect()
                })
                .collect();
            if some_matrix(&options, &mut Vec::new(), s) {
                return (q1, true);
            }
        }
    }
    (q1, false)
}

/// Smoothness from the definitions: regular by subsets, no degree equal to a
/// weight, and every index subset passes one of the two conditions.
pub fn brute_smooth(pair: &Pair, reading: Reading) -> bool {
    if !regular_by_subsets(pair) || pair.degrees.iter().any(|d| pair.weights.contains(d)) {
        return false;
    }
    let n = pair.weights.len();
    (0u32..1 << n).all(|mask| {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let (q1, q2) = brute_q(pair, &subset, reading);
        q1 || q2
    })
}

/// Every map from the weights above one to the degrees, checked for slack.
pub fn nef_map_exists(pair: &Pair, strong: bool) -> bool {
    let heavy: Vec<u64> = pair.weights.iter().copied().filter(|&a| a > 1).collect();
    let k = pair.degrees.len();
    if heavy.is_empty() {
        return true;
    }
    if k == 0 {
        return false;
    }
    let min = if strong { 1 } else { 0 };
    let total = k.pow(heavy.len() as u32);
    (0..total).any(|mut code| {
        let mut slack: Vec<i64> = pair.degrees.iter().map(|&d| d as i64).collect();
        for &a in &heavy {
            slack[code % k] -= a as i64;
            code /= k;
        }
        slack.iter().all(|&s| s >= min)
    })
}

/// Every assignment of all indices to blocks `S_0..S_k`.
pub fn nef_partition_exists(pair: &Pair, nice: bool) -> bool {
    let k = pair.degrees.len();
    let n = pair.weights.len();
    let total = (k + 1).pow(n as u32);
    (0..total).any(|mut code| {
        let mut sums = vec![0u64; k + 1];
        let mut unit_free = false;
        for &a in &pair.weights {
            let b = code % (k + 1);
            code /= k + 1;
            sums[b] += a;
            if b == 0 && a == 1 {
                unit_free = true;
            }
        }
        (1..=k).all(|j| sums[j] == pair.degrees[j - 1]) && (unit_free || !nice)
    })
}

pub fn products_equal(pair: &Pair) -> bool {
    let p = |xs: &[u64]| xs.iter().fold(BigUint::from(1u32), |acc, &x| acc * x);
    p(&pair.weights) == p(&pair.degrees)
}

/// Pre-minimal: no element divides a different one.
pub fn pre_minimal(values: &[u64]) -> bool {
    values
        .iter()
        .all(|&a| values.iter().all(|&b| a == b || b % a != 0))
}

pub fn lcm_minus_sum(values: &[u64]) -> i128 {
    lcm_all(values) as i128 - values.iter().map(|&v| v as i128).sum::<i128>()
}
