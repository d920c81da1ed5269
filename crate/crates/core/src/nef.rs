//! Weighted simplicial complexes on the non-unit entries of a pair, maps
//! between them, and nef partitions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::{factorize, gcd, gcd_all, lcm_all};
use crate::error::{Error, Result};
use crate::pair::{Family, Pair};

/// Vertices are the indices of entries `> 1`; a vertex set spans a simplex
/// iff the gcd of its weights exceeds one. Simplices are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WsComplex {
    /// Index into the source list for each vertex.
    pub vertices: Vec<usize>,
    /// Weight of each vertex, parallel to `vertices`.
    pub weights: Vec<u64>,
}

impl WsComplex {
    pub fn from_entries(entries: &[u64]) -> WsComplex {
        let vertices: Vec<usize> = (0..entries.len()).filter(|&i| entries[i] > 1).collect();
        let weights = vertices.iter().map(|&i| entries[i]).collect();
        WsComplex { vertices, weights }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `subset` holds positions into `vertices`.
    pub fn is_simplex(&self, subset: &[usize]) -> bool {
        !subset.is_empty()
            && gcd_all(&subset.iter().map(|&v| self.weights[v]).collect::<Vec<_>>()) > 1
    }

    /// Distinct weight values, ascending.
    pub fn value_set(&self) -> Vec<u64> {
        let s: BTreeSet<u64> = self.weights.iter().copied().collect();
        s.into_iter().collect()
    }

    /// Values in the complex divisible by `b`, including `b` itself.
    pub fn down_set(&self, b: u64) -> Vec<u64> {
        self.value_set()
            .into_iter()
            .filter(|c| c % b == 0)
            .collect()
    }

    /// Generators of the intersection of two down-sets: its elements with no
    /// proper divisor inside it. The intersection is the union of their
    /// down-sets.
    pub fn down_set_intersection(&self, b: u64, c: u64) -> Vec<u64> {
        let common: Vec<u64> = self
            .down_set(b)
            .into_iter()
            .filter(|x| x % c == 0)
            .collect();
        common
            .iter()
            .copied()
            .filter(|&x| !common.iter().any(|&y| y != x && x % y == 0))
            .collect()
    }

    /// Length of the longest chain of proper multiples above each value.
    pub fn heights(&self) -> BTreeMap<u64, usize> {
        let values = self.value_set();
        let mut h = BTreeMap::new();
        for &b in values.iter().rev() {
            let above = values
                .iter()
                .filter(|&&c| c != b && c % b == 0)
                .map(|c| h[c] + 1)
                .max()
                .unwrap_or(0);
            h.insert(b, above);
        }
        h
    }
}

/// `(degree complex, weight complex)`.
pub fn complex_from_pair(pair: &Pair) -> (WsComplex, WsComplex) {
    (
        WsComplex::from_entries(&pair.degrees),
        WsComplex::from_entries(&pair.weights),
    )
}

/// Weight index to degree index, defined on the weights `> 1`.
pub type VertexMap = BTreeMap<usize, usize>;

fn heavy_indices(pair: &Pair) -> Vec<usize> {
    (0..pair.weights.len())
        .filter(|&i| pair.weights[i] > 1)
        .collect()
}

fn domain_ok(pair: &Pair, map: &VertexMap) -> bool {
    map.keys().copied().eq(heavy_indices(pair)) && map.values().all(|&j| j < pair.degrees.len())
}

/// `d_j` minus the weights sent to `j`.
pub fn slacks(pair: &Pair, map: &VertexMap) -> Vec<i64> {
    let mut s: Vec<i64> = pair.degrees.iter().map(|&d| d as i64).collect();
    for (&i, &j) in map {
        s[j] -= pair.weights[i] as i64;
    }
    s
}

/// Non-negative slack everywhere, or positive slack when `strong`.
pub fn is_nef_partition_map(pair: &Pair, map: &VertexMap, strong: bool) -> bool {
    let min = if strong { 1 } else { 0 };
    domain_ok(pair, map) && slacks(pair, map).iter().all(|&s| s >= min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetVerdict {
    NotPreMinimal,
    PreMinimal,
    Minimal,
}

/// Lcm of the pairwise gcds; 1 for fewer than two values.
fn pairwise_gcd_lcm(values: &[u64]) -> u64 {
    let mut h = 1;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            h = lcm_all(&[h, gcd(values[i], values[j])]);
        }
    }
    h
}

/// Pre-minimal: no value divides another. Minimal: additionally no value
/// divides the lcm of the pairwise gcds. Repeated values are not pre-minimal.
pub fn check_minimal_set(values: &[u64]) -> SetVerdict {
    for i in 0..values.len() {
        for j in 0..values.len() {
            if i != j && values[j].is_multiple_of(values[i]) {
                return SetVerdict::NotPreMinimal;
            }
        }
    }
    let h = pairwise_gcd_lcm(values);
    if values.iter().all(|&a| !h.is_multiple_of(a)) {
        SetVerdict::Minimal
    } else {
        SetVerdict::PreMinimal
    }
}

/// `lcm - sum` of a value set.
pub fn lcm_slack(values: &[u64]) -> i128 {
    lcm_all(values) as i128 - values.iter().map(|&v| v as i128).sum::<i128>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismClass {
    NotWs,
    Ws,
    PreMinimal,
    Minimal,
}

fn fibers(pair: &Pair, map: &VertexMap) -> Vec<Vec<u64>> {
    let mut f = vec![Vec::new(); pair.degrees.len()];
    for (&i, &j) in map {
        f[j].push(pair.weights[i]);
    }
    f
}

/// A WS-morphism sends every weight to a degree it divides. Its class is the
/// weakest verdict over the fibers.
pub fn classify_morphism(pair: &Pair, map: &VertexMap) -> MorphismClass {
    if !domain_ok(pair, map)
        || map
            .iter()
            .any(|(&i, &j)| !pair.degrees[j].is_multiple_of(pair.weights[i]))
    {
        return MorphismClass::NotWs;
    }
    fibers(pair, map)
        .iter()
        .filter(|f| !f.is_empty())
        .map(|f| match check_minimal_set(f) {
            SetVerdict::NotPreMinimal => MorphismClass::Ws,
            SetVerdict::PreMinimal => MorphismClass::PreMinimal,
            SetVerdict::Minimal => MorphismClass::Minimal,
        })
        .min()
        .unwrap_or(MorphismClass::Minimal)
}

const NODE_BUDGET: u64 = 5_000_000;

/// Depth-first search for a WS-morphism whose fibers satisfy `accept`.
struct MapSearch<'a, F: Fn(&[u64], u64, u64) -> bool> {
    pair: &'a Pair,
    order: Vec<usize>,
    fibers: Vec<Vec<u64>>,
    assign: Vec<usize>,
    accept: F,
    prefer_slack: bool,
    nodes: u64,
}

impl<F: Fn(&[u64], u64, u64) -> bool> MapSearch<'_, F> {
    fn run(&mut self, pos: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return None;
        }
        if pos == self.order.len() {
            return Some(true);
        }
        let i = self.order[pos];
        let v = self.pair.weights[i];
        let degrees = &self.pair.degrees;
        let mut cands: Vec<usize> = (0..degrees.len())
            .filter(|&j| {
                degrees[j].is_multiple_of(v) && (self.accept)(&self.fibers[j], v, degrees[j])
            })
            .collect();
        // a repeated value continues after the previous copy's target
        if pos > 0 && self.pair.weights[self.order[pos - 1]] == v {
            let prev = self.assign[pos - 1];
            cands.retain(|&j| j > prev);
        }
        // degrees of equal value with equal fibers are interchangeable
        let mut seen: BTreeSet<(u64, Vec<u64>)> = BTreeSet::new();
        cands.retain(|&j| seen.insert((degrees[j], self.fibers[j].clone())));
        if self.prefer_slack {
            let slack = |j: usize| degrees[j] as i64 - self.fibers[j].iter().sum::<u64>() as i64;
            cands.sort_by_key(|&j| (std::cmp::Reverse(slack(j)), j));
        }
        for j in cands {
            self.fibers[j].push(v);
            self.assign[pos] = j;
            let r = self.run(pos + 1);
            self.fibers[j].pop();
            match r {
                Some(false) => continue,
                other => return other,
            }
        }
        Some(false)
    }

    fn map(&self) -> VertexMap {
        self.order
            .iter()
            .copied()
            .zip(self.assign.iter().copied())
            .collect()
    }
}

/// Outcome of a morphism search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "map", rename_all = "snake_case")]
pub enum Search {
    Found(VertexMap),
    Exhausted,
    GaveUp,
}

fn search<F: Fn(&[u64], u64, u64) -> bool>(
    pair: &Pair,
    order: Vec<usize>,
    accept: F,
    prefer_slack: bool,
) -> Search {
    let n = order.len();
    let mut s = MapSearch {
        pair,
        order,
        fibers: vec![Vec::new(); pair.degrees.len()],
        assign: vec![0; n],
        accept,
        prefer_slack,
        nodes: 0,
    };
    match s.run(0) {
        Some(true) => Search::Found(s.map()),
        Some(false) => Search::Exhausted,
        None => Search::GaveUp,
    }
}

/// Heavy weight indices by increasing height, larger values first.
fn height_order(pair: &Pair) -> Vec<usize> {
    let (_, weights) = complex_from_pair(pair);
    let h = weights.heights();
    let mut order = heavy_indices(pair);
    order.sort_by_key(|&i| (h[&pair.weights[i]], std::cmp::Reverse(pair.weights[i]), i));
    order
}

/// A morphism whose fibers hold pairwise non-dividing distinct values.
/// Values are placed in increasing height, so each value only meets its
/// already-placed proper multiples; on a regular pair the first branch
/// succeeds.
pub fn find_preminimal_morphism(pair: &Pair) -> Result<VertexMap> {
    let accept =
        |fiber: &[u64], v: u64, _d: u64| fiber.iter().all(|&u| u % v != 0 && !v.is_multiple_of(u));
    match search(pair, height_order(pair), accept, true) {
        Search::Found(m) => Ok(m),
        Search::Exhausted => Err(Error::Unsat("no pre-minimal morphism exists".into())),
        Search::GaveUp => Err(Error::Unsat("pre-minimal search budget exhausted".into())),
    }
}

fn omega(n: u64) -> usize {
    factorize(n).len()
}

/// Searches WS-morphisms with minimal fibers. Fibers are capped at the number
/// of distinct primes of the target degree unless `brute_force` is set.
pub fn find_minimal_morphism(pair: &Pair, brute_force: bool) -> Search {
    let mut order = heavy_indices(pair);
    order.sort_by_key(|&i| (std::cmp::Reverse(pair.weights[i]), i));
    let accept = move |fiber: &[u64], v: u64, d: u64| {
        if !brute_force && fiber.len() + 1 > omega(d) {
            return false;
        }
        let mut f = fiber.to_vec();
        f.push(v);
        check_minimal_set(&f) == SetVerdict::Minimal
    };
    search(pair, order, accept, false)
}

/// Blocks `S_0..S_k` of weight indices; block `j >= 1` sums to `d_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NefPartition {
    pub blocks: Vec<Vec<usize>>,
    pub nice: bool,
}

impl NefPartition {
    pub fn is_valid(&self, pair: &Pair) -> bool {
        let mut seen: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        seen.sort_unstable();
        if self.blocks.len() != pair.degrees.len() + 1
            || !seen.iter().copied().eq(0..pair.weights.len())
        {
            return false;
        }
        let sums_ok = pair
            .degrees
            .iter()
            .zip(&self.blocks[1..])
            .all(|(&d, b)| b.iter().map(|&i| pair.weights[i]).sum::<u64>() == d);
        let nice = self.blocks[0].iter().any(|&i| pair.weights[i] == 1);
        sums_ok && nice == self.nice
    }
}

/// Fills each heavy assignment with unit weights up to the degree; leftover
/// units go to `S_0`. `heavy_block[i]` is `0` for `S_0` or `j + 1`.
fn fill_with_units(pair: &Pair, heavy_block: &BTreeMap<usize, usize>) -> Option<NefPartition> {
    let k = pair.degrees.len();
    let mut blocks = vec![Vec::new(); k + 1];
    let mut sums = vec![0u64; k + 1];
    for (&i, &b) in heavy_block {
        blocks[b].push(i);
        sums[b] += pair.weights[i];
    }
    let mut units = (0..pair.weights.len()).filter(|&i| pair.weights[i] == 1);
    for j in 0..k {
        let need = pair.degrees[j].checked_sub(sums[j + 1])?;
        for _ in 0..need {
            blocks[j + 1].push(units.next()?);
        }
    }
    blocks[0].extend(units);
    let nice = blocks[0].iter().any(|&i| pair.weights[i] == 1);
    for b in &mut blocks {
        b.sort_unstable();
    }
    Some(NefPartition { blocks, nice })
}

/// Partition built from a nef partition map.
pub fn partition_from_map(pair: &Pair, map: &VertexMap) -> Option<NefPartition> {
    if !is_nef_partition_map(pair, map, false) {
        return None;
    }
    let heavy: BTreeMap<usize, usize> = map.iter().map(|(&i, &j)| (i, j + 1)).collect();
    fill_with_units(pair, &heavy)
}

/// Exact search over the heavy weights; unit weights fill the remaining
/// demand. `nice` requires a unit left in `S_0`; `s0_units_only` keeps heavy
/// weights out of `S_0`.
pub fn find_nef_partition(pair: &Pair, nice: bool, s0_units_only: bool) -> Option<NefPartition> {
    let mut heavy = heavy_indices(pair);
    heavy.sort_by_key(|&i| (std::cmp::Reverse(pair.weights[i]), i));
    let ones = pair.ones() as u64;
    let k = pair.degrees.len();
    let mut sums = vec![0u64; k + 1];
    let mut assign = vec![0usize; heavy.len()];
    let rest: Vec<u64> = (0..=heavy.len())
        .map(|p| heavy[p..].iter().map(|&i| pair.weights[i]).sum())
        .collect();

    #[allow(clippy::too_many_arguments)]
    fn go(
        pos: usize,
        pair: &Pair,
        heavy: &[usize],
        rest: &[u64],
        sums: &mut [u64],
        assign: &mut [usize],
        ones: u64,
        nice: bool,
        s0_units_only: bool,
    ) -> bool {
        let k = pair.degrees.len();
        // demand that only the remaining heavy weights or units can cover
        let deficit: u64 = (0..k).map(|j| pair.degrees[j] - sums[j + 1]).sum();
        let spare_units = if nice { ones.saturating_sub(1) } else { ones };
        if (nice && ones == 0) || deficit > rest[pos] + spare_units {
            return false;
        }
        if pos == heavy.len() {
            return deficit <= spare_units;
        }
        let v = pair.weights[heavy[pos]];
        let lo = if pos > 0 && pair.weights[heavy[pos - 1]] == v {
            assign[pos - 1]
        } else {
            0
        };
        let start = if s0_units_only { lo.max(1) } else { lo };
        let mut tried: BTreeSet<(u64, u64)> = BTreeSet::new();
        for b in start..=k {
            if b > 0 {
                let d = pair.degrees[b - 1];
                if sums[b] + v > d || !tried.insert((d, sums[b])) {
                    continue;
                }
            }
            sums[b] += v;
            assign[pos] = b;
            let ok = go(
                pos + 1,
                pair,
                heavy,
                rest,
                sums,
                assign,
                ones,
                nice,
                s0_units_only,
            );
            sums[b] -= v;
            if ok {
                return true;
            }
        }
        false
    }

    if !go(
        0,
        pair,
        &heavy,
        &rest,
        &mut sums,
        &mut assign,
        ones,
        nice,
        s0_units_only,
    ) {
        return None;
    }
    let blocks: BTreeMap<usize, usize> = heavy.iter().copied().zip(assign).collect();
    let p = fill_with_units(pair, &blocks)?;
    (p.nice || !nice).then_some(p)
}

/// `s2 <= variance`.
pub fn conjecture_main_check(family: &Family) -> bool {
    let p = family.pair();
    let variance = p.dimension() + 1 - p.fano_index() - p.k() as i64;
    (p.s2() as i64) <= variance
}
