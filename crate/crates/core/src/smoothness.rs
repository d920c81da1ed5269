//! Regularity, the two subset conditions, and combinatorial smoothness.
//!
//! Subsets of weight indices are handled through [`SubsetProfile`]s: only the
//! number of chosen indices per distinct weight value matters, so a pair like
//! `P^21` has a handful of profiles instead of `2^22` subsets.
//!
//! The covering condition of the second subset type is checked on unions of
//! weight-value classes. For a fixed choice of representable degrees the
//! candidate sets `E_j` (complement indices `e` with `d_j - a_e` representable)
//! admit size-`s` subfamilies satisfying the covering bound iff the `E_j`
//! themselves satisfy it, so the full candidate sets are tested and an explicit
//! matrix is only built when a witness is requested.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::arith::gcd_all;
use crate::pair::Pair;

/// True iff `target` is a non-negative integer combination of `basis`.
pub fn representable(target: u64, basis: &[u64]) -> bool {
    if target == 0 {
        return true;
    }
    let g = gcd_all(basis);
    if g == 0 || !target.is_multiple_of(g) {
        return false;
    }
    let t = target as usize;
    let mut table = vec![false; t + 1];
    table[0] = true;
    for x in 1..=t {
        table[x] = basis
            .iter()
            .any(|&b| b as usize <= x && table[x - b as usize]);
    }
    table[t]
}

/// Count form of regularity: for every `h > 1` dividing a weight, at most as
/// many weights as degrees are divisible by `h`. Returns the first violating
/// divisor.
pub fn regularity_violation(pair: &Pair) -> Option<u64> {
    let max = pair.weights.iter().copied().max().unwrap_or(1);
    (2..=max).find(|&h| {
        let wa = pair.weights.iter().filter(|&&a| a % h == 0).count();
        wa > 0 && wa > pair.degrees.iter().filter(|&&d| d % h == 0).count()
    })
}

pub fn is_regular(pair: &Pair) -> bool {
    regularity_violation(pair).is_none()
}

/// Orbit of a subset of weight indices under weight-preserving permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubsetProfile {
    pub counts: BTreeMap<u64, usize>,
    pub complement_counts: BTreeMap<u64, usize>,
}

impl SubsetProfile {
    /// Profile of an explicit index subset.
    pub fn from_indices(pair: &Pair, indices: &[usize]) -> SubsetProfile {
        let mut counts = BTreeMap::new();
        let mut complement_counts = BTreeMap::new();
        for (i, &a) in pair.weights.iter().enumerate() {
            counts.entry(a).or_insert(0);
            complement_counts.entry(a).or_insert(0);
            if indices.contains(&i) {
                *counts.get_mut(&a).unwrap() += 1;
            } else {
                *complement_counts.get_mut(&a).unwrap() += 1;
            }
        }
        SubsetProfile {
            counts,
            complement_counts,
        }
    }

    /// The indices of all weights divisible by `h`.
    pub fn multiples_of(pair: &Pair, h: u64) -> SubsetProfile {
        let idx: Vec<usize> = (0..pair.weights.len())
            .filter(|&i| pair.weights[i].is_multiple_of(h))
            .collect();
        SubsetProfile::from_indices(pair, &idx)
    }

    pub fn size(&self) -> usize {
        self.counts.values().sum()
    }

    /// Distinct weight values present in the subset.
    pub fn basis(&self) -> Vec<u64> {
        self.counts
            .iter()
            .filter(|&(_, &c)| c > 0)
            .map(|(&v, _)| v)
            .collect()
    }

    /// A concrete subset in this orbit: the first indices of each value.
    pub fn representative(&self, pair: &Pair) -> Vec<usize> {
        let mut taken: BTreeMap<u64, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for (i, &a) in pair.weights.iter().enumerate() {
            let t = taken.entry(a).or_insert(0);
            if *t < self.counts.get(&a).copied().unwrap_or(0) {
                *t += 1;
                out.push(i);
            }
        }
        out
    }
}

/// Certificate for one of the subset conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum QWitness {
    /// `degrees` lists degree indices representable over the subset.
    Q1 {
        subset: Vec<usize>,
        degrees: Vec<usize>,
    },
    /// The first `l` entries of `permutation` are representable degrees;
    /// column `j` of `e_matrix` belongs to degree `permutation[l + j]`.
    Q2 {
        subset: Vec<usize>,
        permutation: Vec<usize>,
        l: usize,
        e_matrix: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QVerdict {
    pub q1: bool,
    pub q2: bool,
    pub witness: Option<QWitness>,
}

impl QVerdict {
    pub fn passes(&self) -> bool {
        self.q1 || self.q2
    }
}

/// Why a pair failed the smoothness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CsFailure {
    NotRegular { divisor: u64 },
    LinearCone { value: u64 },
    Subset { profile: SubsetProfile },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CsVerdict {
    pub smooth: bool,
    pub failure: Option<CsFailure>,
}

/// Per-pair data for repeated subset checks.
struct Analyzer<'a> {
    pair: &'a Pair,
    values: Vec<u64>,
    mult: Vec<usize>,
    max_degree: usize,
    tables: HashMap<u64, Vec<bool>>,
}

impl<'a> Analyzer<'a> {
    fn new(pair: &'a Pair) -> Analyzer<'a> {
        let mut values: Vec<u64> = pair.weights.clone();
        values.sort_unstable();
        values.dedup();
        let mult = values
            .iter()
            .map(|v| pair.weights.iter().filter(|&a| a == v).count())
            .collect();
        Analyzer {
            pair,
            values,
            mult,
            max_degree: pair.degrees.iter().copied().max().unwrap_or(0) as usize,
            tables: HashMap::new(),
        }
    }

    /// Builds the representability table up to the largest degree for a set of
    /// value slots.
    fn ensure_table(&mut self, mask: u64) {
        let values = &self.values;
        let max = self.max_degree;
        self.tables.entry(mask).or_insert_with(|| {
            let basis: Vec<usize> = (0..values.len())
                .filter(|&s| mask >> s & 1 == 1)
                .map(|s| values[s] as usize)
                .collect();
            let mut t = vec![false; max + 1];
            t[0] = true;
            for x in 1..=max {
                t[x] = basis.iter().any(|&b| b <= x && t[x - b]);
            }
            t
        });
    }

    /// Evaluates both conditions for per-slot counts; returns `(q1, q2, best L)`.
    fn check(&mut self, counts: &[usize]) -> (bool, bool, Option<Vec<usize>>) {
        let g: usize = counts.iter().sum();
        let k = self.pair.k();
        let rho = k.min(g);
        if rho == 0 {
            return (true, false, None);
        }
        let mask = counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .fold(0u64, |m, (s, _)| m | 1 << s);
        self.ensure_table(mask);
        let table = &self.tables[&mask];
        let rep = |t: i64| t >= 0 && table[t as usize];
        let degrees = &self.pair.degrees;
        let rep_deg: Vec<usize> = (0..k).filter(|&j| rep(degrees[j] as i64)).collect();
        let q1 = rep_deg.len() >= rho;
        let l = rep_deg.len().min(rho - 1);
        let s = g - l;
        let comp: Vec<usize> = (0..self.values.len())
            .map(|slot| self.mult[slot] - counts[slot])
            .collect();
        let comp_slots: Vec<usize> = (0..comp.len()).filter(|&s| comp[s] > 0).collect();
        // candidate value classes per degree, as masks over comp_slots
        let cand: Vec<u64> = (0..k)
            .map(|j| {
                comp_slots
                    .iter()
                    .enumerate()
                    .filter(|&(_, &slot)| rep(degrees[j] as i64 - self.values[slot] as i64))
                    .fold(0u64, |m, (b, _)| m | 1 << b)
            })
            .collect();
        let sizes: Vec<usize> = (0..1u64 << comp_slots.len())
            .map(|u| {
                (0..comp_slots.len())
                    .filter(|&b| u >> b & 1 == 1)
                    .map(|b| comp[comp_slots[b]])
                    .sum()
            })
            .collect();
        let mut found = None;
        for_each_combination(rep_deg.len(), l, &mut |chosen| {
            let lset: Vec<usize> = chosen.iter().map(|&c| rep_deg[c]).collect();
            let rest: Vec<u64> = (0..k)
                .filter(|j| !lset.contains(j))
                .map(|j| cand[j])
                .collect();
            let ok = sizes.iter().enumerate().all(|(u, &size)| {
                let c = rest.iter().filter(|&&v| v & !(u as u64) == 0).count();
                c == 0 || size + 1 >= s + c
            });
            if ok {
                found = Some(lset);
            }
            ok
        });
        (q1, found.is_some(), found)
    }
}

/// Calls `f` on each `r`-combination of `0..n` in lexicographic order until it
/// returns true.
fn for_each_combination(n: usize, r: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        start: usize,
        n: usize,
        r: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == r {
            return f(cur);
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, r, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if r > n {
        return false;
    }
    rec(0, n, r, &mut Vec::new(), f)
}

fn slot_counts(an: &Analyzer, profile: &SubsetProfile) -> Vec<usize> {
    an.values
        .iter()
        .map(|v| profile.counts.get(v).copied().unwrap_or(0))
        .collect()
}

/// Decides both subset conditions for the orbit `profile` and builds a
/// witness for the first one that holds.
pub fn check_subset(pair: &Pair, profile: &SubsetProfile) -> QVerdict {
    let mut an = Analyzer::new(pair);
    let counts = slot_counts(&an, profile);
    let (q1, q2, lset) = an.check(&counts);
    let subset = profile.representative(pair);
    let basis: Vec<u64> = subset.iter().map(|&i| pair.weights[i]).collect();
    let witness = if q1 {
        let degrees = (0..pair.k())
            .filter(|&j| representable(pair.degrees[j], &basis))
            .collect();
        Some(QWitness::Q1 { subset, degrees })
    } else if q2 {
        build_q2_witness(pair, subset, lset.unwrap_or_default())
    } else {
        None
    };
    QVerdict { q1, q2, witness }
}

/// Largest number of remaining degrees for which an explicit e-matrix is built.
const WITNESS_COLUMN_LIMIT: usize = 16;

fn build_q2_witness(pair: &Pair, subset: Vec<usize>, lset: Vec<usize>) -> Option<QWitness> {
    let basis: Vec<u64> = subset.iter().map(|&i| pair.weights[i]).collect();
    let rest: Vec<usize> = (0..pair.k()).filter(|j| !lset.contains(j)).collect();
    if rest.len() > WITNESS_COLUMN_LIMIT {
        return None;
    }
    let s = subset.len() - lset.len();
    let complement: Vec<usize> = (0..pair.weights.len())
        .filter(|i| !subset.contains(i))
        .collect();
    let mut cols: Vec<Vec<usize>> = rest
        .iter()
        .map(|&j| {
            complement
                .iter()
                .copied()
                .filter(|&e| {
                    pair.degrees[j] >= pair.weights[e]
                        && representable(pair.degrees[j] - pair.weights[e], &basis)
                })
                .collect()
        })
        .collect();
    if !covering_holds(&cols, s) {
        return None;
    }
    for c in 0..cols.len() {
        while cols[c].len() > s {
            let mut removed = false;
            for pos in 0..cols[c].len() {
                let x = cols[c].remove(pos);
                if covering_holds(&cols, s) {
                    removed = true;
                    break;
                }
                cols[c].insert(pos, x);
            }
            if !removed {
                return None;
            }
        }
    }
    let mut permutation = lset.clone();
    permutation.extend(&rest);
    Some(QWitness::Q2 {
        subset,
        permutation,
        l: lset.len(),
        e_matrix: cols,
    })
}

/// Covering bound on index sets: every non-empty family of columns touches at
/// least `s + |J| - 1` distinct entries.
fn covering_holds(cols: &[Vec<usize>], s: usize) -> bool {
    (1..1u64 << cols.len()).all(|jmask| {
        let mut touched: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(c, _)| jmask >> c & 1 == 1)
            .flat_map(|(_, col)| col.iter().copied())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        touched.len() + 1 >= s + jmask.count_ones() as usize
    })
}

/// Re-validates a witness against the definitions, independently of the search.
pub fn validate_witness(pair: &Pair, witness: &QWitness) -> bool {
    let k = pair.k();
    match witness {
        QWitness::Q1 { subset, degrees } => {
            let basis: Vec<u64> = subset.iter().map(|&i| pair.weights[i]).collect();
            let rho = k.min(subset.len());
            let mut ds = degrees.clone();
            ds.sort_unstable();
            ds.dedup();
            ds.len() == degrees.len()
                && ds.len() >= rho
                && ds
                    .iter()
                    .all(|&j| j < k && representable(pair.degrees[j], &basis))
        }
        QWitness::Q2 {
            subset,
            permutation,
            l,
            e_matrix,
        } => {
            let g = subset.len();
            let rho = k.min(g);
            let basis: Vec<u64> = subset.iter().map(|&i| pair.weights[i]).collect();
            let mut perm = permutation.clone();
            perm.sort_unstable();
            if perm != (0..k).collect::<Vec<_>>() || *l >= rho || e_matrix.len() != k - l {
                return false;
            }
            let head_ok = permutation[..*l]
                .iter()
                .all(|&j| representable(pair.degrees[j], &basis));
            let cols_ok = e_matrix.iter().enumerate().all(|(c, col)| {
                let d = pair.degrees[permutation[l + c]];
                col.len() == g - l
                    && col.iter().all(|&e| {
                        e < pair.weights.len()
                            && !subset.contains(&e)
                            && d >= pair.weights[e]
                            && representable(d - pair.weights[e], &basis)
                    })
            });
            head_ok && cols_ok && covering_holds(e_matrix, g - l)
        }
    }
}

/// Full smoothness verdict: regular, not a linear cone, and every subset
/// orbit satisfies one of the two conditions.
pub fn is_combinatorially_smooth(pair: &Pair) -> CsVerdict {
    let fail = |f| CsVerdict {
        smooth: false,
        failure: Some(f),
    };
    if let Some(h) = regularity_violation(pair) {
        return fail(CsFailure::NotRegular { divisor: h });
    }
    if let Some(&d) = pair.degrees.iter().find(|d| pair.weights.contains(d)) {
        return fail(CsFailure::LinearCone { value: d });
    }
    match first_failing_profile(pair) {
        Some(profile) => fail(CsFailure::Subset { profile }),
        None => CsVerdict {
            smooth: true,
            failure: None,
        },
    }
}

/// Subset orbits containing a unit weight pass trivially, so only orbits of
/// heavier weights are visited.
fn first_failing_profile(pair: &Pair) -> Option<SubsetProfile> {
    if pair.k() == 0 {
        return None;
    }
    let mut an = Analyzer::new(pair);
    let slots: Vec<usize> = (0..an.values.len()).filter(|&s| an.values[s] > 1).collect();
    let mut counts = vec![0usize; an.values.len()];
    loop {
        // odometer over the heavy slots
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return None;
            }
            let s = slots[pos];
            if counts[s] < an.mult[s] {
                counts[s] += 1;
                break;
            }
            counts[s] = 0;
            pos += 1;
        }
        let (q1, q2, _) = an.check(&counts);
        if !(q1 || q2) {
            let mut c = BTreeMap::new();
            let mut cc = BTreeMap::new();
            for (s, &v) in an.values.iter().enumerate() {
                c.insert(v, counts[s]);
                cc.insert(v, an.mult[s] - counts[s]);
            }
            return Some(SubsetProfile {
                counts: c,
                complement_counts: cc,
            });
        }
    }
}

/// Visits every subset orbit, including those with unit weights.
pub fn all_profiles(pair: &Pair) -> Vec<SubsetProfile> {
    let an = Analyzer::new(pair);
    let mut out = Vec::new();
    let mut counts = vec![0usize; an.values.len()];
    loop {
        let mut c = BTreeMap::new();
        let mut cc = BTreeMap::new();
        for (s, &v) in an.values.iter().enumerate() {
            c.insert(v, counts[s]);
            cc.insert(v, an.mult[s] - counts[s]);
        }
        out.push(SubsetProfile {
            counts: c,
            complement_counts: cc,
        });
        let mut pos = 0;
        loop {
            if pos == counts.len() {
                return out;
            }
            if counts[pos] < an.mult[pos] {
                counts[pos] += 1;
                break;
            }
            counts[pos] = 0;
            pos += 1;
        }
    }
}
