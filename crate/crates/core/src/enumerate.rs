//! Enumeration of series and semiseries generators of a fixed variance.
//!
//! Index-one generators of codimension `k` and variance `r` live in a finite
//! box: the weights are `1^{n+1}` (resp. `1^{k+1}`) followed by a short tail,
//! and the degrees are pinned to the top tail weights up to a slack vector
//! ([`BetaVector`]) whose sum is fixed by the middle weights. The search walks
//! that box with pruning derived from regularity alone, then filters every
//! survivor through the full smoothness check.
//!
//! Pruning rules, all implied by "regular and not a linear cone":
//! * at most `k` weights are divisible by any `h > 1`;
//! * the product of the weights divides the product of the degrees, and the
//!   latter is at most `(sum/k)^k`;
//! * for every `h > 1`, the `#{a : h | a}` largest degrees are multiples of `h`
//!   that are not weights.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, divisors_above_one, partitions};
use crate::error::{Error, Result};
use crate::invariants::is_sporadic;
use crate::pair::{Family, Pair, Provenance};
use crate::series::{classify_generator, GeneratorKind, GeneratorRecord};
use crate::smoothness::is_combinatorially_smooth;

/// Slack between each degree and its paired top weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaVector {
    pub beta: Vec<u64>,
}

impl BetaVector {
    /// Recovers the slack vector from a normalized index-one pair of
    /// dimension `n`; `None` if some entry would be negative.
    pub fn from_pair(pair: &Pair) -> Option<BetaVector> {
        let k = pair.k();
        if k == 0 || pair.dimension() < 1 {
            return None;
        }
        let n = pair.dimension() as usize;
        let a = &pair.weights;
        let mut beta = Vec::with_capacity(k);
        for j in 1..=k {
            let base = if j < k {
                a[n + j] + 1
            } else {
                a[n + k] + a[n] + 1
            };
            beta.push(pair.degrees[j - 1].checked_sub(base)?);
        }
        Some(BetaVector { beta })
    }

    pub fn total(&self) -> u64 {
        self.beta.iter().sum()
    }
}

/// How far the search box is widened beyond the proven bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBox {
    pub weight_slack: u64,
    pub codim_slack: usize,
}

/// Per-codimension counters collected while walking the box.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    pub variance: u64,
    pub codim_range: (usize, usize),
    /// Largest weight value admitted, per codimension.
    pub weight_max: BTreeMap<usize, u64>,
    /// Weight tuples that survived pruning, per codimension.
    pub weight_tuples: BTreeMap<usize, u64>,
    /// Pairs handed to the smoothness filter, per codimension.
    pub candidates: BTreeMap<usize, u64>,
    /// Which weight bound was the larger one, per codimension.
    pub binding_bound: BTreeMap<usize, String>,
}

fn record(family: Family, kind: GeneratorKind) -> Result<GeneratorRecord> {
    GeneratorRecord::new(family.with_provenance(Provenance::Enumerated), kind)
}

/// Complete intersections in `P^N` of index one: one per partition of `r`.
/// For `r = 0` the line and the plane conic.
pub fn enumerate_pn_generators(r: u64) -> Result<Vec<GeneratorRecord>> {
    if r == 0 {
        return Ok(vec![
            record(Family::from_lists(&[], &[1, 1])?, GeneratorKind::Series)?,
            record(Family::from_lists(&[2], &[1, 1, 1])?, GeneratorKind::Series)?,
        ]);
    }
    let mut out = Vec::new();
    for alpha in partitions(r) {
        let degrees: Vec<u64> = alpha.iter().map(|a| a + 2).collect();
        let n: u64 = degrees.iter().sum();
        let fam = Family::from_lists(&degrees, &vec![1; n as usize + 1])?;
        out.push(record(fam, GeneratorKind::Series)?);
    }
    out.sort_by(listing_order);
    Ok(out)
}

/// Degree-side constraints shared by both branches.
struct DegreeSpace {
    k: usize,
    target: u64,
    lb: Vec<u64>,
    ub: Vec<u64>,
    weight_values: Vec<u64>,
    /// `(h, #{a : h | a}, smallest admissible multiple of h)`
    demands: Vec<(u64, usize, u64)>,
}

impl DegreeSpace {
    /// `base` holds the slack-free degrees; `slack` is the fixed slack total;
    /// `min_extra` forces extra slack per position.
    fn new(weights: &[u64], base: &[u64], min_extra: &[u64], slack: u64) -> Option<DegreeSpace> {
        let k = base.len();
        let mut weight_values = weights.to_vec();
        weight_values.dedup();
        let mut hs: Vec<u64> = weights
            .iter()
            .flat_map(|&a| divisors_above_one(a))
            .collect();
        hs.sort_unstable();
        hs.dedup();
        let mut demands = Vec::new();
        let mut lb: Vec<u64> = base.iter().zip(min_extra).map(|(b, e)| b + e).collect();
        for &h in &hs {
            let c = weights.iter().filter(|&&a| a % h == 0).count();
            if c > k {
                return None;
            }
            let mut mu = h;
            while weight_values.binary_search(&mu).is_ok() {
                mu += h;
            }
            for x in lb.iter_mut().skip(k - c) {
                *x = (*x).max(mu);
            }
            demands.push((h, c, mu));
        }
        for j in 1..k {
            if lb[j] < lb[j - 1] {
                lb[j] = lb[j - 1];
            }
        }
        let target = base.iter().sum::<u64>() + slack;
        if lb.iter().sum::<u64>() > target {
            return None;
        }
        let ub = base.iter().map(|b| b + slack).collect();
        Some(DegreeSpace {
            k,
            target,
            lb,
            ub,
            weight_values,
            demands,
        })
    }

    /// Non-decreasing degree tuples meeting every constraint.
    fn solutions(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.k];
        let mut have = vec![0usize; self.demands.len()];
        self.descend(self.k, self.target, u64::MAX, &mut cur, &mut have, &mut out);
        out
    }

    /// Fills positions `0..i` (position `i - 1` next) with sum `rem`, each at
    /// most `cap`.
    fn descend(
        &self,
        i: usize,
        rem: u64,
        cap: u64,
        cur: &mut Vec<u64>,
        have: &mut Vec<usize>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if i == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let j = i - 1;
        let lo = self.lb[j];
        let hi = self.ub[j].min(cap).min(rem);
        if lo > hi {
            return;
        }
        let below_lb: u64 = self.lb[..j].iter().sum();
        for d in (lo..=hi).rev() {
            let rest = rem - d;
            if rest < below_lb {
                continue;
            }
            let below_max: u64 = (0..j).map(|t| self.ub[t].min(d)).sum();
            if rest > below_max {
                break;
            }
            if self.weight_values.binary_search(&d).is_ok() {
                continue;
            }
            let mut ok = true;
            for (t, &(h, c, mu)) in self.demands.iter().enumerate() {
                let got = have[t] + usize::from(d % h == 0);
                let room = if d >= mu { j } else { 0 };
                if got + room < c {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for (t, &(h, _, _)) in self.demands.iter().enumerate() {
                if d % h == 0 {
                    have[t] += 1;
                }
            }
            cur[j] = d;
            self.descend(j, rest, d, cur, have, out);
            for (t, &(h, _, _)) in self.demands.iter().enumerate() {
                if d % h == 0 {
                    have[t] -= 1;
                }
            }
        }
    }
}

/// Product of weights against the AM-GM ceiling on the product of `k`
/// degrees summing to `total`.
fn product_fits(log_prod: f64, total: u64, k: usize) -> bool {
    if k == 0 {
        return log_prod <= 1e-9;
    }
    log_prod <= k as f64 * (total as f64 / k as f64).ln() + 1e-9
}

/// Non-increasing tuples of length `len` over `values` (given decreasing),
/// pruned by the divisor counts and by `accept(prefix)`.
fn tails(len: usize, values: &[u64], k: usize, accept: &dyn Fn(&[u64]) -> bool) -> Vec<Vec<u64>> {
    struct Walk<'a> {
        len: usize,
        values: &'a [u64],
        k: usize,
        accept: &'a dyn Fn(&[u64]) -> bool,
        cur: Vec<u64>,
        counts: BTreeMap<u64, usize>,
        out: Vec<Vec<u64>>,
    }

    impl Walk<'_> {
        fn rec(&mut self, start: usize) {
            if self.cur.len() == self.len {
                self.out.push(self.cur.clone());
                return;
            }
            for s in start..self.values.len() {
                let v = self.values[s];
                let divs = divisors_above_one(v);
                if divs
                    .iter()
                    .any(|h| self.counts.get(h).copied().unwrap_or(0) + 1 > self.k)
                {
                    continue;
                }
                for h in &divs {
                    *self.counts.entry(*h).or_insert(0) += 1;
                }
                self.cur.push(v);
                if (self.accept)(&self.cur) {
                    self.rec(s);
                }
                self.cur.pop();
                for h in &divs {
                    *self.counts.get_mut(h).unwrap() -= 1;
                }
            }
        }
    }

    let mut walk = Walk {
        len,
        values,
        k,
        accept,
        cur: Vec::new(),
        counts: BTreeMap::new(),
        out: Vec::new(),
    };
    walk.rec(0);
    walk.out
}

fn log_product(xs: &[u64]) -> f64 {
    xs.iter().map(|&x| (x as f64).ln()).sum()
}

/// Non-sporadic weighted generators of variance `r`.
pub fn enumerate_weighted_series_generators(r: u64) -> Result<Vec<GeneratorRecord>> {
    Ok(weighted_series_in_box(r, SearchBox::default())?.0)
}

pub fn weighted_series_in_box(
    r: u64,
    sbox: SearchBox,
) -> Result<(Vec<GeneratorRecord>, EnumerationBudget)> {
    let mut budget = EnumerationBudget {
        variance: r,
        ..Default::default()
    };
    if r == 0 {
        return Ok((Vec::new(), budget));
    }
    let kmax = (3 * r as usize).saturating_sub(2).max(1) + sbox.codim_slack;
    budget.codim_range = (1, kmax);
    let vmax = r + 1 + sbox.weight_slack;
    let mut values: Vec<u64> = (3..=vmax).rev().collect();
    values.push(1);
    let mut jobs = Vec::new();
    for k in 1..=kmax {
        let n = k as u64 + r;
        let accept = |prefix: &[u64]| {
            // prefix is the largest part of the tail; the rest is at least 1
            if prefix[0] < 3 {
                return false;
            }
            let rest = (k - prefix.len()) as u64 * prefix[prefix.len() - 1];
            let total = n + prefix.iter().sum::<u64>() + rest;
            product_fits(log_product(prefix), total, k)
        };
        let ts = tails(k, &values, k, &accept);
        budget.weight_max.insert(k, vmax);
        budget.weight_tuples.insert(k, ts.len() as u64);
        for mut tail in ts {
            tail.reverse();
            jobs.push((k, tail));
        }
    }
    let found: Vec<(usize, u64, Vec<Pair>)> = jobs
        .par_iter()
        .map(|(k, tail)| {
            let k = *k;
            let n = k + r as usize;
            let mut weights = vec![1u64; n + 1];
            weights.extend(tail);
            let base: Vec<u64> = (0..k)
                .map(|j| tail[j] + 1 + u64::from(j + 1 == k))
                .collect();
            // beta_k >= 1, and no quadrics in a series generator
            let min_extra: Vec<u64> = (0..k)
                .map(|j| {
                    let forced = u64::from(j + 1 == k);
                    forced.max(3u64.saturating_sub(base[j]))
                })
                .collect();
            let mut hits = Vec::new();
            let mut tried = 0;
            if let Some(space) = DegreeSpace::new(&weights, &base, &min_extra, r - 1) {
                for degrees in space.solutions() {
                    tried += 1;
                    let pair = Pair {
                        weights: weights.clone(),
                        degrees,
                    };
                    if is_combinatorially_smooth(&pair).smooth && !is_sporadic(&pair) {
                        hits.push(pair);
                    }
                }
            }
            (k, tried, hits)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (k, tried, hits) in found {
        *budget.candidates.entry(k).or_insert(0) += tried;
        for pair in hits {
            if seen.insert(pair.clone()) {
                let fam = Family::new(pair)?;
                if classify_generator(&fam) != GeneratorKind::Series {
                    continue;
                }
                out.push(record(fam, GeneratorKind::Series)?);
            }
        }
    }
    check_variance(&out, r)?;
    out.sort_by(listing_order);
    Ok((out, budget))
}

/// Sporadic index-one generators of variance `r`.
pub fn enumerate_semiseries_generators(r: u64) -> Result<Vec<GeneratorRecord>> {
    Ok(semiseries_in_box(r, SearchBox::default())?.0)
}

pub fn semiseries_in_box(
    r: u64,
    sbox: SearchBox,
) -> Result<(Vec<GeneratorRecord>, EnumerationBudget)> {
    let mut budget = EnumerationBudget {
        variance: r,
        ..Default::default()
    };
    if r == 0 {
        return Ok((Vec::new(), budget));
    }
    let kmax = (2 * r as usize - 1) + sbox.codim_slack;
    budget.codim_range = (1, kmax);
    let mut jobs = Vec::new();
    for k in 1..=kmax {
        let ku = k as u64;
        let (stated, actual) = (ku + 2 * r, 2 * ku + r);
        let nmax = stated.max(actual) + sbox.weight_slack;
        budget.binding_bound.insert(
            k,
            if stated >= actual { "k+2r" } else { "2k+r" }.to_string(),
        );
        budget.weight_max.insert(k, nmax);
        let values: Vec<u64> = (1..=nmax).rev().collect();
        let len = k + r as usize;
        let accept = |prefix: &[u64]| {
            if prefix[0] < 2 {
                return false;
            }
            let rest = (len - prefix.len()) as u64 * prefix[prefix.len() - 1];
            let total = ku + prefix.iter().sum::<u64>() + rest;
            product_fits(log_product(prefix), total, k)
        };
        let ts = tails(len, &values, k, &accept);
        budget.weight_tuples.insert(k, ts.len() as u64);
        for mut tail in ts {
            tail.reverse();
            jobs.push((k, tail));
        }
    }
    let found: Vec<(usize, u64, Vec<Pair>)> = jobs
        .par_iter()
        .map(|(k, tail)| {
            let k = *k;
            let r = r as usize;
            // tail = middle (r - 1) | a_n | top (k)
            let a_n = tail[r - 1];
            let top = &tail[r..];
            let slack: u64 = tail[..r - 1].iter().sum();
            let mut weights = vec![1u64; k + 1];
            weights.extend(tail);
            let base: Vec<u64> = (0..k)
                .map(|j| top[j] + 1 + if j + 1 == k { a_n } else { 0 })
                .collect();
            let mut hits = Vec::new();
            let mut tried = 0;
            if let Some(space) = DegreeSpace::new(&weights, &base, &vec![0; k], slack) {
                for degrees in space.solutions() {
                    tried += 1;
                    let pair = Pair {
                        weights: weights.clone(),
                        degrees,
                    };
                    if is_combinatorially_smooth(&pair).smooth && is_sporadic(&pair) {
                        hits.push(pair);
                    }
                }
            }
            (k, tried, hits)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (k, tried, hits) in found {
        *budget.candidates.entry(k).or_insert(0) += tried;
        for pair in hits {
            if seen.insert(pair.clone()) {
                let fam = Family::new(pair)?;
                out.push(record(fam, GeneratorKind::Semiseries)?);
            }
        }
    }
    check_variance(&out, r)?;
    out.sort_by(listing_order);
    Ok((out, budget))
}

fn check_variance(recs: &[GeneratorRecord], r: u64) -> Result<()> {
    match recs
        .iter()
        .find(|g| g.variance != r as i64 || g.report.index != 1)
    {
        Some(g) => Err(Error::Internal(format!(
            "enumerated {:?} has variance {} and index {}",
            g.family.pair(),
            g.variance,
            g.report.index
        ))),
        None => Ok(()),
    }
}

/// Which generator families to list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Pn,
    Series,
    Semiseries,
    All,
}

/// Generators of one kind: `Series` covers both projective-space and weighted
/// series generators.
pub fn enumerate_kind(r: u64, kind: Kind) -> Result<Vec<GeneratorRecord>> {
    let mut out = match kind {
        Kind::Pn => enumerate_pn_generators(r)?,
        Kind::Series => {
            let mut v = enumerate_pn_generators(r)?;
            v.extend(enumerate_weighted_series_generators(r)?);
            v
        }
        Kind::Semiseries => enumerate_semiseries_generators(r)?,
        Kind::All => return enumerate_all(r),
    };
    out.sort_by(listing_order);
    Ok(out)
}

/// Every generator of variance `r`, in table order.
pub fn enumerate_all(r: u64) -> Result<Vec<GeneratorRecord>> {
    let mut out = enumerate_pn_generators(r)?;
    out.extend(enumerate_weighted_series_generators(r)?);
    out.extend(enumerate_semiseries_generators(r)?);
    out.sort_by(listing_order);
    Ok(out)
}

/// Element-wise comparison with larger entries first; a proper prefix sorts
/// first.
fn descending_lex(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.cmp(x) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Table order: variance, dimension, anticanonical degree, `h0(-K)`, then
/// weights and degrees compared with larger entries first.
pub fn listing_order(a: &GeneratorRecord, b: &GeneratorRecord) -> Ordering {
    (a.variance, a.report.dimension)
        .cmp(&(b.variance, b.report.dimension))
        .then_with(|| {
            a.report
                .anticanonical_degree
                .cmp(&b.report.anticanonical_degree)
        })
        .then_with(|| a.report.h0_anticanonical.cmp(&b.report.h0_anticanonical))
        .then_with(|| descending_lex(a.family.weights(), b.family.weights()))
        .then_with(|| descending_lex(a.family.degrees(), b.family.degrees()))
}

/// Enumerated counts against the closed-form bounds, split by whether the
/// codimension exceeds the variance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub variance: u64,
    pub partitions: u64,
    pub pn_found: u64,
    pub series_low_bound: String,
    pub series_low_found: u64,
    pub series_high_bound: String,
    pub series_high_found: u64,
    pub semiseries_low_bound: String,
    pub semiseries_low_found: u64,
    pub semiseries_high_bound: String,
    pub semiseries_high_found: u64,
    /// Classes whose count exceeds the closed-form bound.
    pub violations: Vec<String>,
}

fn binom_signed(n: i64, k: i64) -> num_bigint::BigInt {
    if n < 0 || k < 0 {
        return 0.into();
    }
    binomial(n as u64, k as u64)
}

pub fn bound_check(r: u64) -> Result<BoundReport> {
    let ri = r as i64;
    let series_bound = |ks: std::ops::RangeInclusive<i64>| -> num_bigint::BigInt {
        ks.map(|k| {
            let b = binom_signed(ri - 2 + k, ri - 2);
            &b * &b
        })
        .sum()
    };
    let semi_bound = |ks: std::ops::RangeInclusive<i64>| -> num_bigint::BigInt {
        ks.map(|k| {
            binom_signed(2 * k + 3 * ri - 2, k + ri)
                * binom_signed(2 * ri * (ri - 1) + k * ri - 1, k)
        })
        .sum()
    };
    let pn = enumerate_pn_generators(r)?;
    let ws = enumerate_weighted_series_generators(r)?;
    let ss = enumerate_semiseries_generators(r)?;
    let low =
        |v: &[GeneratorRecord]| v.iter().filter(|g| g.report.codimension <= ri).count() as u64;
    let high =
        |v: &[GeneratorRecord]| v.iter().filter(|g| g.report.codimension > ri).count() as u64;
    let sl = series_bound(1..=ri);
    let sh = series_bound(ri + 1..=3 * ri - 2);
    let tl = semi_bound(1..=ri);
    let th = semi_bound(ri + 1..=2 * ri - 1);
    let mut violations = Vec::new();
    let checks = [
        ("series_low", low(&ws), &sl),
        ("series_high", high(&ws), &sh),
        ("semiseries_low", low(&ss), &tl),
        ("semiseries_high", high(&ss), &th),
    ];
    for (name, found, bound) in checks {
        if num_bigint::BigInt::from(found) > *bound {
            violations.push(name.to_string());
        }
    }
    let expected_pn = if r == 0 {
        1
    } else {
        partitions(r).len() as u64
    };
    if r > 0 && pn.len() as u64 != expected_pn {
        violations.push("pn".to_string());
    }
    Ok(BoundReport {
        variance: r,
        partitions: expected_pn,
        pn_found: pn.len() as u64,
        series_low_bound: sl.to_string(),
        series_low_found: low(&ws),
        series_high_bound: sh.to_string(),
        series_high_found: high(&ws),
        semiseries_low_bound: tl.to_string(),
        semiseries_low_found: low(&ss),
        semiseries_high_bound: th.to_string(),
        semiseries_high_found: high(&ss),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[GeneratorRecord]) -> Vec<(Vec<u64>, Vec<u64>)> {
        v.iter()
            .map(|g| (g.family.weights().to_vec(), g.family.degrees().to_vec()))
            .collect()
    }

    #[test]
    fn projective_generators() {
        let v = pairs(&enumerate_pn_generators(1).unwrap());
        assert_eq!(v, vec![(vec![1; 4], vec![3])]);
        let v = pairs(&enumerate_pn_generators(2).unwrap());
        assert_eq!(v, vec![(vec![1; 5], vec![4]), (vec![1; 7], vec![3, 3])]);
        let v = pairs(&enumerate_pn_generators(4).unwrap());
        assert!(v.contains(&(vec![1; 13], vec![3, 3, 3, 3])));
        assert_eq!(enumerate_pn_generators(0).unwrap().len(), 2);
    }

    #[test]
    fn small_weighted_series() {
        assert!(enumerate_weighted_series_generators(1).unwrap().is_empty());
        let v = pairs(&enumerate_weighted_series_generators(2).unwrap());
        assert_eq!(v, vec![(vec![1, 1, 1, 1, 3], vec![6])]);
    }

    #[test]
    fn small_semiseries() {
        let v = pairs(&enumerate_semiseries_generators(1).unwrap());
        assert_eq!(
            v,
            vec![(vec![1, 1, 2, 3], vec![6]), (vec![1, 1, 1, 2], vec![4])]
        );
        assert_eq!(enumerate_semiseries_generators(2).unwrap().len(), 4);
    }

    #[test]
    fn beta_vector_round_trip() {
        let p = Pair::new(vec![3, 8], vec![1, 1, 1, 1, 1, 1, 1, 1, 4]).unwrap();
        let b = BetaVector::from_pair(&p).unwrap();
        assert_eq!(b.beta, vec![1, 2]);
        assert_eq!(b.total(), 3);
    }
}
