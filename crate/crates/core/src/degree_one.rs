//! Anticanonical degree one: product-balanced pairs, p-adic level counts,
//! the two reductions, and the class of pairs whose prime-power strata are
//! representable.

use serde::Serialize;

use crate::arith::{is_prime, is_prime_power, primes_dividing, product, valuation};
use crate::error::{Error, Result};
use crate::pair::{Family, Pair};
use crate::smoothness::{is_regular, representable};

/// Degree one: index one and equal products.
pub fn is_degree_one(family: &Family) -> bool {
    let p = family.pair();
    p.fano_index() == 1 && product(&p.weights) == product(&p.degrees)
}

/// Indices of weights and degrees with `p`-adic valuation exactly `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicProfile {
    pub p: u64,
    pub m: u32,
    pub i_set: Vec<usize>,
    pub j_set: Vec<usize>,
}

/// Profiles for every level `m >= 1` occurring in the pair.
pub fn padic_profiles(pair: &Pair, p: u64) -> Vec<PadicProfile> {
    let top = pair
        .weights
        .iter()
        .chain(&pair.degrees)
        .map(|&x| valuation(x, p))
        .max()
        .unwrap_or(0);
    (1..=top)
        .map(|m| PadicProfile {
            p,
            m,
            i_set: (0..pair.weights.len())
                .filter(|&i| valuation(pair.weights[i], p) == m)
                .collect(),
            j_set: (0..pair.degrees.len())
                .filter(|&j| valuation(pair.degrees[j], p) == m)
                .collect(),
        })
        .collect()
}

/// Equal level counts for every prime dividing an entry.
pub fn padic_bijection_holds(pair: &Pair) -> bool {
    let entries: Vec<u64> = pair.weights.iter().chain(&pair.degrees).copied().collect();
    primes_dividing(&entries).into_iter().all(|p| {
        padic_profiles(pair, p)
            .iter()
            .all(|prof| prof.i_set.len() == prof.j_set.len())
    })
}

/// Divides every entry divisible by `p` by `p`.
pub fn p_reduce(pair: &Pair, p: u64) -> Result<Pair> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let f = |x: &u64| if x.is_multiple_of(p) { x / p } else { *x };
    Ok(Pair {
        weights: pair.weights.iter().map(f).collect(),
        degrees: pair.degrees.iter().map(f).collect(),
    }
    .normalize())
}

/// Cancels equal degree and weight values as multisets. The weight list may
/// become empty, so the result is a plain pair of lists.
pub fn tilde_reduce(pair: &Pair) -> (Vec<u64>, Vec<u64>) {
    let mut weights = pair.weights.clone();
    let mut degrees = Vec::new();
    for &d in &pair.degrees {
        match weights.iter().position(|&a| a == d) {
            Some(i) => {
                weights.remove(i);
            }
            None => degrees.push(d),
        }
    }
    (degrees, weights)
}

/// Regular, product-balanced, and every degree divisible by a prime power is
/// representable by the weights divisible by that prime power.
pub fn in_class_p(pair: &Pair) -> bool {
    if !is_regular(pair) || product(&pair.weights) != product(&pair.degrees) {
        return false;
    }
    let entries: Vec<u64> = pair.weights.iter().chain(&pair.degrees).copied().collect();
    let max = entries.iter().copied().max().unwrap_or(1);
    for p in primes_dividing(&entries) {
        let mut q = p;
        while q <= max {
            let basis: Vec<u64> = pair
                .weights
                .iter()
                .copied()
                .filter(|a| a % q == 0)
                .collect();
            if pair
                .degrees
                .iter()
                .any(|&d| d % q == 0 && !representable(d, &basis))
            {
                return false;
            }
            q *= p;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    /// `#{i : a_i > 1}`
    pub lhs: usize,
    /// `#{j : d_j > 1}`
    pub rhs: usize,
    pub strict: bool,
    /// Cancelling equal entries leaves only units.
    pub cancels: bool,
}

/// Compares the number of non-unit weights with the number of non-unit
/// degrees; `lhs < rhs` is reported as an internal error.
///
/// Equality does not force full cancellation: `(2^5,12; 1,2^4,4,6)` is in the
/// class with both counts 6, and cancelling leaves `(2,12; 4,6)`, which is
/// outside it. Callers get the `cancels` flag instead of an error.
pub fn counting_inequality(pair: &Pair) -> Result<CountingReport> {
    if !in_class_p(pair) {
        return Err(Error::NotInClassP);
    }
    let lhs = pair.weights.iter().filter(|&&a| a > 1).count();
    let rhs = pair.degrees.iter().filter(|&&d| d > 1).count();
    if lhs < rhs {
        return Err(Error::Internal(format!(
            "counting inequality fails on {pair:?}: {lhs} vs {rhs}"
        )));
    }
    let (d, a) = tilde_reduce(pair);
    Ok(CountingReport {
        lhs,
        rhs,
        strict: lhs > rhs,
        cancels: d.iter().chain(&a).all(|&x| x == 1),
    })
}

/// First degree that is a prime power, if any.
pub fn prime_power_degree(pair: &Pair) -> Option<u64> {
    pair.degrees.iter().copied().find(|&d| is_prime_power(d))
}

pub fn no_prime_power_degrees(pair: &Pair) -> bool {
    prime_power_degree(pair).is_none()
}

/// Hypersurface of degree `prod c` in `P(1^{1+alpha}, c_1..c_l)` with
/// `alpha = prod c - sum c`.
pub fn coprime_hypersurface(cs: &[u64]) -> Result<Pair> {
    let prod: u64 = cs.iter().product();
    let sum: u64 = cs.iter().sum();
    if prod < sum {
        return Err(Error::Invalid(format!("{cs:?} has product below its sum")));
    }
    let mut weights = vec![1; (1 + prod - sum) as usize];
    weights.extend(cs);
    Pair::normalized_from(vec![prod], weights)
}

/// Degrees `6^r` in `P(1^{1+r}, 2^r, 3^r)`.
pub fn sextic_tower(r: usize) -> Pair {
    let mut weights = vec![1; 1 + r];
    weights.extend(std::iter::repeat_n(2, r));
    weights.extend(std::iter::repeat_n(3, r));
    Pair {
        weights,
        degrees: vec![6; r],
    }
}

/// Degrees `(abc, abc)` in `P(1^{1+alpha}, ab, bc, ac)` with
/// `alpha = 2abc - ab - bc - ac`.
pub fn triple_product_pair(a: u64, b: u64, c: u64) -> Pair {
    let abc = a * b * c;
    let alpha = 2 * abc - a * b - b * c - a * c;
    let mut weights = vec![1; (1 + alpha) as usize];
    weights.extend([a * b, b * c, a * c]);
    Pair {
        weights,
        degrees: vec![abc, abc],
    }
    .normalize()
}

/// Degrees `(a, b, c, abc)` with weights `(ab, bc, ac)`: regular but not
/// smooth.
pub fn triple_product_negative(a: u64, b: u64, c: u64) -> Pair {
    Pair {
        weights: vec![a * b, b * c, a * c],
        degrees: vec![a, b, c, a * b * c],
    }
    .normalize()
}
