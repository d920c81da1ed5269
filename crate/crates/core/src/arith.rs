//! Small integer helpers shared by the other modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// gcd of a slice; 0 for an empty slice.
pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |g, &x| gcd(g, x))
}

/// lcm of a slice; 1 for an empty slice.
pub fn lcm_all(xs: &[u64]) -> u64 {
    xs.iter().fold(1, |l, &x| lcm(l, x))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct primes dividing any of the given values, sorted.
pub fn primes_dividing(values: &[u64]) -> Vec<u64> {
    let mut ps: Vec<u64> = values
        .iter()
        .flat_map(|&v| factorize(v).into_iter().map(|(p, _)| p))
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// p-adic valuation; `n` must be non-zero.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_prime_power(n: u64) -> bool {
    factorize(n).len() == 1
}

/// All divisors greater than one, sorted.
pub fn divisors_above_one(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            ds.push(i);
            if i != n / i {
                ds.push(n / i);
            }
        }
        i += 1;
    }
    ds.retain(|&d| d > 1);
    ds.sort_unstable();
    ds
}

pub fn product(xs: &[u64]) -> BigUint {
    xs.iter().fold(BigUint::from(1u32), |acc, &x| acc * x)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    BigInt::from(acc)
}

/// Integer partitions of `n` into parts >= 1, each listed non-decreasing.
pub fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(rest: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            let mut p = cur.clone();
            p.reverse();
            out.push(p);
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert!(is_prime_power(8));
        assert!(!is_prime_power(6));
        assert!(!is_prime_power(1));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert!(partitions(4).contains(&vec![1, 1, 2]));
    }

    #[test]
    fn divisors() {
        assert_eq!(divisors_above_one(12), vec![2, 3, 4, 6, 12]);
        assert_eq!(divisors_above_one(1), Vec::<u64>::new());
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }
}
