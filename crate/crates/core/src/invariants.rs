//! Closed-form invariants of a family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::product;
use crate::error::{Error, Result};
use crate::pair::{Family, Pair};
use crate::smoothness::is_combinatorially_smooth;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub index: i64,
    pub dimension: i64,
    pub codimension: i64,
    pub coindex: i64,
    pub variance: i64,
    pub s2: usize,
    pub ones: usize,
    pub linear_system_dim: i64,
    #[serde(serialize_with = "ser_rational")]
    pub anticanonical_degree: BigRational,
    #[serde(serialize_with = "ser_bigint")]
    pub h0_anticanonical: BigInt,
    pub sporadic: bool,
    pub linear_cone: bool,
    pub combinatorially_smooth: bool,
}

impl InvariantReport {
    /// The anticanonical degree as an integer, if it is one.
    pub fn degree_integer(&self) -> Option<BigInt> {
        self.anticanonical_degree
            .is_integer()
            .then(|| self.anticanonical_degree.to_integer())
    }
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    if q.is_integer() {
        ser_bigint(&q.to_integer(), s)
    } else {
        s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
    }
}

fn ser_bigint<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

/// `(prod d / prod a) * index^dim`, exact.
pub fn anticanonical_degree(pair: &Pair) -> BigRational {
    let num = BigInt::from(product(&pair.degrees));
    let den = BigInt::from(product(&pair.weights));
    let index = BigInt::from(pair.fano_index());
    let dim = pair.dimension().max(0) as u32;
    BigRational::new(num * Pow::pow(&index, dim), den)
}

/// Coefficient of `t^m` in `prod (1 - t^d) / prod (1 - t^a)`.
pub fn hilbert_coefficient(pair: &Pair, m: u64) -> BigInt {
    let m = m as usize;
    let mut c = vec![BigInt::zero(); m + 1];
    c[0] = BigInt::one();
    for &d in &pair.degrees {
        let d = d as usize;
        for i in (d..=m).rev() {
            let sub = c[i - d].clone();
            c[i] -= sub;
        }
    }
    for &a in &pair.weights {
        let a = a as usize;
        for i in a..=m {
            let add = c[i - a].clone();
            c[i] += add;
        }
    }
    c.swap_remove(m)
}

pub fn is_sporadic(pair: &Pair) -> bool {
    pair.weights.contains(&2) || (pair.ones() as i64 - 1) < pair.dimension()
}

/// All invariants of a family; the index must be positive.
pub fn invariants(family: &Family) -> Result<InvariantReport> {
    let pair = family.pair();
    let index = pair.fano_index();
    if index < 1 {
        return Err(Error::NotFano(index));
    }
    let dimension = pair.dimension();
    if dimension < 1 {
        return Err(Error::DimensionTooSmall(dimension));
    }
    let codimension = pair.k() as i64;
    let coindex = dimension + 1 - index;
    Ok(InvariantReport {
        index,
        dimension,
        codimension,
        coindex,
        variance: coindex - codimension,
        s2: pair.s2(),
        ones: pair.ones(),
        linear_system_dim: pair.ones() as i64 - 1,
        anticanonical_degree: anticanonical_degree(pair),
        h0_anticanonical: hilbert_coefficient(pair, index as u64),
        sporadic: is_sporadic(pair),
        linear_cone: pair.is_linear_cone(),
        combinatorially_smooth: is_combinatorially_smooth(pair).smooth,
    })
}
