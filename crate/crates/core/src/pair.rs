//! Pairs of a multidegree and a multiweight, and families built from them.

use serde::Serialize;

use crate::arith::gcd_all;
use crate::error::{Error, Result};

/// A multidegree `(d_1..d_k)` together with a multiweight `(a_0..a_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pair {
    pub weights: Vec<u64>,
    pub degrees: Vec<u64>,
}

impl Pair {
    /// Validates entries but keeps the given order.
    pub fn new(degrees: Vec<u64>, weights: Vec<u64>) -> Result<Pair> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if let Some(&bad) = degrees.iter().chain(weights.iter()).find(|&&x| x == 0) {
            return Err(Error::NonPositiveEntry(bad));
        }
        Ok(Pair { weights, degrees })
    }

    /// Builds a pair and sorts it.
    pub fn normalized_from(degrees: Vec<u64>, weights: Vec<u64>) -> Result<Pair> {
        Pair::new(degrees, weights).map(|p| p.normalize())
    }

    pub fn normalize(mut self) -> Pair {
        self.weights.sort_unstable();
        self.degrees.sort_unstable();
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] <= w[1])
            && self.degrees.windows(2).all(|w| w[0] <= w[1])
    }

    /// `N`, so that there are `N + 1` weights.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    /// Codimension `k`.
    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    pub fn dimension(&self) -> i64 {
        self.n() as i64 - self.k() as i64
    }

    /// Fano index: sum of weights minus sum of degrees.
    pub fn fano_index(&self) -> i64 {
        let a: u64 = self.weights.iter().sum();
        let d: u64 = self.degrees.iter().sum();
        a as i64 - d as i64
    }

    pub fn ones(&self) -> usize {
        self.weights.iter().filter(|&&a| a == 1).count()
    }

    /// Weights above one, in stored order.
    pub fn heavy_weights(&self) -> Vec<u64> {
        self.weights.iter().copied().filter(|&a| a > 1).collect()
    }

    pub fn s2(&self) -> usize {
        self.degrees.iter().filter(|&&d| d > 2).count()
    }

    pub fn is_linear_cone(&self) -> bool {
        self.degrees.iter().any(|d| self.weights.contains(d))
    }

    /// Projective space `P^N` itself (no degrees, all weights one).
    pub fn is_projective_space(&self) -> bool {
        self.degrees.is_empty() && self.weights.iter().all(|&a| a == 1)
    }

    pub fn is_line(&self) -> bool {
        self.degrees.is_empty() && self.weights == [1, 1]
    }

    pub fn is_plane_conic(&self) -> bool {
        self.degrees == [2] && self.weights == [1, 1, 1]
    }
}

/// True iff removing any single weight leaves weights with gcd one.
pub fn ambient_well_formed(weights: &[u64]) -> bool {
    if weights.len() < 2 {
        return false;
    }
    (0..weights.len()).all(|skip| {
        let rest: Vec<u64> = weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &a)| a)
            .collect();
        gcd_all(&rest) == 1
    })
}

/// Where a family came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Enumerated,
    User,
    Expanded,
}

/// A normalized pair read as a family of weighted complete intersections.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    pair: Pair,
    pub provenance: Option<Provenance>,
}

impl Family {
    /// Normalizes and checks the dimension. Dimension one is accepted only
    /// for the line and the plane conic.
    pub fn new(pair: Pair) -> Result<Family> {
        let pair = pair.normalize();
        let dim = pair.dimension();
        if dim < 1 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if dim == 1 && !(pair.is_line() || pair.is_plane_conic()) {
            return Err(Error::DimensionOneNotAllowed);
        }
        Ok(Family {
            pair,
            provenance: None,
        })
    }

    pub fn from_lists(degrees: &[u64], weights: &[u64]) -> Result<Family> {
        Family::new(Pair::new(degrees.to_vec(), weights.to_vec())?)
    }

    pub fn with_provenance(mut self, p: Provenance) -> Family {
        self.provenance = Some(p);
        self
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn weights(&self) -> &[u64] {
        &self.pair.weights
    }

    pub fn degrees(&self) -> &[u64] {
        &self.pair.degrees
    }

    pub fn fano_index(&self) -> i64 {
        self.pair.fano_index()
    }

    pub fn dimension(&self) -> i64 {
        self.pair.dimension()
    }
}
