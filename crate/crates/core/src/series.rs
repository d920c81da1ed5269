//! Expansions `X^l_m`, stripping back to generators, and the decomposition of
//! families with fixed `dim - codim`.

use serde::Serialize;

use crate::enumerate::enumerate_all;
use crate::error::{Error, Result};
use crate::invariants::{invariants, is_sporadic, InvariantReport};
use crate::pair::{Family, Pair, Provenance};
use crate::smoothness::is_combinatorially_smooth;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Series,
    Semiseries,
    NotAGenerator,
}

/// A generator with its invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub family: Family,
    pub kind: GeneratorKind,
    pub variance: i64,
    pub report: InvariantReport,
}

impl GeneratorRecord {
    pub fn new(family: Family, kind: GeneratorKind) -> Result<GeneratorRecord> {
        let report = invariants(&family)?;
        Ok(GeneratorRecord {
            variance: report.variance,
            family,
            kind,
            report,
        })
    }
}

/// Appends `l + 2m` unit weights and `m` quadrics.
pub fn expand(family: &Family, l: u64, m: u64) -> Family {
    let mut weights = family.weights().to_vec();
    let mut degrees = family.degrees().to_vec();
    weights.extend(std::iter::repeat_n(1, (l + 2 * m) as usize));
    degrees.extend(std::iter::repeat_n(2, m as usize));
    let pair = Pair { weights, degrees }.normalize();
    Family::new(pair)
        .expect("adding unit weights never lowers the dimension")
        .with_provenance(Provenance::Expanded)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StripResult {
    Minimal,
    Stripped { generator: Family, l: u64, m: u64 },
}

/// Inverse of [`expand`] on index-one generators. Variance-zero families
/// strip to the line (codimension zero) or to the plane conic.
pub fn strip(family: &Family) -> Result<StripResult> {
    let pair = family.pair();
    let index = pair.fano_index();
    if index < 1 {
        return Err(Error::NotFano(index));
    }
    let all_ones = pair.weights.iter().all(|&a| a == 1);
    if all_ones && pair.degrees.iter().all(|&d| d == 2) {
        if pair.is_line() || pair.is_plane_conic() {
            return Ok(StripResult::Minimal);
        }
        let (generator, l, m) = if pair.k() == 0 {
            (Family::from_lists(&[], &[1, 1])?, index as u64 - 2, 0)
        } else {
            (
                Family::from_lists(&[2], &[1, 1, 1])?,
                index as u64 - 1,
                pair.k() as u64 - 1,
            )
        };
        return Ok(StripResult::Stripped { generator, l, m });
    }
    let m = pair.degrees.iter().filter(|&&d| d == 2).count();
    let l = (index - 1) as usize;
    let needed = 2 * m + l;
    let found = pair.ones();
    if found < needed {
        return Err(Error::StripFailed { needed, found });
    }
    if m == 0 && l == 0 {
        return Ok(StripResult::Minimal);
    }
    let degrees: Vec<u64> = pair.degrees.iter().copied().filter(|&d| d != 2).collect();
    let weights: Vec<u64> = pair.weights[needed..].to_vec();
    let generator = Family::new(Pair::new(degrees, weights)?)?;
    Ok(StripResult::Stripped {
        generator,
        l: l as u64,
        m: m as u64,
    })
}

/// Series generator, semiseries generator, or neither. Assumes the family
/// passes the smoothness check.
pub fn classify_generator(family: &Family) -> GeneratorKind {
    let pair = family.pair();
    if pair.is_line() || pair.is_plane_conic() {
        return GeneratorKind::Series;
    }
    let index = pair.fano_index();
    if is_sporadic(pair) {
        if index == 1 {
            GeneratorKind::Semiseries
        } else {
            GeneratorKind::NotAGenerator
        }
    } else if index == 1 && pair.s2() == pair.k() {
        GeneratorKind::Series
    } else {
        GeneratorKind::NotAGenerator
    }
}

/// The quadric parameter of a parametric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadricParam {
    Symbolic,
    Fixed(u64),
}

/// `generator^l_m` with `m` symbolic (series) or fixed (semiseries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricFamily {
    pub generator: Family,
    pub kind: GeneratorKind,
    pub l: u64,
    pub m: QuadricParam,
}

impl ParametricFamily {
    /// Instantiates at `m`; a fixed parameter ignores the argument.
    pub fn instantiate(&self, m: u64) -> Family {
        let m = match self.m {
            QuadricParam::Symbolic => m,
            QuadricParam::Fixed(v) => v,
        };
        expand(&self.generator, self.l, m)
    }

    /// Invariants at `m = 0`.
    pub fn base_report(&self) -> Result<InvariantReport> {
        invariants(&self.instantiate(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaEntry {
    pub family: ParametricFamily,
    pub variance: i64,
    /// Smoothness of every checked instantiation.
    pub instantiations_smooth: bool,
    pub instantiations_checked: u64,
}

/// Families with `dim - codim = c`: series generators of variance `r <= c`
/// expanded by `l = c - r` with free quadric parameter, then semiseries
/// generators expanded by `l = c - r`. Series instantiations are checked for
/// `m = 0..=instantiate_to`.
pub fn sigma_c(c: u64, instantiate_to: u64) -> Result<Vec<SigmaEntry>> {
    let mut series = Vec::new();
    let mut semi = Vec::new();
    for r in 0..=c {
        for rec in enumerate_all(r)? {
            if r == 0 && !rec.family.pair().is_plane_conic() {
                continue;
            }
            let l = c - r;
            let (m, target) = match rec.kind {
                GeneratorKind::Series => (QuadricParam::Symbolic, &mut series),
                GeneratorKind::Semiseries => (QuadricParam::Fixed(0), &mut semi),
                GeneratorKind::NotAGenerator => {
                    return Err(Error::Internal(
                        "enumeration emitted a non-generator".into(),
                    ))
                }
            };
            let family = ParametricFamily {
                generator: rec.family.clone(),
                kind: rec.kind,
                l,
                m,
            };
            let checks: Vec<u64> = match m {
                QuadricParam::Symbolic => (0..=instantiate_to).collect(),
                QuadricParam::Fixed(v) => vec![v],
            };
            let smooth = checks
                .iter()
                .all(|&t| is_combinatorially_smooth(family.instantiate(t).pair()).smooth);
            target.push(SigmaEntry {
                family,
                variance: r as i64,
                instantiations_smooth: smooth,
                instantiations_checked: checks.len() as u64,
            });
        }
    }
    series.extend(semi);
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(d: &[u64], a: &[u64]) -> Family {
        Family::from_lists(d, a).unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(
            expand(&fam(&[3], &[1; 4]), 1, 0).pair(),
            fam(&[3], &[1; 5]).pair()
        );
        assert_eq!(
            expand(&fam(&[3], &[1; 5]), 0, 1).pair(),
            fam(&[2, 3], &[1; 7]).pair()
        );
        let f = fam(&[6], &[1, 1, 2, 3]);
        assert_eq!(expand(&f, 0, 0).pair(), f.pair());
    }

    #[test]
    fn strip_examples() {
        assert_eq!(
            strip(&fam(&[2, 4], &[1; 7])).unwrap(),
            StripResult::Stripped {
                generator: fam(&[4], &[1; 5]),
                l: 0,
                m: 1
            }
        );
        assert_eq!(
            strip(&fam(&[3], &[1; 5])).unwrap(),
            StripResult::Stripped {
                generator: fam(&[3], &[1; 4]),
                l: 1,
                m: 0
            }
        );
        assert_eq!(
            strip(&fam(&[6], &[1, 1, 1, 1, 3])).unwrap(),
            StripResult::Minimal
        );
    }

    #[test]
    fn strip_variance_zero() {
        assert_eq!(
            strip(&fam(&[2, 2], &[1; 7])).unwrap(),
            StripResult::Stripped {
                generator: fam(&[2], &[1, 1, 1]),
                l: 2,
                m: 1
            }
        );
        assert_eq!(
            strip(&fam(&[], &[1; 4])).unwrap(),
            StripResult::Stripped {
                generator: fam(&[], &[1, 1]),
                l: 2,
                m: 0
            }
        );
        assert_eq!(strip(&fam(&[], &[1, 1])).unwrap(), StripResult::Minimal);
    }

    #[test]
    fn strip_failure_is_reported() {
        let g = fam(&[2], &[1, 2, 2, 3]);
        assert_eq!(
            strip(&g),
            Err(Error::StripFailed {
                needed: 7,
                found: 1
            })
        );
    }

    #[test]
    fn generator_kinds() {
        assert_eq!(
            classify_generator(&fam(&[6, 6], &[1, 1, 1, 1, 1, 1, 1, 3, 3])),
            GeneratorKind::Series
        );
        assert_eq!(
            classify_generator(&fam(&[6, 6], &[1, 1, 1, 2, 2, 3, 3])),
            GeneratorKind::Semiseries
        );
        assert_eq!(
            classify_generator(&fam(&[2, 3], &[1; 7])),
            GeneratorKind::NotAGenerator
        );
    }
}
