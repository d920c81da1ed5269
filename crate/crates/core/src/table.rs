//! Table rows, renderers, golden transcriptions and the discrepancy diff.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::InvariantReport;
use crate::series::{GeneratorKind, GeneratorRecord, QuadricParam, SigmaEntry};

pub const SIGMA_TABLE: &str = include_str!("../tables/sigma.csv");
pub const GENERATOR_TABLE: &str = include_str!("../tables/generators.csv");
pub const SERIES_TABLE: &str = include_str!("../tables/series.csv");
pub const ALLOWLIST: &str = include_str!("../tables/allowlist.csv");

/// Transcription shipped with the crate, by name.
pub fn builtin_golden(name: &str) -> Option<&'static str> {
    match name {
        "sigma" => Some(SIGMA_TABLE),
        "generators" => Some(GENERATOR_TABLE),
        "series" => Some(SERIES_TABLE),
        _ => None,
    }
}

/// One printed row. `last` holds `h0(-K)` or the index; `sporadic` is empty
/// when the table has no such column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub no: String,
    pub variance: i64,
    pub ambient: String,
    pub degrees: String,
    pub dimension: String,
    pub degree: String,
    #[serde(alias = "h0", alias = "index")]
    pub last: String,
    pub sporadic: String,
}

fn sporadic_label(s: bool) -> String {
    if s { "Sporadic" } else { "Non-sporadic" }.to_string()
}

/// `P^N` when every weight is one, otherwise `P(1^a,2^b,...)`.
pub fn ambient_string(weights: &[u64]) -> String {
    if weights.iter().all(|&a| a == 1) {
        format!("P^{}", weights.len() - 1)
    } else {
        format!("P({})", power_list(weights))
    }
}

/// Sorted values with repeats folded into exponents.
fn power_list(values: &[u64]) -> String {
    let mut groups: Vec<(u64, usize)> = Vec::new();
    for &a in values {
        match groups.last_mut() {
            Some((v, c)) if *v == a => *c += 1,
            _ => groups.push((a, 1)),
        }
    }
    let parts: Vec<String> = groups
        .iter()
        .map(|&(v, c)| {
            if c == 1 {
                v.to_string()
            } else {
                format!("{v}^{c}")
            }
        })
        .collect();
    parts.join(",")
}

pub fn degrees_string(degrees: &[u64]) -> String {
    if degrees.is_empty() {
        "---".to_string()
    } else {
        degrees
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn degree_string(report: &InvariantReport) -> String {
    let q = &report.anticanonical_degree;
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rows for generators of a single variance, numbered `r.1, r.2, ...`. Both
/// variance-zero generators share the number `0.1`.
pub fn generator_rows(recs: &[GeneratorRecord], with_sporadic: bool) -> Vec<TableRow> {
    recs.iter()
        .enumerate()
        .map(|(i, g)| {
            let no = if g.variance == 0 {
                "0.1".to_string()
            } else {
                format!("{}.{}", g.variance, i + 1)
            };
            TableRow {
                no,
                variance: g.variance,
                ambient: ambient_string(g.family.weights()),
                degrees: degrees_string(g.family.degrees()),
                dimension: g.report.dimension.to_string(),
                degree: degree_string(&g.report),
                last: g.report.h0_anticanonical.to_string(),
                sporadic: if with_sporadic {
                    sporadic_label(g.report.sporadic)
                } else {
                    String::new()
                },
            }
        })
        .collect()
}

/// Writes `base + m` or `base + 2m` as an exponent or offset.
fn offset(base: i64, coeff: i64) -> String {
    let m = if coeff == 1 {
        "m".to_string()
    } else {
        format!("{coeff}m")
    };
    if base == 0 {
        m
    } else {
        format!("{base}+{m}")
    }
}

/// `deg0 * (2i)^m` written as `c*b^{m+e}` with `c` not divisible by `b`.
fn degree_closed_form(deg0: &BigInt, index: i64) -> String {
    let b = BigInt::from(2 * index);
    let mut c = deg0.clone();
    let mut e = 0;
    while &c % &b == BigInt::from(0) && c != BigInt::from(0) {
        c /= &b;
        e += 1;
    }
    let exp = if e == 0 {
        "m".to_string()
    } else {
        format!("{{m+{e}}}")
    };
    if c == BigInt::from(1) {
        format!("{b}^{exp}")
    } else {
        format!("{c}*{b}^{exp}")
    }
}

/// Parametric rows: series families numbered `1, 2, ...`, semiseries
/// families `1', 2', ...`; the last column holds the index.
pub fn sigma_rows(entries: &[SigmaEntry]) -> Result<Vec<TableRow>> {
    let mut series = 0;
    let mut semi = 0;
    let mut out = Vec::new();
    for e in entries {
        let base = e.family.instantiate(0);
        let report = e.family.base_report()?;
        let row = match e.family.m {
            QuadricParam::Symbolic => {
                series += 1;
                let w = base.weights();
                let ones = w.iter().filter(|&&a| a == 1).count() as i64;
                let ambient = if ones as usize == w.len() {
                    format!("P^{{{}}}", offset(ones - 1, 2))
                } else {
                    format!(
                        "P(1^{{{}}},{})",
                        offset(ones, 2),
                        power_list(&w[ones as usize..])
                    )
                };
                let quads = base.degrees().iter().filter(|&&d| d == 2).count() as i64;
                let mut degs = vec![if quads == 0 {
                    "2^m".to_string()
                } else {
                    format!("2^{{m+{quads}}}")
                }];
                degs.extend(
                    base.degrees()
                        .iter()
                        .filter(|&&d| d != 2)
                        .map(u64::to_string),
                );
                let deg0 = report
                    .degree_integer()
                    .ok_or_else(|| Error::Internal("non-integral degree in a series".into()))?;
                TableRow {
                    no: series.to_string(),
                    variance: e.variance,
                    ambient,
                    degrees: degs.join(","),
                    dimension: offset(report.dimension, 1),
                    degree: degree_closed_form(&deg0, report.index),
                    last: report.index.to_string(),
                    sporadic: sporadic_label(false),
                }
            }
            QuadricParam::Fixed(_) => {
                semi += 1;
                TableRow {
                    no: format!("{semi}'"),
                    variance: e.variance,
                    ambient: ambient_string(base.weights()),
                    degrees: degrees_string(base.degrees()),
                    dimension: report.dimension.to_string(),
                    degree: degree_string(&report),
                    last: report.index.to_string(),
                    sporadic: sporadic_label(e.family.kind == GeneratorKind::Semiseries),
                }
            }
        };
        out.push(row);
    }
    Ok(out)
}

/// Evaluates `a`, `m`, `2m` and sums of those.
fn eval_linear(s: &str, m: i64) -> Option<i64> {
    s.split('+')
        .map(|t| match t.strip_suffix('m') {
            Some("") => Some(m),
            Some(c) => c.parse::<i64>().ok().map(|c| c * m),
            None => t.parse().ok(),
        })
        .sum()
}

/// Replaces every `{...}` exponent and a bare `^m` with its value at `m`.
fn substitute(s: &str, m: i64) -> Option<String> {
    let mut out = String::new();
    let mut rest = s;
    while let Some(open) = rest.find('{') {
        let close = rest[open..].find('}')? + open;
        out.push_str(&rest[..open]);
        write!(out, "{}", eval_linear(&rest[open + 1..close], m)?).ok()?;
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Some(out.replace("^m", &format!("^{m}")))
}

fn expand_powers(list: &str) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|p| !p.is_empty()) {
        match part.split_once('^') {
            Some((v, c)) => {
                let v: u64 = v.parse().ok()?;
                out.extend(std::iter::repeat_n(v, c.parse().ok()?));
            }
            None => out.push(part.parse().ok()?),
        }
    }
    Some(out)
}

/// Weight list of an ambient string at quadric parameter `m`.
pub fn parse_ambient(s: &str, m: i64) -> Option<Vec<u64>> {
    let s = substitute(s, m)?;
    if let Some(n) = s.strip_prefix("P^") {
        return Some(vec![1; n.parse::<usize>().ok()? + 1]);
    }
    let mut w = expand_powers(s.strip_prefix("P(")?.strip_suffix(')')?)?;
    w.sort_unstable();
    Some(w)
}

/// Degree list at `m`; `---` is empty.
pub fn parse_degrees(s: &str, m: i64) -> Option<Vec<u64>> {
    if s == "---" {
        return Some(Vec::new());
    }
    let mut d = expand_powers(&substitute(s, m)?)?;
    d.sort_unstable();
    Some(d)
}

/// Value of a scalar cell at `m`: an integer, `a+m`, or `c*b^e`.
pub fn eval_cell(s: &str, m: i64) -> Option<BigInt> {
    if s.contains('^') {
        let s = substitute(s, m)?;
        let (c, pow) = match s.split_once('*') {
            Some((c, p)) => (c.parse::<BigInt>().ok()?, p.to_string()),
            None => (BigInt::from(1), s),
        };
        let (b, e) = pow.split_once('^')?;
        let b: BigInt = b.parse().ok()?;
        let e: u32 = e.parse().ok()?;
        return Some(c * Pow::pow(&b, e));
    }
    if s.contains('m') {
        return eval_linear(s, m).map(BigInt::from);
    }
    s.parse().ok()
}

fn is_parametric(row: &TableRow) -> bool {
    row.ambient.contains('m') || row.degrees.contains('m')
}

/// Instantiations compared for parametric rows.
const PARAM_CHECKS: i64 = 4;

fn key_at(row: &TableRow, m: i64) -> Option<(Vec<u64>, Vec<u64>)> {
    Some((
        parse_ambient(&row.ambient, m)?,
        parse_degrees(&row.degrees, m)?,
    ))
}

fn same_family(a: &TableRow, b: &TableRow) -> bool {
    if is_parametric(a) != is_parametric(b) {
        return false;
    }
    let checks = if is_parametric(a) { PARAM_CHECKS } else { 1 };
    (0..checks).all(|m| match (key_at(a, m), key_at(b, m)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    })
}

fn same_value(golden: &str, computed: &str, parametric: bool) -> bool {
    if golden == computed {
        return true;
    }
    let checks = if parametric { PARAM_CHECKS } else { 1 };
    (0..checks).all(|m| match (eval_cell(golden, m), eval_cell(computed, m)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    })
}

pub fn parse_rows(csv_text: &str) -> Result<Vec<TableRow>> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    rdr.deserialize()
        .collect::<std::result::Result<Vec<TableRow>, _>>()
        .map_err(|e| Error::Invalid(format!("golden table: {e}")))
}

/// One golden-versus-computed mismatch.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub table: String,
    pub no: String,
    pub field: String,
    pub golden: String,
    pub computed: String,
}

/// Every field mismatch between golden rows and computed rows. Rows are
/// matched by family; numbers, variance, dimension, degree, the last column
/// and the sporadic flag are compared. A golden row with an empty sporadic
/// cell skips that field.
/// `last_field` names the last column in reports (`h0` or `index`).
pub fn golden_diff(
    table: &str,
    last_field: &str,
    golden: &[TableRow],
    computed: &[TableRow],
) -> Vec<DiscrepancyReport> {
    let mut out = Vec::new();
    let mut used = BTreeSet::new();
    let report = |no: &str, field: &str, golden: &str, computed: &str| DiscrepancyReport {
        table: table.to_string(),
        no: no.to_string(),
        field: field.to_string(),
        golden: golden.to_string(),
        computed: computed.to_string(),
    };
    for g in golden {
        let hit = (0..computed.len()).find(|&i| !used.contains(&i) && same_family(g, &computed[i]));
        let Some(i) = hit else {
            out.push(report(&g.no, "row", "present", "missing"));
            continue;
        };
        used.insert(i);
        let c = &computed[i];
        let param = is_parametric(g);
        if g.no != c.no {
            out.push(report(&g.no, "no", &g.no, &c.no));
        }
        if g.variance != c.variance {
            out.push(report(
                &g.no,
                "variance",
                &g.variance.to_string(),
                &c.variance.to_string(),
            ));
        }
        for (field, p, q) in [
            ("dimension", &g.dimension, &c.dimension),
            ("degree", &g.degree, &c.degree),
            (last_field, &g.last, &c.last),
        ] {
            if !same_value(p, q, param) {
                out.push(report(&g.no, field, p, q));
            }
        }
        if !g.sporadic.is_empty() && g.sporadic != c.sporadic {
            out.push(report(&g.no, "sporadic", &g.sporadic, &c.sporadic));
        }
    }
    for (i, c) in computed.iter().enumerate() {
        if !used.contains(&i) {
            out.push(report(&c.no, "row", "missing", "present"));
        }
    }
    out
}

/// A documented discrepancy with the recomputed value and how it follows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllowEntry {
    pub table: String,
    pub no: String,
    pub field: String,
    pub golden: String,
    pub computed: String,
    pub note: String,
}

impl AllowEntry {
    pub fn covers(&self, d: &DiscrepancyReport) -> bool {
        self.table == d.table
            && self.no == d.no
            && self.field == d.field
            && self.golden == d.golden
            && self.computed == d.computed
    }
}

pub fn parse_allowlist(csv_text: &str) -> Result<Vec<AllowEntry>> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    rdr.deserialize()
        .collect::<std::result::Result<Vec<AllowEntry>, _>>()
        .map_err(|e| Error::Invalid(format!("allowlist: {e}")))
}

/// `(documented, undocumented)`.
pub fn split_documented(
    diffs: Vec<DiscrepancyReport>,
    allow: &[AllowEntry],
) -> (Vec<DiscrepancyReport>, Vec<DiscrepancyReport>) {
    diffs
        .into_iter()
        .partition(|d| allow.iter().any(|a| a.covers(d)))
}

pub fn render_csv(rows: &[TableRow], last_header: &str) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record([
        "no",
        "variance",
        "ambient",
        "degrees",
        "dimension",
        "degree",
        last_header,
        "sporadic",
    ])
    .map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Internal(e.to_string()))?)
        .map_err(|e| Error::Internal(e.to_string()))
}

pub fn render_md(rows: &[TableRow], last_header: &str) -> String {
    let mut s = format!(
        "| No. | Variance | P | Degrees | Dimension | (-K)^dim | {last_header} | Sporadic |\n"
    );
    s.push_str("|---|---|---|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            r.no, r.variance, r.ambient, r.degrees, r.dimension, r.degree, r.last, r.sporadic
        );
    }
    s
}

/// Machine-readable record of one generator.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorJson<'a> {
    pub no: &'a str,
    pub weights: &'a [u64],
    pub degrees: &'a [u64],
    pub kind: GeneratorKind,
    pub invariants: &'a InvariantReport,
}

pub fn render_json(recs: &[GeneratorRecord], rows: &[TableRow]) -> Result<String> {
    let out: Vec<GeneratorJson> = recs
        .iter()
        .zip(rows)
        .map(|(g, r)| GeneratorJson {
            no: &r.no,
            weights: g.family.weights(),
            degrees: g.family.degrees(),
            kind: g.kind,
            invariants: &g.report,
        })
        .collect();
    serde_json::to_string_pretty(&out).map_err(|e| Error::Internal(e.to_string()))
}

/// Degree at `m` of a parametric row, for callers that want integers.
pub fn degree_at(row: &TableRow, m: i64) -> Option<i64> {
    eval_cell(&row.degree, m)?.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambient_strings() {
        assert_eq!(ambient_string(&[1, 1, 1]), "P^2");
        assert_eq!(
            ambient_string(&[1; 11].iter().copied().chain([2]).collect::<Vec<_>>()),
            "P(1^11,2)"
        );
        assert_eq!(ambient_string(&[1, 1, 2, 3]), "P(1^2,2,3)");
        assert_eq!(ambient_string(&[1, 2, 2, 3]), "P(1,2^2,3)");
        assert_eq!(degrees_string(&[]), "---");
        assert_eq!(degrees_string(&[3, 4]), "3,4");
    }

    #[test]
    fn parametric_parsing() {
        assert_eq!(parse_ambient("P^{4+2m}", 1).unwrap(), vec![1; 7]);
        assert_eq!(
            parse_ambient("P(1^{4+2m},3)", 0).unwrap(),
            vec![1, 1, 1, 1, 3]
        );
        assert_eq!(
            parse_ambient("P(1^11,3,3,4)", 0).unwrap(),
            parse_ambient("P(1^11,3^2,4)", 0).unwrap()
        );
        assert_eq!(parse_degrees("2^m,3", 2).unwrap(), vec![2, 2, 3]);
        assert_eq!(parse_degrees("2^{m+1}", 0).unwrap(), vec![2]);
        assert_eq!(eval_cell("9*6^{m+1}", 1).unwrap(), BigInt::from(324));
        assert_eq!(
            eval_cell("3*2^{3+2m}", 0).unwrap(),
            eval_cell("6*4^{m+1}", 0).unwrap()
        );
        assert_eq!(
            eval_cell("3*2^{3+2m}", 3).unwrap(),
            eval_cell("6*4^{m+1}", 3).unwrap()
        );
        assert_eq!(eval_cell("3+m", 2).unwrap(), BigInt::from(5));
        assert_eq!(eval_cell("9*2^m", 2).unwrap(), BigInt::from(36));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(degree_closed_form(&BigInt::from(54), 3), "9*6^{m+1}");
        assert_eq!(degree_closed_form(&BigInt::from(2), 1), "2^{m+1}");
        assert_eq!(degree_closed_form(&BigInt::from(9), 1), "9*2^m");
    }

    #[test]
    fn golden_files_parse() {
        assert_eq!(parse_rows(SIGMA_TABLE).unwrap().len(), 11);
        assert_eq!(parse_rows(GENERATOR_TABLE).unwrap().len(), 58);
        assert_eq!(parse_rows(SERIES_TABLE).unwrap().len(), 69);
        assert!(!parse_allowlist(ALLOWLIST).unwrap().is_empty());
    }
}
