use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wci::degree_one::{in_class_p, is_degree_one, prime_power_degree};
use wci::enumerate::{bound_check, enumerate_kind, Kind};
use wci::error::Error;
use wci::invariants::invariants;
use wci::nef::{
    classify_morphism, find_minimal_morphism, find_nef_partition, find_preminimal_morphism,
    is_nef_partition_map, partition_from_map, slacks,
};
use wci::pair::{Family, Pair};
use wci::series::{classify_generator, sigma_c};
use wci::smoothness::{all_profiles, check_subset, is_combinatorially_smooth};
use wci::table::{
    builtin_golden, generator_rows, golden_diff, parse_allowlist, parse_rows, render_csv,
    render_json, render_md, sigma_rows, split_documented, TableRow, ALLOWLIST,
};

#[derive(Parser)]
#[command(
    name = "wci",
    version,
    about = "Smooth Fano weighted complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    All,
    Pn,
    Series,
    Semiseries,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::All => Kind::All,
            KindArg::Pn => Kind::Pn,
            KindArg::Series => Kind::Series,
            KindArg::Semiseries => Kind::Semiseries,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Invariants and smoothness verdict of one pair
    Classify {
        #[arg(short = 'a', long = "weights", value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        /// Empty for a weighted projective space
        #[arg(short = 'd', long = "degrees", value_delimiter = ',', num_args = 0..)]
        degrees: Vec<u64>,
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        require_smooth: bool,
    },
    /// Generators of a given variance
    Enumerate {
        #[arg(long)]
        variance: u64,
        #[arg(long, value_enum, default_value = "all")]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// CSV path, or one of sigma, generators, series
        #[arg(long)]
        golden: Option<String>,
        /// Defaults to the shipped allowlist
        #[arg(long)]
        allowlist: Option<String>,
        #[arg(long, default_value_t = 7)]
        cap: u64,
    },
    /// Parametric families with dim - codim = c
    Sigma {
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 3)]
        instantiate_to: u64,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long)]
        golden: Option<String>,
        #[arg(long)]
        allowlist: Option<String>,
        #[arg(long, default_value_t = 7)]
        cap: u64,
    },
    /// s2 <= variance, nef partitions and minimal morphisms over enumerated families
    Conjectures {
        #[arg(long, default_value_t = 4)]
        variance_cap: u64,
        #[arg(long, value_enum, default_value = "all")]
        kind: KindArg,
    },
    /// Degree-one generators and their prime-factor checks
    DegreeOne {
        #[arg(long)]
        variance: u64,
    },
    /// Morphism and nef partition certificates for one pair
    Nef {
        #[arg(short = 'a', long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(short = 'd', long, value_delimiter = ',', num_args = 0..)]
        degrees: Vec<u64>,
        #[arg(long)]
        strong: bool,
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        partition: bool,
    },
    /// Enumerated counts against closed-form bounds
    Bounds {
        #[arg(long)]
        variance: u64,
    },
}

enum Failure {
    Discrepancy(String),
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Internal(_) | Error::Unsat(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn load_text(source: &str) -> std::result::Result<String, Failure> {
    match builtin_golden(source) {
        Some(t) => Ok(t.to_string()),
        None => {
            std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))
        }
    }
}

fn table_name(source: &str) -> String {
    std::path::Path::new(source)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| source.to_string())
}

fn emit(
    rows: &[TableRow],
    format: Format,
    last: &str,
    json: impl FnOnce() -> wci::error::Result<String>,
) -> Outcome {
    let text = match format {
        Format::Md => render_md(rows, last),
        Format::Csv => render_csv(rows, last)?,
        Format::Json => json()? + "\n",
    };
    print!("{text}");
    Ok(())
}

/// Diffs against a golden file restricted to `keep`; exit status 1 on
/// undocumented discrepancies.
fn check_golden(
    golden: &str,
    allowlist: Option<&str>,
    last_field: &str,
    computed: &[TableRow],
    keep: impl Fn(&TableRow) -> bool,
) -> Outcome {
    let rows: Vec<TableRow> = parse_rows(&load_text(golden)?)?
        .into_iter()
        .filter(keep)
        .collect();
    let allow = match allowlist {
        Some(p) => parse_allowlist(&load_text(p)?)?,
        None => parse_allowlist(ALLOWLIST)?,
    };
    let (documented, undocumented) = split_documented(
        golden_diff(&table_name(golden), last_field, &rows, computed),
        &allow,
    );
    for d in &documented {
        eprintln!(
            "documented: {} {} {}: golden {} computed {}",
            d.table, d.no, d.field, d.golden, d.computed
        );
    }
    for d in &undocumented {
        eprintln!(
            "DISCREPANCY: {} {} {}: golden {} computed {}",
            d.table, d.no, d.field, d.golden, d.computed
        );
    }
    if undocumented.is_empty() {
        Ok(())
    } else {
        Err(Failure::Discrepancy(format!(
            "{} undocumented discrepancies",
            undocumented.len()
        )))
    }
}

fn classify(weights: Vec<u64>, degrees: Vec<u64>, explain: bool, require_smooth: bool) -> Outcome {
    let family = Family::new(Pair::new(degrees, weights)?)?;
    let verdict = is_combinatorially_smooth(family.pair());
    // smoothness is still reported when the index is not positive
    let report = match invariants(&family) {
        Ok(r) => json!(r),
        Err(e) => json!({ "error": e.to_string(), "index": family.fano_index() }),
    };
    let mut out = json!({
        "weights": family.weights(),
        "degrees": family.degrees(),
        "invariants": report,
        "generator": classify_generator(&family),
        "smoothness": verdict,
    });
    if explain {
        let subsets: Vec<_> = all_profiles(family.pair())
            .into_iter()
            .map(|p| {
                let v = check_subset(family.pair(), &p);
                json!({ "profile": p, "verdict": v })
            })
            .collect();
        out["subsets"] = json!(subsets);
    }
    println!("{}", to_json(&out));
    if require_smooth && !verdict.smooth {
        return Err(Failure::Discrepancy(
            "pair is not combinatorially smooth".into(),
        ));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    variance: u64,
    kind: KindArg,
    format: Format,
    golden: Option<String>,
    allowlist: Option<String>,
    cap: u64,
) -> Outcome {
    if variance > cap {
        return Err(Failure::Usage(format!(
            "variance {variance} exceeds the cap {cap}"
        )));
    }
    let recs = enumerate_kind(variance, kind.into())?;
    let rows = generator_rows(&recs, true);
    emit(&rows, format, "h0", || render_json(&recs, &rows))?;
    match golden {
        Some(g) => check_golden(&g, allowlist.as_deref(), "h0", &rows, |r| {
            r.variance == variance as i64
        }),
        None => Ok(()),
    }
}

fn sigma(
    c: u64,
    instantiate_to: u64,
    format: Format,
    golden: Option<String>,
    allowlist: Option<String>,
    cap: u64,
) -> Outcome {
    if c > cap {
        return Err(Failure::Usage(format!("c = {c} exceeds the cap {cap}")));
    }
    let entries = sigma_c(c, instantiate_to)?;
    let rows = sigma_rows(&entries)?;
    emit(&rows, format, "index", || {
        let out: Vec<_> = entries
            .iter()
            .zip(&rows)
            .map(|(e, r)| {
                json!({
                    "no": r.no,
                    "generator_weights": e.family.generator.weights(),
                    "generator_degrees": e.family.generator.degrees(),
                    "kind": e.family.kind,
                    "l": e.family.l,
                    "m": e.family.m,
                    "variance": e.variance,
                    "row": r,
                    "instantiations_smooth": e.instantiations_smooth,
                    "instantiations_checked": e.instantiations_checked,
                })
            })
            .collect();
        Ok(to_json(&out))
    })?;
    if let Some(bad) = entries.iter().find(|e| !e.instantiations_smooth) {
        return Err(Failure::Internal(format!(
            "an instantiation of {:?} fails the smoothness check",
            bad.family.generator.pair()
        )));
    }
    match golden {
        Some(g) => check_golden(&g, allowlist.as_deref(), "index", &rows, |_| true),
        None => Ok(()),
    }
}

fn conjectures(cap: u64, kind: KindArg) -> Outcome {
    let mut checked = 0u64;
    let mut counterexamples = Vec::new();
    let mut nef_found = 0u64;
    let mut nef_missing = Vec::new();
    // every enumerated generator is CS; the second population drops curves
    let mut minimal_all = (0u64, Vec::new());
    let mut minimal_dim2 = (0u64, Vec::new());
    for r in 0..=cap {
        for g in enumerate_kind(r, kind.into())? {
            let base = &g.family;
            if find_nef_partition(base.pair(), true, false).is_some() {
                nef_found += 1;
            } else {
                nef_missing.push(base.pair().clone());
            }
            let found = matches!(
                find_minimal_morphism(base.pair(), false),
                wci::nef::Search::Found(_)
            );
            let mut populations = vec![&mut minimal_all];
            if g.report.dimension >= 2 {
                populations.push(&mut minimal_dim2);
            }
            for (n, missing) in populations {
                *n += 1;
                if !found {
                    missing.push(base.pair().clone());
                }
            }
            for l in 0..=2 {
                for m in 0..=2 {
                    let f = wci::series::expand(base, l, m);
                    checked += 1;
                    if !wci::nef::conjecture_main_check(&f) {
                        counterexamples.push(f.pair().clone());
                    }
                }
            }
        }
    }
    println!(
        "{}",
        to_json(&json!({
            "variance_cap": cap,
            "families_checked": checked,
            "s2_counterexamples": counterexamples,
            "nice_nef_partitions_found": nef_found,
            "nice_nef_partitions_missing": nef_missing,
            "minimal_morphism": {
                "all_cs": {"checked": minimal_all.0, "candidates": minimal_all.1},
                "dimension_at_least_2": {"checked": minimal_dim2.0, "candidates": minimal_dim2.1},
            },
        }))
    );
    if counterexamples.is_empty() {
        Ok(())
    } else {
        Err(Failure::Discrepancy(format!(
            "{} counterexamples",
            counterexamples.len()
        )))
    }
}

fn degree_one(variance: u64) -> Outcome {
    let mut out = Vec::new();
    for g in enumerate_kind(variance, Kind::All)? {
        if !is_degree_one(&g.family) {
            continue;
        }
        let pair = g.family.pair();
        let prime_power = prime_power_degree(pair);
        out.push(json!({
            "weights": pair.weights,
            "degrees": pair.degrees,
            "sporadic": g.report.sporadic,
            "in_class_p": in_class_p(pair),
            "prime_power_degree": prime_power,
        }));
    }
    println!("{}", to_json(&out));
    Ok(())
}

fn nef(
    weights: Vec<u64>,
    degrees: Vec<u64>,
    strong: bool,
    minimal: bool,
    partition: bool,
) -> Outcome {
    let pair = Pair::normalized_from(degrees, weights)?;
    let mut out = json!({ "weights": pair.weights, "degrees": pair.degrees });
    match find_preminimal_morphism(&pair) {
        Ok(map) => {
            out["preminimal"] = json!({
                "map": map,
                "class": classify_morphism(&pair, &map),
                "slacks": slacks(&pair, &map),
                "nef_map": is_nef_partition_map(&pair, &map, false),
                "strong": is_nef_partition_map(&pair, &map, true),
            });
            if strong {
                out["strong_partition"] = json!(is_nef_partition_map(&pair, &map, true)
                    .then(|| partition_from_map(&pair, &map))
                    .flatten());
            }
        }
        Err(e) => out["preminimal"] = json!({ "error": e.to_string() }),
    }
    if minimal {
        out["minimal"] = json!(find_minimal_morphism(&pair, false));
    }
    if partition {
        out["partition"] = json!(find_nef_partition(&pair, true, false));
        out["partition_any"] = json!(find_nef_partition(&pair, false, false));
    }
    println!("{}", to_json(&out));
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify {
            weights,
            degrees,
            explain,
            require_smooth,
        } => classify(weights, degrees, explain, require_smooth),
        Command::Enumerate {
            variance,
            kind,
            format,
            golden,
            allowlist,
            cap,
        } => enumerate(variance, kind, format, golden, allowlist, cap),
        Command::Sigma {
            c,
            instantiate_to,
            format,
            golden,
            allowlist,
            cap,
        } => sigma(c, instantiate_to, format, golden, allowlist, cap),
        Command::Conjectures { variance_cap, kind } => conjectures(variance_cap, kind),
        Command::DegreeOne { variance } => degree_one(variance),
        Command::Nef {
            weights,
            degrees,
            strong,
            minimal,
            partition,
        } => nef(weights, degrees, strong, minimal, partition),
        Command::Bounds { variance } => {
            println!("{}", to_json(&bound_check(variance)?));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("WCI_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Discrepancy(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
