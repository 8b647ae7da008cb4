//! Command-line surface for the engine: coefficient queries, table
//! generation, and the verification harness.
//!
//! Conventions shared by every subcommand:
//!
//! * Weights are comma-separated integer labels; the even|odd split is
//!   inferred from `--m`/`--n`.
//! * Default output is compact JSON on standard output, with every numeric
//!   payload an exact `"p/q"` string — never a float.  Output is
//!   byte-stable for fixed inputs and seed.
//! * Exit codes: 0 success, 1 domain error, 2 usage error.  Domain errors
//!   are serialized to standard error as `{"code":…,"detail":…}` with the
//!   stable codes `DegenerateRoots`, `InvalidBranch`, `NotRealizable`,
//!   `Inconsistent`, `InvalidShift`.
//! * The `table` subcommand caches its JSON payload under the directory
//!   named by `SUPERWIG_CACHE_DIR` (content-addressed; see the library's
//!   cache module).

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use superwig::algebra::{roots, HighestWeight, RootVariant, Shape};
use superwig::branching::{branch, count_patterns, enumerate_patterns, GTPattern};
use superwig::cache::{lookup, store, TableDescriptor};
use superwig::error::Error;
use superwig::oracle::realize_covariant;
use superwig::rwc::{BranchContext, Direction, RWCKey};
use superwig::verify::{
    all_checks, build_families, check_classical_chain_values, check_first_kind_oracle_equivalence,
    check_full_coupling_orthonormality, check_nonunitary_branch, check_positivity,
    check_second_kind_oracle_equivalence, check_sum_rules, check_symmetry_constant, CheckReport,
};
use superwig::wigner::{full_wc, shift_chains, EtaReport};

#[derive(Parser)]
#[command(
    name = "superwig",
    version,
    about = "Exact reduced and full Wigner coefficients for gl(m|n) in the Gelfand-Tsetlin basis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Covariant,
    Contravariant,
}

impl From<DirectionArg> for Direction {
    fn from(value: DirectionArg) -> Direction {
        match value {
            DirectionArg::Covariant => Direction::Covariant,
            DirectionArg::Contravariant => Direction::Contravariant,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Barred,
    Unbarred,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic roots of a weight, in either or both flavours.
    Roots {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Weight labels, comma-separated.
        #[arg(long = "Lambda")]
        big_lambda: String,
        /// Flavour to print; prints both when omitted.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Branch children of a dominant weight, ascending.
    Branch {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "Lambda")]
        big_lambda: String,
    },
    /// Gelfand-Tsetlin patterns under the default branching rule.
    Patterns {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "Lambda")]
        big_lambda: String,
        /// Print only the pattern count.
        #[arg(long)]
        count: bool,
    },
    /// One reduced Wigner coefficient (sign and radicand).
    Rwc {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Parent weight labels.
        #[arg(long = "Lambda")]
        big_lambda: String,
        /// Child weight labels.
        #[arg(long = "lambda")]
        small_lambda: String,
        /// Shifted index r.
        #[arg(long)]
        r: usize,
        /// Child shift index u; omit for the u-absent coefficient.
        #[arg(long)]
        u: Option<usize>,
    },
    /// Full Wigner coefficients from a source pattern and vector index.
    Wc {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Source pattern rows, top row first; rows separated by ';',
        /// labels by ','.  Example for gl(1|1): "2,0;1".
        #[arg(long)]
        pattern: String,
        /// Vector-module index p.
        #[arg(long)]
        p: usize,
        /// Shift indices r_p,…,r_{m+n}, comma-separated; omit to
        /// enumerate every valid chain.
        #[arg(long)]
        shifts: Option<String>,
    },
    /// Measure the symmetry constant and compare closed-form candidates.
    Eta {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "Lambda")]
        big_lambda: String,
        /// Raising index r.
        #[arg(long)]
        r: usize,
    },
    /// Closed-form coefficient tables over a label-bounded family.
    Table {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Inclusive bound on the absolute value of weight labels.
        #[arg(long)]
        bound: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Run verification suites; exits 0 iff every suite passes.
    Verify {
        /// Suite name: all, sumrules, or a specific suite.
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long = "max-label", default_value_t = 5)]
        max_label: i64,
    },
}

/// Why a run failed: malformed request vs. valid request outside the domain.
enum RunError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Domain(e)
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(RunError::Usage(message)) => {
            eprintln!("usage error: {message}");
            2
        }
        Err(RunError::Domain(error)) => {
            eprintln!(
                "{}",
                serde_json::to_string(&error).expect("error serialization is infallible")
            );
            1
        }
    };
    std::process::exit(code);
}

fn parse_labels(text: &str) -> Result<Vec<i64>, RunError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| RunError::Usage(format!("label {part:?} is not an integer")))
        })
        .collect()
}

fn parse_weight(m: usize, n: usize, text: &str) -> Result<HighestWeight, RunError> {
    let labels = parse_labels(text)?;
    if labels.len() != m + n {
        return Err(RunError::Usage(format!(
            "expected {} labels for gl({m}|{n}), got {}",
            m + n,
            labels.len()
        )));
    }
    Ok(HighestWeight::from_parts(m, n, &labels)?)
}

fn parse_dominant(m: usize, n: usize, text: &str) -> Result<HighestWeight, RunError> {
    let weight = parse_weight(m, n, text)?;
    if !weight.is_dominant() {
        return Err(RunError::Domain(Error::invalid_branch(format!(
            "{weight} is not dominant"
        ))));
    }
    Ok(weight)
}

fn parse_pattern(m: usize, n: usize, text: &str) -> Result<GTPattern, RunError> {
    let shape = Shape::new(m, n)?;
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(parse_labels)
        .collect::<Result<_, _>>()?;
    Ok(GTPattern::from_label_rows(shape, &rows)?)
}

fn pattern_rows(pattern: &GTPattern) -> Vec<Vec<i64>> {
    pattern
        .rows()
        .iter()
        .map(|row| row.labels().to_vec())
        .collect()
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<i32, RunError> {
    println!(
        "{}",
        serde_json::to_string(value).expect("JSON serialization is infallible")
    );
    Ok(0)
}

fn dispatch(command: Command) -> Result<i32, RunError> {
    match command {
        Command::Roots {
            m,
            n,
            big_lambda,
            variant,
        } => {
            let weight = parse_weight(m, n, &big_lambda)?;
            match variant {
                Some(VariantArg::Barred) => print_json(&roots(&weight, RootVariant::Barred)),
                Some(VariantArg::Unbarred) => print_json(&roots(&weight, RootVariant::Unbarred)),
                None => print_json(&json!({
                    "barred": roots(&weight, RootVariant::Barred),
                    "unbarred": roots(&weight, RootVariant::Unbarred),
                })),
            }
        }
        Command::Branch { m, n, big_lambda } => {
            let weight = parse_dominant(m, n, &big_lambda)?;
            let children: Vec<Vec<i64>> = branch(&weight)
                .iter()
                .map(|child| child.labels().to_vec())
                .collect();
            print_json(&children)
        }
        Command::Patterns {
            m,
            n,
            big_lambda,
            count,
        } => {
            let weight = parse_dominant(m, n, &big_lambda)?;
            if count {
                print_json(&count_patterns(&weight))
            } else {
                let patterns: Vec<Vec<Vec<i64>>> = enumerate_patterns(&weight)
                    .iter()
                    .map(pattern_rows)
                    .collect();
                print_json(&patterns)
            }
        }
        Command::Rwc {
            direction,
            m,
            n,
            big_lambda,
            small_lambda,
            r,
            u,
        } => {
            let parent = parse_dominant(m, n, &big_lambda)?;
            if n == 0 {
                return Err(RunError::Usage(
                    "reduced coefficients need n ≥ 1; the child shape is gl(m|n-1)".to_string(),
                ));
            }
            let child = parse_weight(m, n - 1, &small_lambda)?;
            let ctx = BranchContext::new(parent, child)?;
            let value = ctx.rwc(&RWCKey {
                direction: direction.into(),
                r,
                u,
            })?;
            print_json(&value)
        }
        Command::Wc {
            direction,
            m,
            n,
            pattern,
            p,
            shifts,
        } => {
            let source = parse_pattern(m, n, &pattern)?;
            let direction: Direction = direction.into();
            match shifts {
                Some(text) => {
                    let shifts: Vec<usize> = parse_labels(&text)?
                        .into_iter()
                        .map(|v| {
                            usize::try_from(v).map_err(|_| {
                                RunError::Usage(format!("shift index {v} is not positive"))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    let wc = full_wc(direction, &source, p, &shifts)?;
                    print_json(&json!({
                        "target": pattern_rows(&wc.target),
                        "value": wc.value,
                    }))
                }
                None => {
                    let mut records = Vec::new();
                    for chain in shift_chains(direction, &source, p) {
                        let wc = full_wc(direction, &source, p, &chain)?;
                        records.push(json!({
                            "shifts": chain,
                            "target": pattern_rows(&wc.target),
                            "value": wc.value,
                        }));
                    }
                    print_json(&records)
                }
            }
        }
        Command::Eta {
            m,
            n,
            big_lambda,
            r,
        } => {
            let weight = parse_dominant(m, n, &big_lambda)?;
            let module = realize_covariant(&weight)?;
            let eta = superwig::oracle::eta_measured(&module, r)?;
            if eta.sign() != 1 {
                return Err(RunError::Domain(Error::inconsistent(format!(
                    "measured symmetry constant has sign {}",
                    eta.sign()
                ))));
            }
            print_json(&EtaReport::new(weight, r, eta.square()))
        }
        Command::Table {
            direction,
            m,
            n,
            bound,
            format,
        } => run_table(direction.into(), m, n, bound, format),
        Command::Verify {
            suite,
            seed,
            max_label,
        } => run_verify(&suite, seed, max_label),
    }
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

/// Non-increasing label sequences of the given length with entries in
/// `[lo, hi]`, ascending lexicographically.
fn monotone_sequences(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn extend(current: &mut Vec<i64>, len: usize, lo: i64, hi: i64, out: &mut Vec<Vec<i64>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        let upper = current.last().copied().unwrap_or(hi);
        for next in lo..=upper {
            current.push(next);
            extend(current, len, lo, hi, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        out.push(Vec::new());
        return out;
    }
    extend(&mut Vec::new(), len, lo, hi, &mut out);
    out
}

/// Every weight of the direction's family with labels bounded by `bound`:
/// dominant, with non-negative (covariant) or non-positive (contravariant)
/// labels.
fn family_weights(direction: Direction, shape: Shape, bound: i64) -> Vec<HighestWeight> {
    let (lo, hi) = match direction {
        Direction::Covariant => (0, bound),
        Direction::Contravariant => (-bound, 0),
    };
    let mut out = Vec::new();
    for even in monotone_sequences(shape.m, lo, hi) {
        for odd in monotone_sequences(shape.n, lo, hi) {
            let mut labels = even.clone();
            labels.extend_from_slice(&odd);
            out.push(HighestWeight::new(shape, labels).expect("monotone labels are dominant"));
        }
    }
    out.sort();
    out
}

/// One table row: a reduced coefficient or its degenerate-point marker.
fn table_rows(direction: Direction, shape: Shape, bound: i64) -> Result<Vec<serde_json::Value>, Error> {
    let mut rows = Vec::new();
    for parent in family_weights(direction, shape, bound) {
        for child in branch(&parent) {
            let ctx = BranchContext::new(parent.clone(), child.clone())?;
            let levels = shape.levels();
            let mut push = |r: usize, u: Option<usize>, outcome: Result<superwig::exact::CoefficientValue, Error>| {
                match outcome {
                    Ok(value) => {
                        if !value.is_zero() {
                            rows.push(json!({
                                "Lambda": parent.labels(),
                                "lambda": child.labels(),
                                "r": r,
                                "u": u,
                                "value": value,
                            }));
                        }
                        Ok(())
                    }
                    Err(Error::DegenerateRoots { detail }) => {
                        rows.push(json!({
                            "Lambda": parent.labels(),
                            "lambda": child.labels(),
                            "r": r,
                            "u": u,
                            "error": "DegenerateRoots",
                            "detail": detail,
                        }));
                        Ok(())
                    }
                    Err(e) => Err(e),
                }
            };
            for r in 1..=levels {
                push(r, None, ctx.rwc(&RWCKey { direction, r, u: None }))?;
                for u in 1..levels {
                    push(r, Some(u), ctx.rwc(&RWCKey { direction, r, u: Some(u) }))?;
                }
            }
        }
    }
    Ok(rows)
}

fn run_table(
    direction: Direction,
    m: usize,
    n: usize,
    bound: i64,
    format: FormatArg,
) -> Result<i32, RunError> {
    if bound < 0 {
        return Err(RunError::Usage("bound must be non-negative".to_string()));
    }
    let shape = Shape::new(m, n)?;
    let descriptor = TableDescriptor {
        m,
        n,
        family: match direction {
            Direction::Covariant => "covariant".to_string(),
            Direction::Contravariant => "contravariant".to_string(),
        },
        max_label: bound,
    };
    let payload = match lookup(&descriptor) {
        Some(cached) => cached,
        None => {
            let rows = table_rows(direction, shape, bound)?;
            let payload = serde_json::to_string(&json!({
                "family": descriptor.family,
                "m": m,
                "n": n,
                "max_label": bound,
                "rows": rows,
            }))
            .expect("JSON serialization is infallible");
            store(&descriptor, &payload)
                .map_err(|e| RunError::Domain(Error::inconsistent(format!("cache store: {e}"))))?;
            payload
        }
    };
    match format {
        FormatArg::Json => {
            println!("{payload}");
        }
        FormatArg::Csv | FormatArg::Markdown => {
            let parsed: serde_json::Value = serde_json::from_str(&payload)
                .map_err(|e| RunError::Domain(Error::inconsistent(format!("cache parse: {e}"))))?;
            let rows = parsed["rows"].as_array().cloned().unwrap_or_default();
            let cells = |row: &serde_json::Value| -> [String; 5] {
                let labels = |v: &serde_json::Value| {
                    v.as_array()
                        .map(|a| {
                            a.iter()
                                .map(|x| x.to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .unwrap_or_default()
                };
                let value = if row.get("error").is_some() {
                    "DegenerateRoots".to_string()
                } else {
                    let sign = row["value"]["sign"].as_i64().unwrap_or(0);
                    let radicand = row["value"]["radicand"].as_str().unwrap_or("0");
                    let prefix = if sign < 0 { "-" } else { "" };
                    format!("{prefix}sqrt({radicand})")
                };
                [
                    labels(&row["Lambda"]),
                    labels(&row["lambda"]),
                    row["r"].to_string(),
                    row.get("u")
                        .and_then(|u| u.as_u64())
                        .map(|u| u.to_string())
                        .unwrap_or_default(),
                    value,
                ]
            };
            match format {
                FormatArg::Csv => {
                    println!("Lambda,lambda,r,u,value");
                    for row in &rows {
                        println!("{}", cells(row).join(","));
                    }
                }
                _ => {
                    println!("| Lambda | lambda | r | u | value |");
                    println!("|---|---|---|---|---|");
                    for row in &rows {
                        println!("| {} |", cells(row).join(" | "));
                    }
                }
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(suite: &str, seed: u64, max_label: i64) -> Result<i32, RunError> {
    let reports: Vec<CheckReport> = match suite {
        "all" => all_checks(seed, max_label),
        "sumrules" | "sum-rules" => vec![check_sum_rules(seed, max_label)],
        "nonunitary-branch" => vec![check_nonunitary_branch()],
        name @ ("first-kind-oracle-equivalence"
        | "second-kind-oracle-equivalence"
        | "full-coupling-orthonormality"
        | "positivity"
        | "symmetry-constant"
        | "classical-chain-values") => {
            let families = build_families()?;
            vec![match name {
                "first-kind-oracle-equivalence" => check_first_kind_oracle_equivalence(&families),
                "second-kind-oracle-equivalence" => check_second_kind_oracle_equivalence(&families),
                "full-coupling-orthonormality" => check_full_coupling_orthonormality(&families),
                "positivity" => check_positivity(&families),
                "symmetry-constant" => check_symmetry_constant(&families),
                _ => check_classical_chain_values(&families),
            }]
        }
        other => {
            return Err(RunError::Usage(format!(
                "unknown suite {other:?}; expected all, sumrules, or a suite name"
            )));
        }
    };
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        all_passed &= report.passed;
        println!("{status} {}: {}", report.name, report.detail);
    }
    Ok(if all_passed { 0 } else { 1 })
}
