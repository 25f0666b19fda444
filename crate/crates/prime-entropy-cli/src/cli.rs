//! Command-line surface: sweeps, ledgers, entropy breakdowns, sampling, and
//! convergence traces, as CSV (default) or JSON on stdout.
//!
//! Exit status: 0 when every requested verification holds, 1 when any bound
//! fails, 2 on usage or domain errors. Diagnostics go to stderr.

pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use prime_entropy::{
    entropy_majorant, geometric_entropy, geometric_limit_gap, independence_gap, mertens_sum,
    ratio_trace, sample_exponents, tv_distance, verify_bound, BoundId, BoundReport, EmpiricalLaw,
    Error, ExponentDistribution, KahanSum, PrimeTable, Result, SumLedger,
};

use output::{fmt_real, render_csv};

/// Environment variable that overrides `--cache`.
pub const CACHE_ENV: &str = "PRIME_ENTROPY_CACHE";

#[derive(Debug, Parser)]
#[command(
    name = "prime-entropy",
    version,
    about = "Prime sums, exponent-law entropies, and exhaustive inequality sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Running sums (pi, theta, mertens, entropy majorant) at chosen n.
    Sums {
        /// Specific n values, comma separated; n = 1 gives the empty-sum row.
        #[arg(long, value_delimiter = ',')]
        at: Vec<u64>,
        /// Emit one row for every n from 2 to this value instead.
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Prime cache file to reuse or create (see also PRIME_ENTROPY_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Sweep registered bounds over [their minimum n, n-max] and report
    /// margins. Exit 0 iff every swept bound holds.
    Verify {
        /// Bound ids, comma separated; defaults to every standard bound.
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<String>,
        #[arg(long)]
        n_max: u64,
        /// Anchor for the genlb bound.
        #[arg(long, default_value_t = 16)]
        n0: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Per-prime entropy breakdown (p, mean, H(X_p), h(mu_p)) at one n,
    /// with a totals row carrying ln n, the entropy sum, and T(n).
    Entropy {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Sample factorization exponents of uniform integers and report the
    /// empirical law plus its distance metrics.
    Sample {
        #[arg(long)]
        n: u64,
        /// Primes to histogram; two or more also get an independence gap.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Convergence trace of C(n)/ln n at chosen points.
    Trace {
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn cache_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).or(flag)
}

fn build_table(limit: u64, cache: Option<PathBuf>) -> Result<PrimeTable> {
    match cache_path(cache) {
        Some(path) => PrimeTable::load_or_sieve(limit, path),
        None => PrimeTable::sieve(limit),
    }
}

fn meta(command: &str, extra: serde_json::Value) -> serde_json::Value {
    let mut base = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
    });
    if let (Some(obj), Some(extra)) = (base.as_object_mut(), extra.as_object()) {
        for (k, v) in extra {
            obj.insert(k.clone(), v.clone());
        }
    }
    base
}

/// Run one parsed invocation; returns the process exit code. Errors map to
/// exit code 2 in `main`.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Sums {
            at,
            n_max,
            format,
            cache,
        } => run_sums(&at, n_max, format, cache),
        Command::Verify {
            bounds,
            n_max,
            n0,
            format,
            cache,
        } => run_verify(&bounds, n_max, n0, format, cache),
        Command::Entropy { n, format } => run_entropy(n, format),
        Command::Sample {
            n,
            primes,
            trials,
            seed,
            format,
        } => run_sample(n, &primes, trials, seed, format),
        Command::Trace { at, format, cache } => run_trace(&at, format, cache),
    }
}

const SUMS_HEADER: &str = "n,prime_count,theta,mertens,entropy_majorant";

fn ledger_row(row: &SumLedger) -> String {
    format!(
        "{},{},{},{},{}",
        row.n,
        row.prime_count,
        fmt_real(row.theta),
        fmt_real(row.mertens),
        fmt_real(row.entropy_majorant)
    )
}

fn ledger_at(n: u64, table: &PrimeTable) -> Result<SumLedger> {
    if n == 1 {
        // Empty sums: no prime is <= 1.
        return Ok(SumLedger {
            n: 1,
            prime_count: 0,
            theta: 0.0,
            mertens: 0.0,
            entropy_majorant: 0.0,
        });
    }
    Ok(SumLedger {
        n,
        prime_count: table.prime_count(n)?,
        theta: table.theta(n)?,
        mertens: mertens_sum(n, table)?,
        entropy_majorant: entropy_majorant(n, table)?,
    })
}

fn run_sums(at: &[u64], n_max: Option<u64>, format: Format, cache: Option<PathBuf>) -> Result<i32> {
    let rows: Vec<SumLedger> = if !at.is_empty() {
        if at.contains(&0) {
            return Err(Error::Domain("n = 0 has no ledger".into()));
        }
        let limit = (*at.iter().max().unwrap()).max(2);
        let table = build_table(limit, cache)?;
        at.iter()
            .map(|&n| ledger_at(n, &table))
            .collect::<Result<_>>()?
    } else if let Some(n_max) = n_max {
        let table = build_table(n_max.max(2), cache)?;
        table.ledgers(n_max)?.collect()
    } else {
        return Err(Error::Domain(
            "sums needs --at <n,...> or --n-max <n>".into(),
        ));
    };
    match format {
        Format::Csv => {
            let lines: Vec<String> = rows.iter().map(ledger_row).collect();
            print!("{}", render_csv(SUMS_HEADER, &lines));
        }
        Format::Json => {
            let doc = json!({
                "meta": meta("sums", json!({"points": rows.len()})),
                "rows": rows,
            });
            println!("{doc}");
        }
    }
    Ok(0)
}

const VERIFY_HEADER: &str = "bound_id,n_lo,n_hi,holds,min_margin,argmin_n";

fn report_row(r: &BoundReport) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.bound_id,
        r.n_lo,
        r.n_hi,
        r.holds,
        fmt_real(r.min_margin),
        r.argmin_n
    )
}

fn run_verify(
    bounds: &[String],
    n_max: u64,
    n0: u64,
    format: Format,
    cache: Option<PathBuf>,
) -> Result<i32> {
    let ids: Vec<BoundId> = if bounds.is_empty() {
        BoundId::STANDARD.to_vec()
    } else {
        bounds.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let limit = if ids.contains(&BoundId::ErdosStep) {
        2 * n_max + 1
    } else {
        n_max
    };
    let table = build_table(limit.max(2), cache)?;
    let reports: Vec<BoundReport> = ids
        .iter()
        .map(|&id| verify_bound(id, None, n_max, n0, &table))
        .collect::<Result<_>>()?;
    for report in reports.iter().filter(|r| r.indeterminate) {
        eprintln!(
            "note: {} is numerically indeterminate (margin {} at n = {})",
            report.bound_id, report.min_margin, report.argmin_n
        );
    }
    match format {
        Format::Csv => {
            let lines: Vec<String> = reports.iter().map(report_row).collect();
            print!("{}", render_csv(VERIFY_HEADER, &lines));
        }
        Format::Json => {
            let doc = json!({
                "meta": meta("verify", json!({"n_hi": n_max, "n0": n0})),
                "rows": reports,
            });
            println!("{doc}");
        }
    }
    Ok(if reports.iter().all(|r| r.holds) {
        0
    } else {
        1
    })
}

const ENTROPY_HEADER: &str = "p,mean,entropy,geom_entropy";

#[derive(Serialize)]
struct EntropyRow {
    p: u64,
    mean: f64,
    entropy: f64,
    geom_entropy: f64,
}

fn run_entropy(n: u64, format: Format) -> Result<i32> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "entropy breakdown needs n >= 2, got {n}"
        )));
    }
    let table = PrimeTable::sieve(n)?;
    let mut rows = Vec::new();
    let mut entropy_sum = KahanSum::new();
    for &p in table.primes_upto(n) {
        let law = ExponentDistribution::exact(n, p)?;
        let entropy = law.entropy();
        entropy_sum.add(entropy);
        rows.push(EntropyRow {
            p,
            mean: law.mean().to_f64(),
            entropy,
            geom_entropy: geometric_entropy(law.mean().to_f64())?,
        });
    }
    let log_n = (n as f64).ln();
    let majorant = entropy_majorant(n, &table)?;
    match format {
        Format::Csv => {
            let mut lines: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{}",
                        r.p,
                        fmt_real(r.mean),
                        fmt_real(r.entropy),
                        fmt_real(r.geom_entropy)
                    )
                })
                .collect();
            // Totals row: ln n under mean, sum of H(X_p) under entropy,
            // T(n) under geom_entropy.
            lines.push(format!(
                "total,{},{},{}",
                fmt_real(log_n),
                fmt_real(entropy_sum.value()),
                fmt_real(majorant)
            ));
            print!("{}", render_csv(ENTROPY_HEADER, &lines));
        }
        Format::Json => {
            let doc = json!({
                "meta": meta("entropy", json!({"n": n})),
                "rows": rows,
                "totals": {
                    "log_n": log_n,
                    "entropy_sum": entropy_sum.value(),
                    "entropy_majorant": majorant,
                },
            });
            println!("{doc}");
        }
    }
    Ok(0)
}

const SAMPLE_HEADER: &str = "record,p,n,trials,seed,k,count,value";

#[derive(Serialize)]
struct SampleRow {
    record: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    primes: Option<String>,
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
    value: f64,
}

fn sample_csv_row(row: &SampleRow) -> String {
    let opt_u64 = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{}",
        row.record,
        row.p
            .map(|p| p.to_string())
            .or_else(|| row.primes.clone())
            .unwrap_or_default(),
        row.n,
        opt_u64(row.trials),
        opt_u64(row.seed),
        row.k.map(|k| k.to_string()).unwrap_or_default(),
        opt_u64(row.count),
        fmt_real(row.value)
    )
}

fn empirical_rows(law: &EmpiricalLaw) -> Vec<SampleRow> {
    law.counts
        .iter()
        .map(|(&k, &count)| SampleRow {
            record: "exponent",
            p: Some(law.p),
            primes: None,
            n: law.n,
            trials: Some(law.trials),
            seed: Some(law.seed),
            k: Some(k),
            count: Some(count),
            value: count as f64 / law.trials as f64,
        })
        .collect()
}

fn run_sample(n: u64, primes: &[u64], trials: u64, seed: u64, format: Format) -> Result<i32> {
    let mut rows = Vec::new();
    for &p in primes {
        let law = sample_exponents(n, p, trials, seed)?;
        let exact = ExponentDistribution::exact(n, p)?;
        let tv = tv_distance(&law.pmf_f64(), &exact.pmf_f64())?;
        rows.extend(empirical_rows(&law));
        rows.push(SampleRow {
            record: "tv_exact",
            p: Some(p),
            primes: None,
            n,
            trials: Some(trials),
            seed: Some(seed),
            k: None,
            count: None,
            value: tv,
        });
        rows.push(SampleRow {
            record: "geom_gap",
            p: Some(p),
            primes: None,
            n,
            trials: None,
            seed: None,
            k: None,
            count: None,
            value: geometric_limit_gap(n, p)?,
        });
    }
    if primes.len() >= 2 {
        let gap = independence_gap(n, primes, trials, seed)?;
        let joined = primes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("+");
        rows.push(SampleRow {
            record: "independence",
            p: None,
            primes: Some(joined),
            n,
            trials: Some(trials),
            seed: Some(seed),
            k: None,
            count: None,
            value: gap,
        });
    }
    match format {
        Format::Csv => {
            let lines: Vec<String> = rows.iter().map(sample_csv_row).collect();
            print!("{}", render_csv(SAMPLE_HEADER, &lines));
        }
        Format::Json => {
            let doc = json!({
                "meta": meta("sample", json!({"n": n, "seed": seed, "trials": trials})),
                "rows": rows,
            });
            println!("{doc}");
        }
    }
    Ok(0)
}

const TRACE_HEADER: &str = "n,mertens,ratio";

fn run_trace(points: &[u64], format: Format, cache: Option<PathBuf>) -> Result<i32> {
    if points.iter().any(|&n| n < 2) {
        return Err(Error::Domain("trace points must be >= 2".into()));
    }
    let limit = points.iter().copied().max().unwrap_or(2);
    let table = build_table(limit, cache)?;
    let trace = ratio_trace(points, &table)?;
    match format {
        Format::Csv => {
            let lines: Vec<String> = trace
                .iter()
                .map(|p| format!("{},{},{}", p.n, fmt_real(p.mertens), fmt_real(p.ratio)))
                .collect();
            print!("{}", render_csv(TRACE_HEADER, &lines));
        }
        Format::Json => {
            let doc = json!({
                "meta": meta("trace", json!({"points": points})),
                "rows": trace,
            });
            println!("{doc}");
        }
    }
    Ok(0)
}
