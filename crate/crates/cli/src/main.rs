//! Command-line front end: sequence queries, identity sweeps, oracle
//! cross-checks, bound tables and b-file validation.
//!
//! Exit codes: 0 all checks pass, 1 at least one mathematical check
//! failed, 2 usage or parse error, 3 a resource ceiling was exceeded.
//! Reports go to standard out, diagnostics to standard error.

mod bfile;
mod output;
mod sweep;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use rencontres::bounds::{
    bell_asymptotics, check_adell, check_berend_tal, check_lambda_sandwich, BoundReport,
};
use rencontres::combinat::{
    bell, derangement, eulerian, eulerian_row, rencontres, rencontres_row, stirling1_row,
    stirling1_signed, stirling2, stirling2_row,
};
use rencontres::identities::{verify_identity, EvalMode, IdentityId, IdentityReport};
use rencontres::oracle::{closed_form_row, enumerate_statistic, EnumLimits, StatisticId};
use rencontres::{Error, Nat, Params, Result};

use crate::bfile::{parse_bfile, ScalarSeq, MAX_CHECK_INDEX};
use crate::output::{
    asymptotics_csv, asymptotics_csv_header, asymptotics_plain, bound_csv, bound_csv_header,
    bound_plain, identity_csv, identity_csv_header, identity_plain, summary_plain, to_json,
    Format, JsonAsymptoticsRow, JsonBoundReport, JsonIdentityReport, JsonSummary,
};
use crate::sweep::{RangeSpec, RunSummary};

#[derive(Parser)]
#[command(
    name = "rencontres",
    version,
    about = "Exact combinatorics of permutations with fixed points: sequences, identity sweeps, brute-force oracles and bound tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one sequence value or a full row
    Seq {
        /// Which sequence to query
        #[arg(value_enum)]
        name: SeqName,
        /// Row index (n, or q/i for the triangles)
        #[arg(long)]
        n: u64,
        /// Column index; omit to print a triangle's full row
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate one identity over a parameter grid
    Verify {
        /// Identity tag, e.g. MAIN_SUM_RULE
        identity: String,
        /// as-written | corrected
        #[arg(long, default_value = "corrected")]
        mode: String,
        /// Parameter grid, e.g. "n=1..10,r=0..n-1"
        #[arg(long)]
        range: String,
        /// Worker threads; absent or <= 1 runs serially
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Enumerate a statistic exhaustively, optionally diffing its closed form
    Oracle {
        /// Statistic tag, e.g. FIXED_POINTS
        stat: String,
        #[arg(long)]
        n: u64,
        /// Tuple order (MARKED_TUPLES only)
        #[arg(long)]
        q: Option<u64>,
        /// Diff the histogram against the closed-form row
        #[arg(long)]
        compare: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check one bound family over a range
    Bounds {
        #[arg(value_enum)]
        which: BoundsKind,
        /// e.g. "n=2..60", "r=2..6,n=r+1..20", "n=10,50,100,200"
        #[arg(long)]
        range: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Parse an OEIS-style b-file, optionally checking it against a sequence
    #[command(name = "ingest-bfile")]
    IngestBfile {
        path: PathBuf,
        /// Sequence to check against
        #[arg(long = "seq", value_enum)]
        seq: ScalarSeq,
        /// Compare each entry against the computed value
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum SeqName {
    Derangement,
    Rencontres,
    Stirling1,
    Stirling2,
    Bell,
    Eulerian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum BoundsKind {
    Adell,
    Lambda,
    BerendTal,
    Asymptotics,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::ResourceLimit(_) => 3,
                _ => 2,
            };
            std::process::ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Seq { name, n, k, format } => run_seq(name, n, k, format),
        Command::Verify {
            identity,
            mode,
            range,
            parallel,
            format,
        } => run_verify(&identity, &mode, &range, parallel, format),
        Command::Oracle {
            stat,
            n,
            q,
            compare,
            format,
        } => run_oracle(&stat, n, q, compare, format),
        Command::Bounds { which, range, format } => run_bounds(which, &range, format),
        Command::IngestBfile {
            path,
            seq,
            check,
            format,
        } => run_ingest(&path, seq, check, format),
    }
}

/// Prints the sweep summary: stdout for plain and JSON streams, stderr
/// for CSV so the table stays machine-readable.
fn emit_summary(summary: &RunSummary, format: Format) {
    match format {
        Format::Plain => println!("{}", summary_plain(summary)),
        Format::Json => println!("{}", to_json(&JsonSummary::from(summary))),
        Format::Csv => eprintln!("{}", summary_plain(summary)),
    }
}

fn run_seq(name: SeqName, n: u64, k: Option<u64>, format: Format) -> Result<i32> {
    let seq_token = match name {
        SeqName::Derangement => "derangement",
        SeqName::Rencontres => "rencontres",
        SeqName::Stirling1 => "stirling1",
        SeqName::Stirling2 => "stirling2",
        SeqName::Bell => "bell",
        SeqName::Eulerian => "eulerian",
    };

    // Scalar sequences print one value; triangles print a value with
    // --k and the whole row without.
    let scalar = matches!(name, SeqName::Derangement | SeqName::Bell);
    if scalar && k.is_some() {
        return Err(Error::Usage(format!("{seq_token} takes no column index")));
    }

    let single_value: Option<String> = if scalar {
        Some(match name {
            SeqName::Derangement => derangement(n).to_string(),
            SeqName::Bell => bell(n).to_string(),
            _ => unreachable!(),
        })
    } else {
        k.map(|k| match name {
            SeqName::Rencontres => rencontres(n, k).to_string(),
            SeqName::Stirling1 => stirling1_signed(n, k).to_string(),
            SeqName::Stirling2 => stirling2(n, k).to_string(),
            SeqName::Eulerian => eulerian(n, k).to_string(),
            _ => unreachable!(),
        })
    };

    if let Some(value) = single_value {
        match format {
            Format::Plain => println!("{value}"),
            Format::Json => {
                let mut record = serde_json::Map::new();
                record.insert("sequence".into(), seq_token.into());
                record.insert("n".into(), n.into());
                if let Some(k) = k {
                    record.insert("k".into(), k.into());
                }
                record.insert("value".into(), value.into());
                println!("{}", serde_json::Value::Object(record));
            }
            Format::Csv => {
                let (index_name, index) = match k {
                    Some(k) => ("k", k),
                    None => ("n", n),
                };
                println!("{index_name},value");
                println!("{index},{value}");
            }
        }
        return Ok(0);
    }

    let row: Vec<String> = match name {
        SeqName::Rencontres => rencontres_row(n).iter().map(Nat::to_string).collect(),
        SeqName::Stirling1 => stirling1_row(n).iter().map(|v| v.to_string()).collect(),
        SeqName::Stirling2 => stirling2_row(n).iter().map(Nat::to_string).collect(),
        SeqName::Eulerian => eulerian_row(n).iter().map(Nat::to_string).collect(),
        _ => unreachable!(),
    };
    match format {
        Format::Plain => println!("{}", row.join(" ")),
        Format::Json => {
            let mut record = serde_json::Map::new();
            record.insert("sequence".into(), seq_token.into());
            record.insert("n".into(), n.into());
            record.insert("values".into(), row.into());
            println!("{}", serde_json::Value::Object(record));
        }
        Format::Csv => {
            println!("k,value");
            for (k, value) in row.iter().enumerate() {
                println!("{k},{value}");
            }
        }
    }
    Ok(0)
}

fn run_verify(
    identity: &str,
    mode: &str,
    range: &str,
    parallel: Option<usize>,
    format: Format,
) -> Result<i32> {
    let id: IdentityId = identity.parse()?;
    let mode: EvalMode = mode.parse()?;
    let points = RangeSpec::parse(range)?.expand()?;

    let started = Instant::now();
    let reports: Result<Vec<IdentityReport>> = match parallel {
        Some(threads) if threads > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Usage(format!("cannot build a {threads}-thread pool: {e}")))?;
            pool.install(|| {
                points
                    .par_iter()
                    .map(|point| verify_identity(id, mode, point))
                    .collect()
            })
        }
        _ => points
            .iter()
            .map(|point| verify_identity(id, mode, point))
            .collect(),
    };
    let reports = reports?;

    let mut summary = RunSummary::default();
    if format == Format::Csv {
        println!("{}", identity_csv_header());
    }
    for report in &reports {
        match format {
            Format::Plain => println!("{}", identity_plain(report)),
            Format::Json => println!("{}", to_json(&JsonIdentityReport::from(report))),
            Format::Csv => println!("{}", identity_csv(report)),
        }
        summary.record(report.passed(), &identity_plain(report));
    }
    summary.wall_ms = started.elapsed().as_millis() as u64;
    emit_summary(&summary, format);
    Ok(summary.exit_code())
}

fn run_oracle(stat: &str, n: u64, q: Option<u64>, compare: bool, format: Format) -> Result<i32> {
    let stat: StatisticId = stat.parse()?;
    let started = Instant::now();
    let observed = enumerate_statistic(stat, n, q, &EnumLimits::default())?;

    if !compare {
        let counts: Vec<String> = observed.counts.iter().map(Nat::to_string).collect();
        match format {
            Format::Plain => println!("{}", counts.join(" ")),
            Format::Json => {
                let mut record = serde_json::Map::new();
                record.insert("statistic".into(), stat.as_str().into());
                record.insert("n".into(), n.into());
                if let Some(q) = q {
                    record.insert("q".into(), q.into());
                }
                record.insert("counts".into(), counts.into());
                println!("{}", serde_json::Value::Object(record));
            }
            Format::Csv => {
                println!("value,count");
                for (value, count) in counts.iter().enumerate() {
                    println!("{value},{count}");
                }
            }
        }
        return Ok(0);
    }

    let expected = closed_form_row(stat, n, q)?;
    let width = observed.counts.len().max(expected.len());
    let zero = Nat::default();
    let mut summary = RunSummary::default();
    if format == Format::Csv {
        println!("value,oracle,closed_form,equal");
    }
    for v in 0..width {
        let got = observed.counts.get(v).unwrap_or(&zero);
        let want = expected.get(v).unwrap_or(&zero);
        let equal = got == want;
        let plain = format!(
            "{} {} n={n} value={v} oracle={got} closed_form={want}",
            if equal { "ok" } else { "FAIL" },
            stat.as_str(),
        );
        match format {
            Format::Plain => println!("{plain}"),
            Format::Json => {
                let mut record = serde_json::Map::new();
                record.insert("statistic".into(), stat.as_str().into());
                record.insert("n".into(), n.into());
                record.insert("value".into(), v.into());
                record.insert("oracle".into(), got.to_string().into());
                record.insert("closed_form".into(), want.to_string().into());
                record.insert("equal".into(), equal.into());
                println!("{}", serde_json::Value::Object(record));
            }
            Format::Csv => println!("{v},{got},{want},{equal}"),
        }
        summary.record(equal, &plain);
    }
    summary.wall_ms = started.elapsed().as_millis() as u64;
    emit_summary(&summary, format);
    Ok(summary.exit_code())
}

fn expect_params(spec: &RangeSpec, required: &[&str], optional: &[&str]) -> Result<()> {
    let names = spec.param_names();
    for name in required {
        if !names.contains(name) {
            return Err(Error::Usage(format!("range must declare `{name}`")));
        }
    }
    for name in &names {
        if !required.contains(name) && !optional.contains(name) {
            return Err(Error::Usage(format!("range declares unknown parameter `{name}`")));
        }
    }
    Ok(())
}

fn point_u64(point: &Params, name: &str) -> Result<u64> {
    let v = point[name];
    u64::try_from(v).map_err(|_| Error::Domain(format!("{name} = {v} must be >= 0")))
}

fn run_bounds(which: BoundsKind, range: &str, format: Format) -> Result<i32> {
    let spec = RangeSpec::parse(range)?;
    let started = Instant::now();
    let mut summary = RunSummary::default();

    if which == BoundsKind::Asymptotics {
        expect_params(&spec, &["n"], &[])?;
        let rows = spec
            .expand()?
            .iter()
            .map(|point| bell_asymptotics(point_u64(point, "n")?))
            .collect::<Result<Vec<_>>>()?;
        if format == Format::Csv {
            println!("{}", asymptotics_csv_header());
        }
        for row in &rows {
            match format {
                Format::Plain => println!("{}", asymptotics_plain(row)),
                Format::Json => println!("{}", to_json(&JsonAsymptoticsRow::from(row))),
                Format::Csv => println!("{}", asymptotics_csv(row)),
            }
        }
        // The mathematical check: both estimates must sharpen from each
        // swept size to the next.
        for pair in rows.windows(2) {
            for (label, from, to) in [
                ("debruijn", pair[0].rel_err_debruijn, pair[1].rel_err_debruijn),
                ("odlyzko", pair[0].rel_err_odlyzko, pair[1].rel_err_odlyzko),
            ] {
                let decreasing = to < from;
                let plain = format!(
                    "{} monotone {label} n={}->{} rel_err={:?}->{:?}",
                    if decreasing { "ok" } else { "FAIL" },
                    pair[0].n,
                    pair[1].n,
                    from,
                    to
                );
                match format {
                    Format::Plain => println!("{plain}"),
                    Format::Json => {
                        let mut record = serde_json::Map::new();
                        record.insert("check".into(), "monotone".into());
                        record.insert("estimate".into(), label.into());
                        record.insert("from_n".into(), pair[0].n.into());
                        record.insert("to_n".into(), pair[1].n.into());
                        record.insert("rel_err_from".into(), from.into());
                        record.insert("rel_err_to".into(), to.into());
                        record.insert("decreasing".into(), decreasing.into());
                        println!("{}", serde_json::Value::Object(record));
                    }
                    Format::Csv => eprintln!("{plain}"),
                }
                summary.record(decreasing, &plain);
            }
        }
        summary.wall_ms = started.elapsed().as_millis() as u64;
        emit_summary(&summary, format);
        return Ok(summary.exit_code());
    }

    let reports: Vec<BoundReport> = match which {
        BoundsKind::Adell => {
            expect_params(&spec, &["n"], &["m"])?;
            let has_m = spec.param_names().contains(&"m");
            let mut reports = Vec::new();
            for point in spec.expand()? {
                let n = point_u64(&point, "n")?;
                if has_m {
                    reports.push(check_adell(n, point_u64(&point, "m")?)?);
                } else {
                    for m in 0..=n {
                        reports.push(check_adell(n, m)?);
                    }
                }
            }
            reports
        }
        BoundsKind::Lambda => {
            expect_params(&spec, &["r", "n"], &[])?;
            spec.expand()?
                .iter()
                .map(|point| check_lambda_sandwich(point_u64(point, "n")?, point_u64(point, "r")?))
                .collect::<Result<Vec<_>>>()?
        }
        BoundsKind::BerendTal => {
            expect_params(&spec, &["n"], &[])?;
            spec.expand()?
                .iter()
                .map(|point| check_berend_tal(point_u64(point, "n")?))
                .collect::<Result<Vec<_>>>()?
        }
        BoundsKind::Asymptotics => unreachable!("handled above"),
    };

    if format == Format::Csv {
        println!("{}", bound_csv_header());
    }
    for report in &reports {
        match format {
            Format::Plain => println!("{}", bound_plain(report)),
            Format::Json => println!("{}", to_json(&JsonBoundReport::from(report))),
            Format::Csv => println!("{}", bound_csv(report)),
        }
        summary.record(report.satisfied, &bound_plain(report));
    }
    summary.wall_ms = started.elapsed().as_millis() as u64;
    emit_summary(&summary, format);
    Ok(summary.exit_code())
}

fn run_ingest(path: &PathBuf, seq: ScalarSeq, check: bool, format: Format) -> Result<i32> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let bfile = parse_bfile(&text)?;
    let started = Instant::now();
    let mut summary = RunSummary::default();

    if check {
        if format == Format::Csv {
            println!("index,file,computed,equal");
        }
        for (index, value) in &bfile.entries {
            if *index > MAX_CHECK_INDEX {
                return Err(Error::ResourceLimit(format!(
                    "b-file index {index} exceeds the check ceiling {MAX_CHECK_INDEX}"
                )));
            }
            let computed = seq.value(*index);
            let equal = *value == computed;
            let plain = format!(
                "{} {} index={index} file={value} computed={computed}",
                if equal { "ok" } else { "FAIL" },
                seq.as_str(),
            );
            match format {
                Format::Plain => println!("{plain}"),
                Format::Json => {
                    let mut record = serde_json::Map::new();
                    record.insert("sequence".into(), seq.as_str().into());
                    record.insert("index".into(), (*index).into());
                    record.insert("file".into(), value.to_string().into());
                    record.insert("computed".into(), computed.to_string().into());
                    record.insert("equal".into(), equal.into());
                    println!("{}", serde_json::Value::Object(record));
                }
                Format::Csv => println!("{index},{value},{computed},{equal}"),
            }
            summary.record(equal, &plain);
        }
    } else {
        // Parse-only mode: each well-formed entry counts as one pass.
        for (index, value) in &bfile.entries {
            summary.record(true, &format!("{index} {value}"));
        }
    }
    summary.wall_ms = started.elapsed().as_millis() as u64;
    emit_summary(&summary, format);
    Ok(summary.exit_code())
}
