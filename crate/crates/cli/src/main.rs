//! `sfprime`: verify that integers split as a squarefree number plus a prime
//! p with p^2 <= n, compute streak records, certify CRT streak bounds, and
//! reproduce the analytic margin tables.
//!
//! Data goes to stdout (or `--out`); progress and check verdicts go to
//! stderr. Exit status is 0 only when every requested check passes; named
//! check failures exit 1, usage and I/O errors exit 2.

mod expr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use expr::parse_u64_expr;
use num_bigint::BigUint;
use sfprime_core::analytic::{
    self, delta_tolerance, printed_ulp, published_delta_rows, BoundContext, BoundVariant,
    PrimeSumConstants,
};
use sfprime_core::crt::{certify_streak_bound, crt_solve, naive_bound, CongruenceSystem};
use sfprime_core::primes::PrimeTable;
use sfprime_core::selfcheck;
use sfprime_core::verify::{
    compute_streaks, verify_range_with, StreakTable, VerificationReport, VerifyConfig,
    PAPER_EXCEPTIONS, PAPER_STREAKS,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable naming the default directory for checkpoint files.
const CHECKPOINT_DIR_ENV: &str = "SFPRIME_CHECKPOINT_DIR";

#[derive(Parser)]
#[command(
    name = "sfprime",
    version,
    about = "Verification toolkit for n = squarefree + prime with prime^2 <= n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a range [start, end) and report exceptions and witness stats
    Verify(VerifyArgs),
    /// Scan for streak records b_k up to a bound
    Bk(BkArgs),
    /// Solve a congruence system and certify the resulting streak bound
    Crt(CrtArgs),
    /// Compute the F4/F5 margin tables
    Tables(TablesArgs),
    /// Evaluate the closed-form closing margin at one point
    Margin(MarginArgs),
    /// Prime-sum constants c1, c2, c3, g and their tail certifications
    Constants(ConstantsArgs),
    /// Run the built-in estimate and property instance checks
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct VerifyArgs {
    /// Range start (inclusive); accepts forms like 10^9 or 59^8+1
    #[arg(long, value_parser = parse_u64_expr)]
    start: u64,
    /// Range end (exclusive)
    #[arg(long, value_parser = parse_u64_expr)]
    end: u64,
    /// Segment length (at least 1000)
    #[arg(long, value_parser = parse_u64_expr, default_value = "10^7")]
    segment_size: u64,
    /// Worker threads (defaults to the logical CPU count)
    #[arg(long)]
    workers: Option<usize>,
    /// Checkpoint file for resumable runs (default: $SFPRIME_CHECKPOINT_DIR)
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Check the result against the known exception set and 17-check bound
    #[arg(long)]
    expect_paper: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BkArgs {
    /// Scan n from 2 through this bound (inclusive)
    #[arg(long, value_parser = parse_u64_expr)]
    max: u64,
    #[arg(long, value_parser = parse_u64_expr, default_value = "10^7")]
    segment_size: u64,
    /// Check the table against the known b_k records
    #[arg(long)]
    expect_paper: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrtArgs {
    /// Use the built-in 8-congruence covering system for b_16
    #[arg(long, conflicts_with_all = ["system", "naive"])]
    paper_system: bool,
    /// Load a congruence system from a JSON file
    #[arg(long, conflicts_with = "naive")]
    system: Option<PathBuf>,
    /// Solve n = p_l (mod p_l^2) for l = 1..=k instead
    #[arg(long, requires = "k")]
    naive: bool,
    /// Streak length for --naive
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TablesArgs {
    /// Which margin table to compute
    #[arg(long, value_enum)]
    variant: TableVariant,
    /// Check every row against the published cells and margins
    #[arg(long)]
    expect_paper: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableVariant {
    F4,
    F5,
}

#[derive(Args)]
struct MarginArgs {
    /// Evaluation point
    #[arg(long, value_parser = parse_u64_expr, default_value = "59^8+1")]
    n: u64,
    /// Case-4 split parameter
    #[arg(long, default_value_t = 4.0)]
    c: f64,
    /// Bound used for C1(11)
    #[arg(long, default_value_t = 0.033)]
    c1: f64,
    /// Bound used for C2(11)
    #[arg(long, default_value_t = 0.1)]
    c2: f64,
    /// Required margin
    #[arg(long, default_value_t = 95945.0)]
    threshold: f64,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long, value_parser = parse_u64_expr, default_value = "11")]
    a: u64,
    #[arg(long, value_parser = parse_u64_expr, default_value = "10^6")]
    b: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the sampled instances
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Bk(args) => cmd_bk(args),
        Command::Crt(args) => cmd_crt(args),
        Command::Tables(args) => cmd_tables(args),
        Command::Margin(args) => cmd_margin(args),
        Command::Constants(args) => cmd_constants(args),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn resolve_checkpoint(flag: Option<PathBuf>, start: u64, end: u64) -> Option<PathBuf> {
    if flag.is_some() {
        return flag;
    }
    std::env::var_os(CHECKPOINT_DIR_ENV)
        .map(|dir| PathBuf::from(dir).join(format!("verify-{start}-{end}.json")))
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    if args.segment_size < 1000 {
        bail!("--segment-size must be at least 1000");
    }
    let workers = match args.workers {
        Some(0) => bail!("--workers must be at least 1"),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let config = VerifyConfig {
        segment_size: args.segment_size,
        workers,
        checkpoint: resolve_checkpoint(args.checkpoint, args.start, args.end),
    };
    let report = verify_range_with(args.start, args.end, &config, |done, hi| {
        eprintln!("verified through {done} of {hi}");
    })?;

    let rendered = match args.format {
        Format::Json => to_pretty_json(&report)?,
        Format::Text => render_report_text(&report),
        Format::Csv => render_report_csv(&report)?,
    };
    emit(&args.out, &rendered)?;

    if args.expect_paper {
        let expected: Vec<u64> = PAPER_EXCEPTIONS
            .iter()
            .copied()
            .filter(|&n| n >= args.start && n < args.end)
            .collect();
        let got: Vec<u64> = report.exceptions.iter().map(|e| e.n).collect();
        if got != expected {
            eprintln!("FAIL exception set: got {got:?}, expected {expected:?}");
            return Ok(ExitCode::from(1));
        }
        eprintln!("PASS exception set matches: {got:?}");
        if args.end <= 1_000_000_000 + 1 && report.max_checks > 17 {
            eprintln!(
                "FAIL witness search took {} checks at n={}, expected at most 17",
                report.max_checks, report.max_checks_at
            );
            return Ok(ExitCode::from(1));
        }
        eprintln!(
            "PASS max checks {} at n={}",
            report.max_checks, report.max_checks_at
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn render_report_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    s += &format!("range: [{}, {})\n", report.range.0, report.range.1);
    let ns: Vec<String> = report.exceptions.iter().map(|e| e.n.to_string()).collect();
    s += &format!("exceptions ({}): {}\n", ns.len(), ns.join(", "));
    for e in &report.exceptions {
        for f in &e.failures {
            s += &format!("  n={}: {}^2 | {} - {}\n", e.n, f.q, e.n, f.p);
        }
    }
    s += &format!(
        "max checks: {} at n={}\nsegments: {}\nelapsed: {:.3}s\n",
        report.max_checks, report.max_checks_at, report.segments, report.elapsed_seconds
    );
    s
}

fn render_report_csv(report: &VerificationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "p", "q"])?;
    for e in &report.exceptions {
        for f in &e.failures {
            w.write_record([e.n.to_string(), f.p.to_string(), f.q.to_string()])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_bk(args: BkArgs) -> Result<ExitCode> {
    if args.segment_size < 1000 {
        bail!("--segment-size must be at least 1000");
    }
    let table = compute_streaks(args.max, args.segment_size)?;
    let rendered = match args.format {
        Format::Json => to_pretty_json(&table)?,
        Format::Text => {
            let mut s = String::new();
            for (k, b) in &table.entries {
                s += &format!("b_{k} = {b}\n");
            }
            s += &format!("scanned up to {}\n", table.scanned_up_to);
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "b_k"])?;
            for (k, b) in &table.entries {
                w.write_record([k.to_string(), b.to_string()])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(&args.out, &rendered)?;

    if args.expect_paper {
        return Ok(check_bk_against_golden(&table));
    }
    Ok(ExitCode::SUCCESS)
}

fn check_bk_against_golden(table: &StreakTable) -> ExitCode {
    let golden: Vec<(u32, u64)> = PAPER_STREAKS
        .iter()
        .copied()
        .filter(|&(_, b)| b <= table.scanned_up_to)
        .collect();
    for &(k, b) in &golden {
        match table.entries.get(&k) {
            Some(&got) if got == b => {}
            other => {
                eprintln!("FAIL b_{k}: got {other:?}, expected {b}");
                return ExitCode::from(1);
            }
        }
    }
    // no streak record below the published ones may appear
    for (&k, &b) in &table.entries {
        if k <= 15 && !golden.contains(&(k, b)) {
            eprintln!("FAIL unexpected record b_{k} = {b}");
            return ExitCode::from(1);
        }
        if k >= 16 && table.scanned_up_to <= 1_000_000_000 {
            eprintln!("FAIL b_{k} = {b} found although b_16 exceeds 1e9");
            return ExitCode::from(1);
        }
    }
    eprintln!("PASS streak records match ({} entries)", golden.len());
    ExitCode::SUCCESS
}

fn cmd_crt(args: CrtArgs) -> Result<ExitCode> {
    let table = PrimeTable::build(100)?;
    let (solution, certificate) = if args.paper_system {
        let system = CongruenceSystem::paper_system();
        let n = crt_solve(&system)?;
        if n != BigUint::from(sfprime_core::crt::PAPER_B16_BOUND) {
            eprintln!("FAIL built-in covering system solved to {n}, expected 23708451225527");
            return Ok(ExitCode::from(1));
        }
        let cert = certify_streak_bound(&n, 16, &table)?;
        cert.verify(&table)?;
        eprintln!("PASS b_16 <= {n} certified for all 16 initial primes");
        (n, Some(cert))
    } else if let Some(path) = &args.system {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let system = parse_system(&text)?;
        (crt_solve(&system)?, None)
    } else if args.naive {
        let k = args.k.expect("clap enforces --k with --naive");
        let (n, cert) = naive_bound(k, &table)?;
        (n, Some(cert))
    } else {
        bail!("choose one of --paper-system, --system <FILE>, or --naive --k <K>");
    };

    let rendered = match (&certificate, args.format) {
        (Some(cert), Format::Json) => to_pretty_json(cert)?,
        (None, Format::Json) => {
            to_pretty_json(&serde_json::json!({ "n": solution.to_string() }))?
        }
        (_, Format::Text | Format::Csv) => {
            let mut s = format!("n = {solution}\n");
            if let Some(cert) = &certificate {
                for e in &cert.coverage {
                    s += &format!(
                        "l={} p={}: {}^2 = {} divides n - {} (quotient {})\n",
                        e.l, e.p_l, e.q, e.q_squared, e.p_l, e.quotient
                    );
                }
            }
            s
        }
    };
    emit(&args.out, &rendered)?;
    Ok(ExitCode::SUCCESS)
}

/// Accept either a full system object or a bare list of congruences.
fn parse_system(text: &str) -> Result<CongruenceSystem> {
    if let Ok(system) = serde_json::from_str::<CongruenceSystem>(text) {
        return Ok(system);
    }
    let congruences = serde_json::from_str(text)
        .context("system file must be a {congruences, covered_primes} object or a [{residue, modulus}] list")?;
    Ok(CongruenceSystem::new(congruences))
}

fn cmd_tables(args: TablesArgs) -> Result<ExitCode> {
    let variant = match args.variant {
        TableVariant::F4 => BoundVariant::F4,
        TableVariant::F5 => BoundVariant::F5,
    };
    let table = PrimeTable::build(100)?;
    let rows = analytic::delta_table(variant, &table)?;

    let rendered = match args.format {
        Format::Json => to_pretty_json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "interval", "c1", "c2", "c", "c0_minus_g", "delta"])?;
            for r in &rows {
                w.write_record([
                    r.k.to_string(),
                    format!("[{}, {}]", r.interval_lo, r.interval_hi),
                    format!("{:.8}", r.c1),
                    format!("{:.8}", r.c2),
                    r.c.to_string(),
                    format!("{:.8}", r.c0_minus_g),
                    format!("{:.1}", r.delta),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut s = format!(
                "{:>2} {:>22} {:>22} {:>11} {:>11} {:>4} {:>11} {:>9}\n",
                "k", "from", "to", "c1", "c2", "c", "c0-g", "delta"
            );
            for r in &rows {
                s += &format!(
                    "{:>2} {:>22} {:>22} {:>11.8} {:>11.8} {:>4} {:>11.8} {:>9.1}\n",
                    r.k, r.interval_lo, r.interval_hi, r.c1, r.c2, r.c, r.c0_minus_g, r.delta
                );
            }
            s
        }
    };
    emit(&args.out, &rendered)?;

    if args.expect_paper {
        let published = published_delta_rows(variant)?;
        for (row, want) in rows.iter().zip(published.iter()) {
            let checks = [
                ("c1", row.c1, want.c1),
                ("c2", row.c2, want.c2),
                ("c0_minus_g", row.c0_minus_g, want.c0_minus_g),
            ];
            for (name, got, cell) in checks {
                let printed: f64 = cell.parse().expect("published cell parses");
                if (got - printed).abs() > printed_ulp(cell) {
                    eprintln!("FAIL k={} {name}: {got:.10} vs published {cell}", row.k);
                    return Ok(ExitCode::from(1));
                }
            }
            if (row.delta - want.delta).abs() > delta_tolerance(want.delta) {
                eprintln!(
                    "FAIL k={} delta: {:.2} vs published {:.1}",
                    row.k, row.delta, want.delta
                );
                return Ok(ExitCode::from(1));
            }
        }
        eprintln!("PASS all 6 rows match the published table");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_margin(args: MarginArgs) -> Result<ExitCode> {
    let table = PrimeTable::build(100)?;
    let ctx = BoundContext::f2(args.n, args.c)?;
    let constants = PrimeSumConstants::fixed_bounds(args.c1, args.c2);
    let margin = analytic::margin(&ctx, &constants, &table)?;
    println!(
        "margin at n={} with c={}, C1={}, C2={}: {margin:.3}",
        args.n, args.c, args.c1, args.c2
    );
    if margin > args.threshold {
        eprintln!("PASS margin exceeds {}", args.threshold);
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("FAIL margin {margin:.3} does not exceed {}", args.threshold);
        Ok(ExitCode::from(1))
    }
}

fn cmd_constants(args: ConstantsArgs) -> Result<ExitCode> {
    let table = PrimeTable::build(args.b.max(59))?;
    let constants = analytic::prime_sum_constants(args.a, args.b, &table)?;
    let c0_minus_g_b = analytic::c0_minus_g(args.b, &table)?;
    let tails = if args.b >= 59 {
        Some((
            analytic::tail_bound(args.b, analytic::TailWeight::C1Style)?,
            analytic::tail_bound(args.b, analytic::TailWeight::C2Style)?,
            analytic::tail_bound(args.b, analytic::TailWeight::ReciprocalSquare)?,
        ))
    } else {
        None
    };

    let mut doc = serde_json::json!({
        "a": constants.a,
        "b": constants.b,
        "c1": constants.c1,
        "c2": constants.c2,
        "c3": constants.c3,
        "g_a": constants.g_a,
        "c0_minus_g_b": c0_minus_g_b,
    });
    if let Some((t1, t2, tq)) = tails {
        doc["tail_c1"] = serde_json::json!(t1);
        doc["tail_c2"] = serde_json::json!(t2);
        doc["tail_inverse_square"] = serde_json::json!(tq);
        doc["c1_plus_tail"] = serde_json::json!(constants.c1 + t1);
        doc["c2_plus_tail"] = serde_json::json!(constants.c2 + t2);
    }

    let rendered = match args.format {
        Format::Json => to_pretty_json(&doc)?,
        Format::Text | Format::Csv => {
            let mut s = String::new();
            let obj = doc.as_object().expect("constants doc is an object");
            for (key, value) in obj {
                s += &format!("{key} = {value}\n");
            }
            s
        }
    };
    emit(&args.out, &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(args: SelftestArgs) -> Result<ExitCode> {
    let outcomes = selfcheck::run_all(args.seed);
    let mut all_passed = true;
    for outcome in &outcomes {
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", outcome.name, outcome.detail);
        all_passed &= outcome.passed;
    }
    if all_passed {
        eprintln!("selftest: {} checks passed", outcomes.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("selftest: failures detected");
        Ok(ExitCode::from(1))
    }
}
