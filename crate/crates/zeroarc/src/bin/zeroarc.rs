//! Command-line front end for the certified zero-set pipeline.
//!
//! Subcommands: `analyze` (full pipeline and report), `eval` / `zeros`
//! (exact rational oracle), `arc` (per-class interpolation coefficients),
//! `primes` (admissible primes), `verify` (check a report against exact
//! evaluation).
//!
//! Exit codes: 0 = success with every class certified; 2 = pipeline
//! completed but some class is BOUNDED_PARTIAL or INCONCLUSIVE (or a
//! verification found discrepancies); 1 = invalid input; 3 = violated
//! internal invariant (a bug, never a property of the input).

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_integer::Integer;
use serde::Serialize;

use zeroarc::arc;
use zeroarc::companion::CompanionSystem;
use zeroarc::error::{Error, Result};
use zeroarc::padic::PadicContext;
use zeroarc::recurrence::RecurrenceSpec;
use zeroarc::zeroset::{
    self, AnalysisOptions, ClassStatus, ZeroSetReport,
};

#[derive(Parser)]
#[command(
    name = "zeroarc",
    version,
    about = "Certified zero-set decomposition for polynomial-linear recurrences",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and print the certified decomposition.
    Analyze(AnalyzeArgs),
    /// Evaluate the sequence exactly (rational arithmetic).
    Eval(EvalArgs),
    /// Print the exact zeros up to a bound, space-separated.
    Zeros(ZerosArgs),
    /// Dump the per-class interpolation coefficients as JSON.
    Arc(ArcArgs),
    /// List admissible primes for the recurrence.
    Primes(PrimesArgs),
    /// Check a report file against exact evaluation of the recurrence.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Recurrence description (JSON).
    input: String,
    /// Force this prime instead of searching.
    #[arg(long)]
    prime: Option<u64>,
    /// Lift iteration budget M; results are certified mod p^(M+1).
    #[arg(long, default_value_t = 16)]
    precision: u32,
    /// Exact-search bound for zeros (inclusive, original indexing).
    #[arg(long, default_value_t = 2000)]
    horizon: u64,
    /// Cap for the mod-p period search.
    #[arg(long, default_value_t = 1_000_000)]
    max_period: u64,
    /// Accept non-constant trailing coefficients with no roots mod p.
    #[arg(long)]
    extension_mode: bool,
    /// Emit the report as JSON instead of human-readable text.
    #[arg(long)]
    json: bool,
    /// Re-run under the next admissible prime and compare the claimed
    /// zero sets (surfaces the evidence strength of ALL_ZERO classes).
    #[arg(long)]
    second_prime_check: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Recurrence description (JSON).
    input: String,
    /// Print f(0) .. f(N), one `n<TAB>value` line each.
    #[arg(long, default_value_t = 20)]
    upto: u64,
    /// Print only f(n); negative n uses the backward extension.
    #[arg(long, allow_negative_numbers = true)]
    at: Option<i64>,
}

#[derive(Args)]
struct ZerosArgs {
    /// Recurrence description (JSON).
    input: String,
    /// Search bound (inclusive).
    #[arg(long, default_value_t = 100)]
    upto: u64,
}

#[derive(Args)]
struct ArcArgs {
    /// Recurrence description (JSON).
    input: String,
    /// Force this prime instead of searching.
    #[arg(long)]
    prime: Option<u64>,
    /// Lift iteration budget M; coefficients are printed mod p^(M+1).
    #[arg(long, default_value_t = 16)]
    precision: u32,
    /// Cap for the mod-p period search.
    #[arg(long, default_value_t = 1_000_000)]
    max_period: u64,
    /// Accept non-constant trailing coefficients with no roots mod p.
    #[arg(long)]
    extension_mode: bool,
    /// Restrict the dump to one residue class.
    #[arg(long)]
    class: Option<u64>,
}

#[derive(Args)]
struct PrimesArgs {
    /// Recurrence description (JSON).
    input: String,
    /// How many admissible primes to list.
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Start the search at this value.
    #[arg(long, default_value_t = 5)]
    min: u64,
    /// Accept non-constant trailing coefficients with no roots mod p.
    #[arg(long)]
    extension_mode: bool,
    /// Emit a JSON array instead of a space-separated line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Recurrence description (JSON).
    input: String,
    /// Report file produced by `analyze --json`.
    report: String,
    /// Check bound (inclusive); defaults to the report's horizon.
    #[arg(long)]
    upto: Option<u64>,
    /// Emit the outcome as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_errors = match &cli.command {
        Command::Analyze(a) => a.json,
        Command::Arc(_) => true,
        Command::Primes(p) => p.json,
        Command::Verify(v) => v.json,
        _ => false,
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let code = err.exit_code();
            if json_errors {
                eprintln!(
                    "{}",
                    serde_json::json!({
                        "error": { "exit_code": code, "message": err.to_string() }
                    })
                );
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(code as u8)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Zeros(args) => cmd_zeros(args),
        Command::Arc(args) => cmd_arc(args),
        Command::Primes(args) => cmd_primes(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn load_spec(path: &str) -> Result<RecurrenceSpec> {
    RecurrenceSpec::from_json(&fs::read_to_string(path)?)
}

/// Print to stdout, treating a closed pipe (e.g. `| head`) as a normal
/// early exit instead of a panic.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn status_name(s: ClassStatus) -> &'static str {
    match s {
        ClassStatus::AllZero => "ALL_ZERO",
        ClassStatus::Complete => "COMPLETE",
        ClassStatus::BoundedPartial => "BOUNDED_PARTIAL",
        ClassStatus::Inconclusive => "INCONCLUSIVE",
    }
}

/// The decomposition in set notation: progressions as mN+r, then the
/// exceptional elements, joined by union signs.
fn decomposition_text(report: &ZeroSetReport) -> String {
    let mut parts: Vec<String> = report
        .decomposition
        .progressions
        .iter()
        .map(|p| format!("{}\u{2115}+{}", p.modulus, p.residue))
        .collect();
    if !report.decomposition.exceptional.is_empty() {
        let elems: Vec<String> = report
            .decomposition
            .exceptional
            .iter()
            .map(|n| n.to_string())
            .collect();
        parts.push(format!("{{{}}}", elems.join(", ")));
    }
    if parts.is_empty() {
        "\u{2205}".to_string()
    } else {
        parts.join(" \u{222a} ")
    }
}

fn human_report(report: &ZeroSetReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "prime: {}", report.prime).unwrap();
    writeln!(out, "period: {}", report.modulus_b).unwrap();
    writeln!(
        out,
        "precision: certified mod {}^{}",
        report.prime, report.precision_exp
    )
    .unwrap();
    writeln!(out, "classes:").unwrap();
    for class in &report.classes {
        let bound = class
            .strassman_bound
            .map_or_else(|| "-".to_string(), |n| n.to_string());
        let zeros: Vec<String> = class.zeros.iter().map(|n| n.to_string()).collect();
        writeln!(
            out,
            "  c={:<4} {:<16} bound={:<4} zeros=[{}]",
            class.c,
            status_name(class.status),
            bound,
            zeros.join(", ")
        )
        .unwrap();
    }
    writeln!(out, "zero set = {}", decomposition_text(report)).unwrap();
    writeln!(
        out,
        "certified equal to the exact sequence for all n <= {}",
        report.certified_equal_to_oracle_upto
    )
    .unwrap();
    out
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8> {
    let spec = load_spec(&args.input)?;
    let opts = AnalysisOptions {
        prime: args.prime,
        m_iters: args.precision,
        m_cap: args.precision.max(64),
        horizon: args.horizon,
        period_cap: args.max_period,
        extension_mode: args.extension_mode,
    };
    let report = zeroset::analyze(&spec, &opts)?;
    if report.modulus_b > report.horizon {
        eprintln!(
            "warning: horizon {} is below the period {}; some residue classes have no exact samples",
            report.horizon, report.modulus_b
        );
    }
    if args.json {
        emit(&format!("{}\n", report.to_json()));
    } else {
        emit(&human_report(&report));
    }

    let mut exit = if report.fully_certified() { 0 } else { 2 };

    if args.second_prime_check {
        let p2 = zeroset::next_admissible_prime(&spec, report.prime, args.extension_mode)?;
        let second = zeroset::analyze(
            &spec,
            &AnalysisOptions {
                prime: Some(p2),
                ..opts
            },
        )?;
        // Membership of both decompositions is eventually periodic with
        // period dividing lcm(b1, b2), so agreement up to horizon + lcm
        // is agreement everywhere.
        let bound = args.horizon + report.modulus_b.lcm(&second.modulus_b);
        let agrees = zeroset::reports_agree(&report, &second, bound);
        if args.json {
            eprintln!(
                "{}",
                serde_json::json!({
                    "second_prime_check": { "prime": p2, "agrees": agrees }
                })
            );
        } else if agrees {
            emit(&format!(
                "second prime check: p={} claims the same zero set (checked to n = {})\n",
                p2, bound
            ));
        } else {
            emit(&format!(
                "second prime check: p={} DISAGREES with p={}\n",
                p2, report.prime
            ));
        }
        if !agrees {
            exit = exit.max(2);
        }
    }

    Ok(exit)
}

fn cmd_eval(args: EvalArgs) -> Result<u8> {
    let spec = load_spec(&args.input)?;
    let normalized = spec.validate(true)?;
    match args.at {
        Some(n) if n < 0 => {
            // f(n) for n < 0 extends the recurrence-governed part backward.
            let shifted = n - normalized.shift as i64;
            emit(&format!("{}\n", normalized.eval_at_negative(shifted)?));
        }
        Some(n) => {
            let values = normalized.eval_upto(n as usize);
            emit(&format!("{}\n", values[n as usize]));
        }
        None => {
            let values = normalized.eval_upto(args.upto as usize);
            let mut out = String::new();
            for (n, v) in values.iter().enumerate() {
                out.push_str(&format!("{n}\t{v}\n"));
            }
            emit(&out);
        }
    }
    Ok(0)
}

fn cmd_zeros(args: ZerosArgs) -> Result<u8> {
    let spec = load_spec(&args.input)?;
    let normalized = spec.validate(true)?;
    let zeros: Vec<String> = normalized
        .zeros_upto(args.upto as usize)
        .iter()
        .map(|n| n.to_string())
        .collect();
    emit(&format!("{}\n", zeros.join(" ")));
    Ok(0)
}

/// One interpolation series in the `arc` dump: component `component` of
/// class `c` interpolates the companion state along c + bn, with
/// coefficients listed as residues mod p^precision_exp.
#[derive(Serialize)]
struct ArcDump {
    class: u64,
    component: usize,
    precision_exp: u32,
    beta: Vec<String>,
}

fn cmd_arc(args: ArcArgs) -> Result<u8> {
    let spec = load_spec(&args.input)?;
    let normalized = spec.validate(args.extension_mode)?;
    let prime = zeroset::choose_prime(&normalized, args.prime, args.extension_mode)?;
    let ctx = PadicContext::new(prime, args.precision + 2)?;
    let sys = CompanionSystem::build(&normalized, &ctx)?;
    let (_, _, b) = sys.find_period(args.max_period)?;
    if let Some(c) = args.class {
        if c >= b {
            return Err(Error::BadSpec(format!(
                "class {c} out of range: the period is {b}"
            )));
        }
    }
    let mut dumps = Vec::new();
    for class in sys.class_systems(b)? {
        if args.class.is_some_and(|c| c != class.c) {
            continue;
        }
        let lifted = arc::lift(&ctx, &class, args.precision)?;
        for series in &lifted.series {
            let beta = (0..=series.k_max())
                .map(|k| {
                    ctx.reduce_to(&series.beta(&ctx, k), series.trusted_exp)
                        .to_string()
                })
                .collect();
            dumps.push(ArcDump {
                class: class.c,
                component: series.component,
                precision_exp: series.trusted_exp,
                beta,
            });
        }
    }
    emit(&format!("{}\n", serde_json::to_string_pretty(&dumps)?));
    Ok(0)
}

fn cmd_primes(args: PrimesArgs) -> Result<u8> {
    let spec = load_spec(&args.input)?;
    let normalized = spec.validate(args.extension_mode)?;
    let found = zeroarc::primes::admissible_primes(
        &normalized,
        args.count,
        args.min,
        args.extension_mode,
        zeroset::PRIME_SEARCH_CAP,
    )?;
    if args.json {
        emit(&format!("{}\n", serde_json::to_string(&found)?));
    } else {
        let words: Vec<String> = found.iter().map(|p| p.to_string()).collect();
        emit(&format!("{}\n", words.join(" ")));
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let spec = load_spec(&args.input)?;
    let report = ZeroSetReport::from_json(&fs::read_to_string(&args.report)?)?;
    let upto = args.upto.unwrap_or(report.horizon);
    let (agree, discrepancies) = zeroset::verify_report(&report, &spec, upto)?;
    if args.json {
        emit(&format!(
            "{}\n",
            serde_json::json!({
                "agree": agree,
                "upto": upto,
                "discrepancies": discrepancies,
            })
        ));
    } else if agree {
        emit(&format!(
            "report agrees with exact evaluation for all n <= {upto}\n"
        ));
    } else {
        let shown: Vec<String> = discrepancies
            .iter()
            .take(10)
            .map(|n| n.to_string())
            .collect();
        emit(&format!(
            "report DISAGREES with exact evaluation at {} indices: {}{}\n",
            discrepancies.len(),
            shown.join(" "),
            if discrepancies.len() > 10 { " ..." } else { "" }
        ));
    }
    Ok(if agree { 0 } else { 2 })
}
