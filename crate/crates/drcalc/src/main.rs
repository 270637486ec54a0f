use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use decireal::computable::{carry_stats, pi_plus_e_scan, CarryOp};
use decireal::decimal_stream::write_dump_digits;
use decireal::exact_scaled::render_floor;
use decireal::expr::{evaluate, parse_expr, Expr, ParseError};
use decireal::oracle::{certify_digits, exhaustive_small_check, Certification};
use decireal::{ArithError, DecimalReal, DigitError, Fuel, ScaledDecimal};
use num_bigint::BigInt;
use serde_json::json;

const EXIT_FAILURE: u8 = 1;
const EXIT_UNDETERMINED: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_DOMAIN: u8 = 4;

#[derive(Parser)]
#[command(name = "drcalc", version, about = "Calculator over infinite decimals with certified digits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression to K digits after the point
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Digits of pi from the length of the unit semicircle
    Pi {
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// How often (x op y)_k takes the lower of its two possible values
    Stats {
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long, default_value_t = 6)]
        k: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive check of the arithmetic on small terminating decimals
    Selfcheck {
        #[arg(long, default_value_t = 2)]
        max_scale: u32,
        #[arg(long, default_value_t = 1)]
        max_int: u32,
        #[arg(long)]
        json: bool,
    },
    /// Show how far the digit scan for pi + e looks ahead at each position
    Scan {
        #[arg(long, short = 'k', default_value_t = 30)]
        digits: u32,
        #[arg(long)]
        fuel: Option<u32>,
    },
}

#[derive(clap::Args)]
struct EvalOpts {
    /// Digits after the point
    #[arg(long, short = 'k', default_value_t = 30)]
    digits: u32,
    /// Scan depth per digit [default: max(10 * digits, 1000)]
    #[arg(long)]
    fuel: Option<u32>,
    #[arg(long)]
    json: bool,
    /// Certify the printed digits against the interval oracle
    #[arg(long)]
    check: bool,
    /// Write the printed digits to FILE in the digit-dump format
    #[arg(long, value_name = "FILE")]
    dump: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Add,
    Mul,
}

fn fuel_for(digits: u32, fuel: Option<u32>) -> Fuel {
    Fuel::new(fuel.unwrap_or_else(|| digits.saturating_mul(10).max(1000)))
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("drcalc: {msg}");
    ExitCode::from(code)
}

enum Status {
    ExactTerminating,
    Streamed,
    Undetermined(u32),
}

impl Status {
    fn label(&self) -> String {
        match self {
            Status::ExactTerminating => "exact-terminating".into(),
            Status::Streamed => "streamed".into(),
            Status::Undetermined(h) => format!("undetermined({h})"),
        }
    }
}

/// The certified part of a value: `mantissa * 10^-scale` is its truncation.
struct Rendered {
    prefix: Option<(BigInt, u32)>,
    status: Status,
}

impl Rendered {
    fn text(&self) -> String {
        let digits = self.prefix.as_ref().map(|(m, s)| render_floor(m, *s)).unwrap_or_default();
        match self.status {
            Status::Undetermined(h) if digits.is_empty() => format!("… undetermined at horizon {h}"),
            Status::Undetermined(h) => format!("{digits} … undetermined at horizon {h}"),
            _ => digits,
        }
    }
}

fn render(x: &DecimalReal, k: u32) -> Result<Rendered, DigitError> {
    if let Some(t) = x.as_terminating() {
        if t.scale() <= k {
            return Ok(Rendered {
                prefix: Some((t.mantissa().clone(), t.scale())),
                status: Status::ExactTerminating,
            });
        }
    }
    if let Some(r) = x.exact_value() {
        let status = if ScaledDecimal::from_rational(&r).is_some() { Status::ExactTerminating } else { Status::Streamed };
        return Ok(Rendered { prefix: Some((x.truncation_mantissa(k)?, k)), status });
    }
    let mut prefix = None;
    for j in 0..=k {
        match x.truncation_mantissa(j) {
            Ok(m) => prefix = Some((m, j)),
            Err(DigitError::Undetermined { horizon }) => {
                return Ok(Rendered { prefix, status: Status::Undetermined(horizon) })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Rendered { prefix, status: Status::Streamed })
}

fn parse_failure(input: &str, e: &ParseError) -> ExitCode {
    eprintln!("drcalc: {e}");
    eprintln!("  {input}");
    eprintln!("  {}^", " ".repeat(input[..e.offset.min(input.len())].chars().count()));
    ExitCode::from(EXIT_PARSE)
}

fn digit_failure(e: DigitError) -> ExitCode {
    match e {
        DigitError::Undetermined { .. } => fail(EXIT_UNDETERMINED, e),
        DigitError::Domain(_) => fail(EXIT_DOMAIN, e),
        other => fail(EXIT_FAILURE, other),
    }
}

/// Certify with growing guard digits until the oracle decides.
fn certify(x: &DecimalReal, e: &Expr, k: u32) -> Result<Certification, String> {
    let mut last = Certification::Inconclusive;
    for guard in [5, 10, 20, 40] {
        last = certify_digits(x, e, k, guard).map_err(|err| err.to_string())?;
        if last != Certification::Inconclusive {
            break;
        }
    }
    Ok(last)
}

fn run_eval(input: &str, opts: &EvalOpts) -> ExitCode {
    let expr = match parse_expr(input) {
        Ok(e) => e,
        Err(e) => return parse_failure(input, &e),
    };
    let fuel = fuel_for(opts.digits, opts.fuel);
    let value = match evaluate(&expr, fuel) {
        Ok(v) => v,
        Err(ArithError::Domain(m)) => return fail(EXIT_DOMAIN, format!("domain error: {m}")),
        Err(ArithError::Digit(e)) => return digit_failure(e),
    };
    let rendered = match render(&value, opts.digits) {
        Ok(r) => r,
        Err(e) => return digit_failure(e),
    };

    let mut check_failure = None;
    let checked = match (&rendered.prefix, opts.check) {
        (Some((_, scale)), true) => match certify(&value, &expr, *scale) {
            Ok(Certification::Certified) => true,
            Ok(Certification::Mismatch(j)) => {
                check_failure = Some(format!("check failed: digit {j} disagrees with the oracle"));
                false
            }
            Ok(Certification::Inconclusive) => {
                check_failure = Some("check inconclusive: oracle enclosure straddles a digit boundary".into());
                false
            }
            Err(e) => {
                check_failure = Some(format!("check unavailable: {e}"));
                false
            }
        },
        _ => false,
    };

    if let (Some(path), Some((m, scale))) = (&opts.dump, &rendered.prefix) {
        if let Err(e) = dump(path, m, *scale) {
            return fail(EXIT_FAILURE, format!("cannot write {path}: {e}"));
        }
    }

    if opts.json {
        let mut out = json!({
            "input": input,
            "value": rendered.prefix.as_ref().map(|(m, s)| render_floor(m, *s)),
            "digits": rendered.prefix.as_ref().map_or(0, |(_, s)| *s),
            "status": rendered.status.label(),
            "fuel_used": value.scan_depth(),
            "checked": checked,
        });
        if let Status::Undetermined(h) = rendered.status {
            out["horizon"] = json!(h);
        }
        println!("{out}");
    } else {
        println!("{}", rendered.text());
        println!("status: {}", rendered.status.label());
        if checked {
            println!("check: certified");
        }
    }

    if let Some(msg) = check_failure {
        return fail(EXIT_FAILURE, msg);
    }
    match rendered.status {
        Status::Undetermined(_) => ExitCode::from(EXIT_UNDETERMINED),
        _ => ExitCode::SUCCESS,
    }
}

fn dump(path: &str, mantissa: &BigInt, scale: u32) -> std::io::Result<()> {
    let value = ScaledDecimal::new(mantissa.clone(), scale);
    let digits: Vec<u8> = (1..=scale).filter_map(|j| value.digit_at(j).decimal()).collect();
    let mut w = BufWriter::new(File::create(path)?);
    write_dump_digits(&value.integer_part(), &digits, &mut w)?;
    w.flush()
}

fn run_stats(op: OpArg, k: u32, trials: u64, seed: u64, as_json: bool) -> ExitCode {
    let op = match op {
        OpArg::Add => CarryOp::Add,
        OpArg::Mul => CarryOp::Mul,
    };
    let report = match carry_stats(op, k, trials, seed) {
        Ok(r) => r,
        Err(e) => return digit_failure(e),
    };
    if as_json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        v["frequency"] = json!(report.frequency());
        println!("{v}");
    } else {
        let name = match op {
            CarryOp::Add => "add",
            CarryOp::Mul => "mul",
        };
        println!(
            "op={name} k={k} trials={trials} seed={seed} first_choice={} rejected={} frequency={:.6}",
            report.first_choice,
            report.rejected,
            report.frequency()
        );
    }
    ExitCode::SUCCESS
}

fn run_selfcheck(max_scale: u32, max_int: u32, as_json: bool) -> ExitCode {
    let report = exhaustive_small_check(max_scale, max_int);
    if as_json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        println!("values: {}", report.values);
        println!("pairs: {}", report.pairs);
        println!("triples: {}", report.triples);
        println!("checks: {}", report.checks);
        println!("counterexamples: {}", report.counterexamples);
        if let Some(c) = &report.first_counterexample {
            println!("first counterexample: {c}");
        }
    }
    if report.counterexamples == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn run_scan(digits: u32, fuel: Fuel) -> ExitCode {
    let traces = match pi_plus_e_scan(digits, fuel) {
        Ok(t) => t,
        Err(e) => return digit_failure(e),
    };
    println!("pos  digit  depth  scanned digits of pi_n + e_n");
    for t in &traces {
        let digit = match &t.result {
            Some(r) => r.digit_at(t.position).value().to_string(),
            None => "?".into(),
        };
        let scanned: String = t.scanned.iter().map(|(_, d)| char::from(b'0' + d)).collect();
        println!("{:>3}  {:>5}  {:>5}  {}", t.position, digit, t.depth(), scanned);
    }
    if traces.iter().any(|t| t.result.is_none()) {
        return ExitCode::from(EXIT_UNDETERMINED);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval { expr, opts } => run_eval(&expr, &opts),
        Command::Pi { opts } => run_eval("pi", &opts),
        Command::Stats { op, k, trials, seed, json } => run_stats(op, k, trials, seed, json),
        Command::Selfcheck { max_scale, max_int, json } => run_selfcheck(max_scale, max_int, json),
        Command::Scan { digits, fuel } => run_scan(digits, fuel_for(digits, fuel)),
    }
}
