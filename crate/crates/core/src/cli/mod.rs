//! Command-line front end. Data goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 2 bad input, 3 continued-fraction prefix
//! exhausted, 4 unresolved comparison, 5 inconclusive verification.

mod sweep;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::alpha::{parse_alpha, parse_rational, IrrationalNumber, Shift};
use crate::bounds::{self, BoundKind, Verdict};
use crate::cf::{approximation_error, convergents};
use crate::error::Error;
use crate::oracle::{self, OracleConfig};
use crate::report::Interval;
use crate::sums;
use crate::three_gap::decompose;

pub use sweep::{parse_schedule, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DIGITS: i32 = 3;
pub const EXIT_UNRESOLVED: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "threegap", version, about = "Three-gap structure and certified reciprocal sums for {nα − γ}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partial quotients, convergents and approximation errors.
    Expand {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Three-gap decomposition as JSON.
    Gaps {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N")]
        n: u64,
    },
    /// Indices n_1..n_N ordered by {nα}.
    Perm {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N")]
        n: u64,
    },
    /// Certified enclosure of a reciprocal sum, as JSON.
    Sum(SumArgs),
    /// Compare a sum with its explicit upper bound.
    Verify(SumArgs),
    /// Batch verification over a parameter grid, as CSV or JSON.
    Sweep(sweep::SweepArgs),
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
struct SumArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value = "rat:0")]
    gamma: String,
    #[arg(long = "N")]
    n: u64,
    /// Exponent of the fractional part.
    #[arg(long)]
    b: Option<String>,
    /// Weight exponent: terms become 1/(n^a {nα − γ}^b).
    #[arg(long)]
    a: Option<String>,
    /// Use the distance to the nearest integer.
    #[arg(long, conflicts_with_all = ["b", "a", "exclude_residue"])]
    dist: bool,
    /// Drop the whole residue class of the minimiser modulo q_K.
    #[arg(long, conflicts_with_all = ["b", "a"])]
    exclude_residue: bool,
    /// Target width: `2^-k` or a decimal.
    #[arg(long, default_value = "2^-30")]
    tol: String,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Sorted fractional parts {nα}.
    Points {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
    /// Distinct gap lengths with multiplicities.
    Gaps {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
    /// Direct summation of 1/(n^a {nα − γ}^b).
    Sum {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "rat:0")]
        gamma: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value = "0")]
        a: String,
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
}

/// Everything a command can fail with.
#[derive(Debug)]
pub(crate) enum Failure {
    Lib(Error),
    Usage(String),
    Inconclusive(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(Error::InsufficientDigits { .. }) => EXIT_DIGITS,
            Failure::Lib(Error::UnresolvedComparison(_)) => EXIT_UNRESOLVED,
            Failure::Lib(_) | Failure::Usage(_) => EXIT_INPUT,
            Failure::Inconclusive(_) => EXIT_INCONCLUSIVE,
            Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Usage(m) | Failure::Inconclusive(m) => m.clone(),
            Failure::Io(e) => format!("i/o error: {e}"),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Parse a tolerance given as `2^-k` or as a positive decimal into the
/// smallest `k` with `2^-k <= tol`.
pub fn parse_tol(s: &str) -> Result<u32, Error> {
    let t = s.trim();
    if let Some(k) = t.strip_prefix("2^-") {
        return k.parse::<u32>().map_err(|_| Error::parse(s, "expected 2^-k"));
    }
    let v = parse_rational(t)?;
    if !v.is_positive() {
        return Err(Error::parse(s, "tolerance must be positive"));
    }
    let mut bits = 0u32;
    let mut p = BigRational::one();
    while p > v {
        p /= BigRational::from_integer(2.into());
        bits += 1;
        if bits > 1 << 16 {
            return Err(Error::parse(s, "tolerance too small"));
        }
    }
    Ok(bits)
}

fn parse_exponent(s: &str, what: &str) -> Result<BigRational, Failure> {
    parse_rational(s).map_err(|_| Failure::Usage(format!("cannot parse {what} = {s:?}")))
}

fn to_json<T: Serialize>(out: &mut dyn Write, v: &T) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_expand(out: &mut dyn Write, alpha: &IrrationalNumber, count: usize) -> CliResult {
    let cs = convergents(alpha, count)?;
    writeln!(out, "k\ta_k\tp_k\tq_k\tD_k")?;
    for c in cs {
        let (_, d) = approximation_error(alpha, c.k)?;
        writeln!(out, "{}\t{}\t{}\t{}\t{:.12e}", c.k, c.a, c.p, c.q, d.approx::<f64>())?;
    }
    Ok(())
}

fn sum_report(args: &SumArgs) -> Result<sums::SumReport, Failure> {
    let alpha = parse_alpha(&args.alpha)?;
    let gamma = Shift::parse(&args.gamma)?;
    let tol = parse_tol(&args.tol)?;
    let a = match &args.a {
        Some(s) => parse_exponent(s, "a")?,
        None => BigRational::zero(),
    };
    let b = match &args.b {
        Some(s) => parse_exponent(s, "b")?,
        None => BigRational::one(),
    };
    let r = if args.dist {
        sums::sum_reciprocal_dist(&alpha, &gamma, args.n, tol)?
    } else if args.exclude_residue {
        sums::sum_reciprocal_frac_excluding_residue(&alpha, &gamma, args.n, tol)?
    } else {
        sums::sum_general(&alpha, &gamma, args.n, &a, &b, tol)?
    };
    Ok(r)
}

fn cmd_verify(out: &mut dyn Write, args: &SumArgs) -> CliResult {
    if args.a.as_deref().is_some_and(|a| parse_rational(a).map(|v| !v.is_zero()).unwrap_or(true)) {
        return Err(Failure::Usage("no explicit bound is available for weighted sums (a > 0)".into()));
    }
    let alpha = parse_alpha(&args.alpha)?;
    let gamma = Shift::parse(&args.gamma)?;
    let tol = parse_tol(&args.tol)?;
    let b = args.b.as_deref().map(|s| parse_exponent(s, "b")).transpose()?;
    let (kind, b) = match b {
        Some(b) if !b.is_one() => (bounds::power_kind(&b), Some(b)),
        _ if args.dist => (BoundKind::Dist, None),
        _ if args.exclude_residue => (BoundKind::E2, None),
        _ => (BoundKind::E1, None),
    };
    let report = bounds::verify_kind(&alpha, &gamma, args.n, kind, b.as_ref(), tol)?;
    to_json(out, &report.to_json())?;
    if report.verdict == Verdict::Inconclusive {
        return Err(Failure::Inconclusive(format!(
            "sum {} is not certified below bound {}",
            report.sum.value, report.bound.value
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PointJson {
    n: u64,
    value: Interval,
}

#[derive(Serialize)]
struct GapJson {
    length: Interval,
    count: u64,
}

fn cmd_oracle(out: &mut dyn Write, cmd: &OracleCommand) -> CliResult {
    match cmd {
        OracleCommand::Points { alpha, n, bits } => {
            let cfg = OracleConfig::new(*bits, 0)?;
            let pts = oracle::sorted_points(&parse_alpha(alpha)?, *n, &cfg)?;
            let v: Vec<_> = pts
                .iter()
                .map(|(n, e)| PointJson {
                    n: *n,
                    value: Interval::from(e),
                })
                .collect();
            to_json(out, &v)
        }
        OracleCommand::Gaps { alpha, n, bits } => {
            let cfg = OracleConfig::new(*bits, 0)?;
            let gaps = oracle::gap_multiset(&parse_alpha(alpha)?, *n, &cfg)?;
            let v: Vec<_> = gaps
                .iter()
                .map(|(e, c)| GapJson {
                    length: Interval::from(e),
                    count: *c,
                })
                .collect();
            to_json(out, &v)
        }
        OracleCommand::Sum {
            alpha,
            gamma,
            n,
            a,
            b,
            bits,
        } => {
            let cfg = OracleConfig::new(*bits, 0)?;
            let v = oracle::sum_brute(
                &parse_alpha(alpha)?,
                &Shift::parse(gamma)?,
                *n,
                &parse_exponent(a, "a")?,
                &parse_exponent(b, "b")?,
                &cfg,
            )?;
            to_json(out, &Interval::from(&v))
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Expand { alpha, count } => cmd_expand(out, &parse_alpha(&alpha)?, count),
        Command::Gaps { alpha, n } => to_json(out, &decompose(&parse_alpha(&alpha)?, n)?.report()?),
        Command::Perm { alpha, n } => {
            let p = decompose(&parse_alpha(&alpha)?, n)?.permutation();
            let s: Vec<String> = p.iter().map(u64::to_string).collect();
            writeln!(out, "{}", s.join(" "))?;
            Ok(())
        }
        Command::Sum(args) => to_json(out, &sum_report(&args)?.to_json()),
        Command::Verify(args) => cmd_verify(out, &args),
        Command::Sweep(args) => sweep::cmd_sweep(&args, out, err),
        Command::Oracle(cmd) => cmd_oracle(out, &cmd),
    }
}

/// Run the CLI on explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

/// Render a big integer for tables.
pub(crate) fn int_cell(x: &BigInt) -> String {
    x.to_string()
}

/// Render an exponent for tables: integers plainly, others as decimals when exact.
pub(crate) fn exponent_cell(b: &BigRational) -> String {
    if b.is_integer() {
        return b.to_integer().to_string();
    }
    let f = b.to_f64().unwrap_or(f64::NAN);
    match BigRational::from_float(f) {
        Some(v) if &v == b => format!("{f}"),
        _ => b.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["threegap"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn tolerance_parsing() {
        assert_eq!(parse_tol("2^-30").unwrap(), 30);
        assert_eq!(parse_tol("0.5").unwrap(), 1);
        assert_eq!(parse_tol("1e-3").unwrap(), 10);
        assert_eq!(parse_tol("1").unwrap(), 0);
        assert!(parse_tol("0").is_err());
        assert!(parse_tol("-1").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["expand", "--alpha", "cf:3,7", "--count", "5"]).0, EXIT_DIGITS);
        assert_eq!(run_str(&["expand", "--alpha", "surd:1,2", "--count", "5"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["gaps", "--alpha", "sqrt2m1", "--N", "0"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["bogus"]).0, EXIT_INPUT);
        assert_eq!(
            run_str(&["sum", "--alpha", "sqrt2m1", "--gamma", "dec:0.24264068711928515@20", "--N", "4"]).0,
            EXIT_UNRESOLVED
        );
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn weighted_verify_is_refused() {
        let (code, _, err) = run_str(&["verify", "--alpha", "sqrt2m1", "--N", "4", "--a", "1"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("weighted"));
    }

    #[test]
    fn exponent_cells() {
        assert_eq!(exponent_cell(&BigRational::new(1.into(), 2.into())), "0.5");
        assert_eq!(exponent_cell(&BigRational::from_integer(3.into())), "3");
        assert_eq!(exponent_cell(&BigRational::new(1.into(), 3.into())), "1/3");
    }
}
