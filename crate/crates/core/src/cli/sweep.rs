//! Parameter sweeps: many `verify` runs, emitted in a fixed order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::{exponent_cell, int_cell, parse_tol, CliResult, Failure};
use crate::alpha::{parse_alpha, parse_rational, IrrationalNumber, Shift};
use crate::bounds::{self, BoundKind, BoundReport};
use crate::error::{Error, Result};

const DIGITS: u32 = 12;

pub const COLUMNS: [&str; 14] = [
    "alpha", "gamma", "N", "K", "qK", "qK1", "kind", "b", "sum_lo", "sum_hi", "bound_lo", "bound_hi", "tightness",
    "verdict",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    E1,
    E2,
    Dist,
    /// Expanded over every `--b` value.
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// May be repeated.
    #[arg(long = "alpha", required = true)]
    alphas: Vec<String>,
    /// May be repeated; defaults to `rat:0`.
    #[arg(long = "gamma")]
    gammas: Vec<String>,
    /// Comma-separated list or geometric `start:factor:count`; may be empty.
    #[arg(long = "N", allow_hyphen_values = true)]
    n: String,
    /// Comma-separated bound kinds.
    #[arg(long, value_enum, value_delimiter = ',')]
    kind: Vec<SweepKind>,
    /// Comma-separated exponents for the power kind.
    #[arg(long, value_delimiter = ',')]
    b: Vec<String>,
    #[arg(long, default_value = "2^-30")]
    tol: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads; 0 means the rayon default.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

/// A validated sweep grid.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub alphas: Vec<IrrationalNumber>,
    pub gammas: Vec<Shift>,
    pub ns: Vec<u64>,
    /// Expanded `(kind, b)` pairs in output order.
    pub kinds: Vec<(BoundKind, Option<BigRational>)>,
    pub tol_bits: u32,
}

/// Parse an N schedule: `""`, `"10,100"` or `"start:factor:count"`.
pub fn parse_schedule(s: &str) -> Result<Vec<u64>> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    let ns: Vec<u64> = if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        let [start, factor, count] = parts.as_slice() else {
            return Err(Error::parse(s, "expected start:factor:count"));
        };
        let num = |x: &str| x.trim().parse::<u64>().map_err(|_| Error::parse(s, "expected unsigned integers"));
        let (start, factor, count) = (num(start)?, num(factor)?, num(count)?);
        let mut out = Vec::with_capacity(count as usize);
        let mut v = start;
        for i in 0..count {
            if i > 0 {
                v = v.checked_mul(factor).ok_or_else(|| Error::parse(s, "schedule overflows u64"))?;
            }
            out.push(v);
        }
        out
    } else {
        t.split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| Error::parse(s, "expected a list of unsigned integers")))
            .collect::<Result<_>>()?
    };
    if ns.contains(&0) {
        return Err(Error::parse(s, "N values must be at least 1"));
    }
    Ok(ns)
}

impl SweepSpec {
    fn from_args(args: &SweepArgs) -> Result<Self> {
        let alphas = args.alphas.iter().map(|a| parse_alpha(a)).collect::<Result<_>>()?;
        let gammas = if args.gammas.is_empty() {
            vec![Shift::zero()]
        } else {
            args.gammas.iter().map(|g| Shift::parse(g)).collect::<Result<_>>()?
        };
        let bs: Vec<BigRational> = args.b.iter().map(|b| parse_rational(b)).collect::<Result<_>>()?;
        let requested = if args.kind.is_empty() {
            vec![if bs.is_empty() { SweepKind::E1 } else { SweepKind::Power }]
        } else {
            args.kind.clone()
        };
        let mut kinds = Vec::new();
        for k in requested {
            match k {
                SweepKind::E1 => kinds.push((BoundKind::E1, None)),
                SweepKind::E2 => kinds.push((BoundKind::E2, None)),
                SweepKind::Dist => kinds.push((BoundKind::Dist, None)),
                SweepKind::Power => {
                    if bs.is_empty() {
                        return Err(Error::Domain("kind power needs --b".into()));
                    }
                    kinds.extend(bs.iter().map(|b| (bounds::power_kind(b), Some(b.clone()))));
                }
            }
        }
        Ok(SweepSpec {
            alphas,
            gammas,
            ns: parse_schedule(&args.n)?,
            kinds,
            tol_bits: parse_tol(&args.tol)?,
        })
    }

    /// Grid points in output order: α, then γ, then N, then kind/b.
    fn cells(&self) -> Vec<Cell<'_>> {
        let mut out = Vec::new();
        for alpha in &self.alphas {
            for gamma in &self.gammas {
                for &n in &self.ns {
                    for (kind, b) in &self.kinds {
                        out.push(Cell {
                            alpha,
                            gamma,
                            n,
                            kind: *kind,
                            b: b.as_ref(),
                        });
                    }
                }
            }
        }
        out
    }
}

struct Cell<'a> {
    alpha: &'a IrrationalNumber,
    gamma: &'a Shift,
    n: u64,
    kind: BoundKind,
    b: Option<&'a BigRational>,
}

/// One output row; numeric cells are already rendered.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub alpha: String,
    pub gamma: String,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "qK")]
    pub q_k: String,
    #[serde(rename = "qK1")]
    pub q_k1: String,
    pub kind: &'static str,
    pub b: String,
    pub sum_lo: String,
    pub sum_hi: String,
    pub bound_lo: String,
    pub bound_hi: String,
    pub tightness: String,
    pub verdict: String,
}

impl Row {
    fn fields(&self) -> [String; 14] {
        [
            self.alpha.clone(),
            self.gamma.clone(),
            self.n.to_string(),
            self.k.clone(),
            self.q_k.clone(),
            self.q_k1.clone(),
            self.kind.to_string(),
            self.b.clone(),
            self.sum_lo.clone(),
            self.sum_hi.clone(),
            self.bound_lo.clone(),
            self.bound_hi.clone(),
            self.tightness.clone(),
            self.verdict.clone(),
        ]
    }
}

fn evaluate(cell: &Cell<'_>, tol_bits: u32) -> Row {
    let mut row = Row {
        alpha: cell.alpha.label().to_string(),
        gamma: cell.gamma.to_string(),
        n: cell.n,
        k: String::new(),
        q_k: String::new(),
        q_k1: String::new(),
        kind: cell.kind.name(),
        b: cell.b.map(exponent_cell).unwrap_or_default(),
        sum_lo: String::new(),
        sum_hi: String::new(),
        bound_lo: String::new(),
        bound_hi: String::new(),
        tightness: String::new(),
        verdict: "error".into(),
    };
    let report: Result<BoundReport> = bounds::verify_kind(cell.alpha, cell.gamma, cell.n, cell.kind, cell.b, tol_bits);
    if let Ok(r) = report {
        row.k = r.bound.k.to_string();
        row.q_k = int_cell(&r.bound.q_k);
        row.q_k1 = int_cell(&r.bound.q_k1);
        row.sum_lo = bounds::lower_decimal(&r.sum.value, DIGITS);
        row.sum_hi = bounds::upper_decimal(&r.sum.value, DIGITS);
        row.bound_lo = bounds::lower_decimal(&r.bound.value, DIGITS);
        row.bound_hi = bounds::upper_decimal(&r.bound.value, DIGITS);
        row.tightness = format!("{:.6}", round_up_6(r.tightness));
        row.verdict = r.verdict.to_string();
    }
    row
}

/// Round up to six decimals so the printed ratio never understates.
fn round_up_6(x: f64) -> f64 {
    (x * 1e6).ceil() / 1e6
}

/// Compute all rows in grid order.
pub fn sweep_rows(spec: &SweepSpec, threads: usize) -> std::result::Result<Vec<Row>, String> {
    let cells = spec.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(|| cells.par_iter().map(|c| evaluate(c, spec.tol_bits)).collect()))
}

fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> CliResult {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            let csv_err = |e: csv::Error| Failure::Usage(format!("csv: {e}"));
            w.write_record(COLUMNS).map_err(csv_err)?;
            for r in rows {
                w.write_record(r.fields()).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub(crate) fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let spec = SweepSpec::from_args(args)?;
    let rows = sweep_rows(&spec, args.threads).map_err(Failure::Usage)?;
    let failed = rows.iter().filter(|r| r.verdict == "error").count();
    if failed > 0 {
        writeln!(err, "warning: {failed} of {} rows failed", rows.len())?;
    }
    match &args.output {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write_rows(&rows, args.format, &mut f)?;
            f.flush()?;
        }
        None => write_rows(&rows, args.format, out)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(parse_schedule("").unwrap(), Vec::<u64>::new());
        assert_eq!(parse_schedule("10,100,1000").unwrap(), vec![10, 100, 1000]);
        assert_eq!(parse_schedule("10:10:3").unwrap(), vec![10, 100, 1000]);
        assert_eq!(parse_schedule("5:2:0").unwrap(), Vec::<u64>::new());
        assert!(parse_schedule("0,1").is_err());
        assert!(parse_schedule("1:2").is_err());
        assert!(parse_schedule("x").is_err());
    }

    #[test]
    fn tightness_rounds_up() {
        assert!(round_up_6(0.1700331) >= 0.1700331);
        assert_eq!(format!("{:.6}", round_up_6(0.1700331)), "0.170034");
    }
}
