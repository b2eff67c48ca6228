use std::f64::consts::{E, PI};
use std::fs;
use std::io::{self, Read, Write};
use std::str::FromStr;

use lsseq::bounds::{classical_bound, generalized_bound, BoundReport};
use lsseq::discrepancy::{report, report_sorted, DiscrepancyReport};
use lsseq::numeration::phi;
use lsseq::partition::partition_at_level;
use lsseq::{solve_spectral, validate_params, CountsTable, Error, LsSequence, Params};
use num_bigint::BigUint;
use serde::Serialize;

use crate::format::real;
use crate::{
    BoundArgs, Command, CountsArgs, DigitsArgs, DiscArgs, Failure, Format, Function, GenArgs, IntegrateArgs, Kind,
    Outcome, ParamsCommand, PartitionArgs, VerifyArgs,
};

/// Largest `--max-n` accepted by `verify`.
const VERIFY_LIMIT: u64 = 1_000_000;
/// Log-spaced grid size used by `verify`, on top of every `t_n`.
const VERIFY_GRID: usize = 60;
/// Points generated per batch by `gen`.
const GEN_CHUNK: u64 = 1 << 16;

pub fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Params(ParamsCommand::Check { params }) => params_check(&params, out),
        Command::Gen(args) => gen(args, out),
        Command::Digits(args) => digits(args, out),
        Command::Counts(args) => counts(args, out),
        Command::Partition(args) => partition(args, out),
        Command::Disc(args) => disc(args, out),
        Command::Bound(args) => bound(args, out),
        Command::Verify(args) => verify(args, out),
        Command::Integrate(args) => integrate(args, out),
    }
}

fn io_err(e: io::Error) -> Failure {
    Failure::Io("cannot write output".into(), e)
}

/// Parses and fully validates, root condition included.
fn parse_params(text: &str) -> Result<Params, Failure> {
    Ok(validate_params(Params::from_str(text)?.coeffs())?)
}

fn sequence(text: &str) -> Result<LsSequence, Failure> {
    Ok(LsSequence::new(&Params::from_str(text)?)?)
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::Io("cannot write output".into(), e.into()))?;
    writeln!(out).map_err(io_err)
}

#[derive(Serialize)]
struct RootInfo {
    re: f64,
    im: f64,
    modulus: f64,
}

#[derive(Serialize)]
struct ParamsCheck {
    params: String,
    valid: bool,
    pisot: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conjugates: Option<Vec<RootInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

fn params_check(text: &str, out: &mut dyn Write) -> Outcome {
    let solved = Params::from_str(text).and_then(|p| solve_spectral(&p));
    let report = match &solved {
        Ok(s) => ParamsCheck {
            params: s.params().to_string(),
            valid: true,
            pisot: true,
            k: Some(s.params().k()),
            beta: Some(s.beta()),
            conjugates: Some(
                s.conjugates().iter().map(|z| RootInfo { re: z.re, im: z.im, modulus: z.norm() }).collect(),
            ),
            root_residual: Some(s.root_residual()),
            lambda_residual: Some(s.residual()),
            reason: None,
            message: None,
        },
        Err(e) => ParamsCheck {
            params: text.to_string(),
            valid: false,
            pisot: false,
            k: None,
            beta: None,
            conjugates: None,
            root_residual: None,
            lambda_residual: None,
            reason: Some(e.kind()),
            message: Some(e.to_string()),
        },
    };
    write_json(out, &report)?;
    solved.map(|_| ()).map_err(Failure::Invalid)
}

#[derive(Serialize)]
struct JsonPoint {
    #[serde(rename = "N")]
    n: u64,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<String>,
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Outcome {
    let seq = sequence(&args.params)?;
    let end = args
        .start
        .checked_add(args.count)
        .ok_or_else(|| Failure::Usage("start + count overflows the index range".into()))?;
    match args.format {
        Format::Csv => {
            if !args.no_header {
                writeln!(out, "N,value{}", if args.coeffs { ",coeffs" } else { "" }).map_err(io_err)?;
            }
            if args.coeffs {
                for p in seq.point_range(args.start, end) {
                    writeln!(out, "{},{},{}", p.index, real(p.value), p.coeffs).map_err(io_err)?;
                }
            } else {
                let mut lo = args.start;
                while lo < end {
                    let hi = end.min(lo.saturating_add(GEN_CHUNK));
                    for (n, v) in (lo..hi).zip(seq.values(lo, hi)) {
                        writeln!(out, "{n},{}", real(v)).map_err(io_err)?;
                    }
                    lo = hi;
                }
            }
        }
        Format::Json => {
            write!(out, "[").map_err(io_err)?;
            for (i, p) in seq.point_range(args.start, end).enumerate() {
                let item = JsonPoint { n: p.index, value: p.value, coeffs: args.coeffs.then(|| p.coeffs.to_string()) };
                let sep = if i == 0 { "\n  " } else { ",\n  " };
                write!(out, "{sep}").map_err(io_err)?;
                serde_json::to_writer(&mut *out, &item)
                    .map_err(|e| Failure::Io("cannot write output".into(), e.into()))?;
            }
            writeln!(out, "\n]").map_err(io_err)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DigitsReport {
    #[serde(rename = "N")]
    n: String,
    digits: String,
    pairs: Vec<(u8, u32)>,
}

fn digits(args: DigitsArgs, out: &mut dyn Write) -> Outcome {
    let params = parse_params(&args.params)?;
    let n = BigUint::from_str(args.n.trim())
        .map_err(|_| Failure::Invalid(Error::InvalidInput(format!("not a non-negative integer: {}", args.n))))?;
    let expansion = if n == BigUint::ZERO {
        Default::default()
    } else {
        let mut counts = CountsTable::new(&params, 0);
        counts.cover(&n);
        phi(&counts, &n)?
    };
    match args.format {
        Format::Csv => writeln!(out, "N,digits\n{n},\"{expansion}\"").map_err(io_err),
        Format::Json => write_json(
            out,
            &DigitsReport {
                n: n.to_string(),
                digits: expansion.to_string(),
                pairs: expansion.digits().iter().map(|d| (d.eps as u8, d.eta)).collect(),
            },
        ),
    }
}

fn counts(args: CountsArgs, out: &mut dyn Write) -> Outcome {
    let params = parse_params(&args.params)?;
    let table = CountsTable::new(&params, args.levels);
    if !args.no_header {
        let ls: String = (1..=params.k()).map(|i| format!(",l{i}")).collect();
        writeln!(out, "n,t{ls}").map_err(io_err)?;
    }
    for n in 0..=args.levels {
        let row = table.row(n).expect("table built to requested level");
        let ls: String = row.l.iter().map(|v| format!(",{v}")).collect();
        writeln!(out, "{n},{}{ls}", row.t).map_err(io_err)?;
    }
    Ok(())
}

fn partition(args: PartitionArgs, out: &mut dyn Write) -> Outcome {
    let seq = sequence(&args.params)?;
    let part = partition_at_level(seq.params(), args.level)?;
    let ends = part.left_endpoints(seq.beta());
    if args.endpoints {
        if !args.no_header {
            writeln!(out, "left").map_err(io_err)?;
        }
        for v in ends {
            writeln!(out, "{}", real(v)).map_err(io_err)?;
        }
        return Ok(());
    }
    if !args.no_header {
        writeln!(out, "position,exponent,coeffs,left").map_err(io_err)?;
    }
    for (i, (iv, v)) in part.intervals().iter().zip(ends).enumerate() {
        writeln!(out, "{i},{},{},{}", iv.exponent, iv.left, real(v)).map_err(io_err)?;
    }
    Ok(())
}

/// Values from CSV (column `value` if a header names it, else the second
/// column when there are several) or from a plain one-per-line list.
fn parse_values(text: &str) -> Result<Vec<f64>, Failure> {
    let mut column: Option<usize> = None;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let col = column.unwrap_or(if fields.len() > 1 { 1 } else { 0 });
        let field = fields.get(col).copied().unwrap_or("");
        match field.parse::<f64>() {
            Ok(v) => {
                column.get_or_insert(col);
                values.push(v);
            }
            Err(_) if values.is_empty() && column.is_none() => {
                column = Some(fields.iter().position(|f| *f == "value").unwrap_or(col));
            }
            Err(_) => {
                return Err(Failure::Invalid(Error::InvalidInput(format!(
                    "line {}: cannot read a value from {line:?}",
                    lineno + 1
                ))))
            }
        }
    }
    Ok(values)
}

fn disc(args: DiscArgs, out: &mut dyn Write) -> Outcome {
    let values = match (args.count, args.file) {
        (Some(count), _) => {
            let seq = sequence(args.params.as_deref().expect("clap requires params with --count"))?;
            seq.values(1, count.saturating_add(1))
        }
        (None, Some(path)) => {
            let text = if path == "-" {
                let mut buf = String::new();
                io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Io("cannot read stdin".into(), e))?;
                buf
            } else {
                fs::read_to_string(&path).map_err(|e| Failure::Io(format!("cannot read {path}"), e))?
            };
            parse_values(&text)?
        }
        (None, None) => unreachable!("clap requires --count or --file"),
    };
    write_json(out, &report(&values)?)
}

#[derive(Serialize)]
struct Evaluation {
    #[serde(rename = "N")]
    n: u64,
    value: f64,
    certified: bool,
}

#[derive(Serialize)]
struct BoundOutput<'a> {
    #[serde(flatten)]
    report: &'a BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluated: Option<Evaluation>,
}

fn generalized_for(seq: &LsSequence) -> Result<BoundReport, Failure> {
    let counts = seq.counts();
    Ok(generalized_bound(seq.spectral(), |n| counts.t_u64(n))?)
}

fn classical_for(params: &Params) -> Result<BoundReport, Failure> {
    match params.coeffs() {
        &[l, s] => Ok(classical_bound(l, s)?),
        _ => Err(Failure::Invalid(Error::InvalidClassicalParams(format!(
            "classical bounds need exactly two parameters, got {params}"
        )))),
    }
}

fn bound(args: BoundArgs, out: &mut dyn Write) -> Outcome {
    let seq = sequence(&args.params)?;
    let report = match args.kind {
        Kind::Generalized => generalized_for(&seq)?,
        Kind::Classical => classical_for(seq.params())?,
    };
    let evaluated = match args.n {
        Some(0) => return Err(Failure::Usage("--n must be positive".into())),
        Some(n) => Some(Evaluation { n, value: report.value_at(n), certified: report.certified(n) }),
        None => None,
    };
    write_json(out, &BoundOutput { report: &report, evaluated })
}

/// A log-spaced grid over `[2, max]` together with every `t_n` in range.
fn verify_grid(counts: &CountsTable, max: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = (0..VERIFY_GRID)
        .map(|i| {
            let x = (max as f64 / 2.0).ln() * i as f64 / (VERIFY_GRID - 1) as f64;
            ((2.0 * x.exp()).round() as u64).clamp(2, max)
        })
        .collect();
    grid.extend((0..counts.fast_levels()).filter_map(|n| counts.t_u64(n)).filter(|t| (2..=max).contains(t)));
    grid.push(max);
    grid.sort_unstable();
    grid.dedup();
    grid
}

fn merge_sorted(sorted: &mut Vec<f64>, mut fresh: Vec<f64>) {
    fresh.sort_unstable_by(f64::total_cmp);
    let old = std::mem::take(sorted);
    sorted.reserve(old.len() + fresh.len());
    let (mut i, mut j) = (0, 0);
    while i < old.len() && j < fresh.len() {
        if old[i] <= fresh[j] {
            sorted.push(old[i]);
            i += 1;
        } else {
            sorted.push(fresh[j]);
            j += 1;
        }
    }
    sorted.extend_from_slice(&old[i..]);
    sorted.extend_from_slice(&fresh[j..]);
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Outcome {
    if !(2..=VERIFY_LIMIT).contains(&args.max_n) {
        return Err(Failure::Usage(format!("--max-n must lie in [2, {VERIFY_LIMIT}]")));
    }
    let seq = sequence(&args.params)?;
    let bound = generalized_for(&seq)?;
    let classical = match seq.params().coeffs() {
        &[l, s] if l >= s => Some(classical_bound(l, s)?),
        _ => None,
    };
    let values = seq.values(1, args.max_n + 1);
    if !args.no_header {
        writeln!(out, "N,D_star,D,bound,ratio").map_err(io_err)?;
    }
    let mut sorted = Vec::new();
    let mut violations = Vec::new();
    for n in verify_grid(seq.counts(), args.max_n) {
        let fresh = values[sorted.len()..n as usize].to_vec();
        merge_sorted(&mut sorted, fresh);
        let DiscrepancyReport { star, extreme, .. } = report_sorted(&sorted)?;
        let b = bound.value_at(n);
        writeln!(out, "{n},{},{},{},{}", real(star), real(extreme), real(b), real(extreme / b)).map_err(io_err)?;
        if bound.certified(n) && extreme > b {
            violations.push(format!("N={n}: D={} > generalized bound {}", real(extreme), real(b)));
        }
        if let Some(cb) = &classical {
            if extreme > cb.value_at(n) {
                violations.push(format!("N={n}: D={} > classical bound {}", real(extreme), real(cb.value_at(n))));
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(violations.join("; ")))
    }
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Function::X2 => "x2",
            Function::Exp => "exp",
            Function::Cos2pi => "cos2pi",
        }
    }

    fn eval(self, x: f64) -> f64 {
        match self {
            Function::X2 => x * x,
            Function::Exp => x.exp(),
            Function::Cos2pi => (2.0 * PI * x).cos(),
        }
    }

    fn integral(self) -> f64 {
        match self {
            Function::X2 => 1.0 / 3.0,
            Function::Exp => E - 1.0,
            Function::Cos2pi => 0.0,
        }
    }

    /// Total variation on `[0,1]`.
    fn variation(self) -> f64 {
        match self {
            Function::X2 => 1.0,
            Function::Exp => E - 1.0,
            Function::Cos2pi => 4.0,
        }
    }
}

#[derive(Serialize)]
struct Integration {
    function: &'static str,
    count: u64,
    estimate: f64,
    reference: f64,
    abs_error: f64,
    star_disc: f64,
    variation: f64,
    koksma_bound_ok: bool,
}

fn integrate(args: IntegrateArgs, out: &mut dyn Write) -> Outcome {
    if args.count == 0 {
        return Err(Failure::Usage("--count must be positive".into()));
    }
    let seq = sequence(&args.params)?;
    let values = seq.values(1, args.count + 1);
    let f = args.function;
    let estimate = values.iter().map(|&x| f.eval(x)).sum::<f64>() / args.count as f64;
    let star_disc = report(&values)?.star;
    let abs_error = (estimate - f.integral()).abs();
    write_json(
        out,
        &Integration {
            function: f.name(),
            count: args.count,
            estimate,
            reference: f.integral(),
            abs_error,
            star_disc,
            variation: f.variation(),
            koksma_bound_ok: abs_error <= f.variation() * star_disc,
        },
    )
}
