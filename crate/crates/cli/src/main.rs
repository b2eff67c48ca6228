use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod format;

/// Generalized LS-sequences: generation, inspection and discrepancy certification.
#[derive(Debug, Parser)]
#[command(name = "lsseq", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parameter tuple utilities.
    #[command(subcommand)]
    Params(ParamsCommand),
    /// Points of the sequence as CSV or JSON.
    Gen(GenArgs),
    /// Digit expansion of an index.
    Digits(DigitsArgs),
    /// Interval counts t_n and l_{n,i} per level.
    Counts(CountsArgs),
    /// Intervals of the n-th refinement of [0,1).
    Partition(PartitionArgs),
    /// Star and extreme discrepancy of generated or supplied points.
    Disc(DiscArgs),
    /// Explicit discrepancy bound constants.
    Bound(BoundArgs),
    /// Checks measured discrepancy against the bound on a grid of N.
    Verify(VerifyArgs),
    /// Quasi-Monte Carlo estimate of a test integral.
    Integrate(IntegrateArgs),
}

#[derive(Debug, Subcommand)]
enum ParamsCommand {
    /// Validates a tuple and reports its roots.
    Check {
        /// Comma-separated L_1,...,L_k.
        params: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct GenArgs {
    params: String,
    #[arg(long)]
    count: u64,
    /// First index; the point with index 0 is 0.
    #[arg(long, default_value_t = 1)]
    start: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also print exact coefficients as `power:count` pairs.
    #[arg(long)]
    coeffs: bool,
    #[arg(long)]
    no_header: bool,
}

#[derive(Debug, Args)]
struct DigitsArgs {
    params: String,
    /// Index N (arbitrary precision).
    n: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct CountsArgs {
    params: String,
    /// Highest level to print.
    #[arg(long)]
    levels: usize,
    #[arg(long)]
    no_header: bool,
}

#[derive(Debug, Args)]
struct PartitionArgs {
    params: String,
    #[arg(long)]
    level: u32,
    /// Print only the left endpoints, one per line.
    #[arg(long)]
    endpoints: bool,
    #[arg(long)]
    no_header: bool,
}

#[derive(Debug, Args)]
struct DiscArgs {
    /// Needed with --count.
    params: Option<String>,
    #[arg(long, conflicts_with = "file", requires = "params")]
    count: Option<u64>,
    /// CSV or plain list of values; `-` reads stdin.
    #[arg(long, required_unless_present = "count")]
    file: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Classical,
    Generalized,
}

#[derive(Debug, Args)]
struct BoundArgs {
    params: String,
    #[arg(long, value_enum, default_value_t = Kind::Generalized)]
    kind: Kind,
    /// Evaluate the bound at this N.
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    params: String,
    #[arg(long, default_value_t = 100_000)]
    max_n: u64,
    #[arg(long)]
    no_header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    X2,
    Exp,
    Cos2pi,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    params: String,
    #[arg(long)]
    count: u64,
    #[arg(long, value_enum)]
    function: Function,
}

/// Failure classes, one per exit code.
#[derive(Debug)]
enum Failure {
    Invalid(lsseq::Error),
    Usage(String),
    Verification(String),
    Io(String, io::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) | Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Io(..) => 3,
        }
    }

    fn report(&self) {
        match self {
            Failure::Invalid(e) => eprintln!("error[{}]: {e}", e.kind()),
            Failure::Usage(msg) => eprintln!("error: {msg}"),
            Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            Failure::Io(what, e) => eprintln!("error: {what}: {e}"),
        }
    }
}

impl From<lsseq::Error> for Failure {
    fn from(e: lsseq::Error) -> Self {
        Failure::Invalid(e)
    }
}

type Outcome = Result<(), Failure>;

fn run(cli: Cli) -> Outcome {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Io(format!("cannot create {}", path.display()), e))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = commands::dispatch(cli.command, &mut out);
    let flushed = out.flush().map_err(|e| Failure::Io("cannot write output".into(), e));
    result.and(flushed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            failure.report();
            ExitCode::from(failure.exit_code())
        }
    }
}
