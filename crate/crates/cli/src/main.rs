mod output;
mod suites;

use std::ops::RangeInclusive;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use persym::census::{census, census_forced, cost_estimate, RankDistribution};
use persym::identities::Source;
use persym::Error;
use serde_json::json;

use output::{Format, OutputRecord, Report};

const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "persym",
    version,
    about = "Rank census and identity checks for n-times persymmetric matrices over GF(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count tuples of each rank by exhaustive enumeration.
    Census(CensusArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Worker threads.
    #[arg(long, env = "PERSYM_WORKERS", default_value_t = default_workers())]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Leave the timing field out so output is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Raise the enumeration ceiling from 2^28 to 2^34 tuples.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Moments,
    CensusVsFormula,
    Expsum,
    Rq,
    Fit,
    Typos,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Census,
    Closedform,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Census => Source::Census,
            SourceArg::Closedform => Source::ClosedForm,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Inclusive range `a..b` (or a single value).
    #[arg(long, value_parser = parse_range, default_value = "1..8")]
    n_range: RangeInclusive<usize>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    q: usize,
    /// Block count for the expsum suite.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_enum, default_value_t = SourceArg::Closedform)]
    source: SourceArg,
    #[command(flatten)]
    common: Common,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a..b or a single integer, got {s:?}");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        Error::Budget { .. } => ExitCode::from(EXIT_BUDGET),
        Error::Inconsistent(_) | Error::NonIntegral(_) => ExitCode::from(EXIT_VERIFY),
        _ => ExitCode::from(EXIT_USAGE),
    }
}

fn print_distribution(d: &RankDistribution, format: Format) {
    match format {
        Format::Json => unreachable!("handled by the record"),
        Format::Csv => {
            println!("i,gamma");
            for (i, c) in d.counts.iter().enumerate() {
                println!("{i},{c}");
            }
        }
        Format::Table => {
            let width = d
                .counts
                .iter()
                .map(|c| c.to_string().len())
                .max()
                .unwrap_or(1);
            println!("n = {}, k = {}", d.n, d.k);
            for (i, c) in d.counts.iter().enumerate() {
                println!("{i:>4}  {c:>width$}");
            }
        }
    }
}

fn run_census(args: &CensusArgs) -> ExitCode {
    let start = Instant::now();
    let workers = args.common.workers.max(1);
    let result = if args.force {
        census_forced(args.n, args.k, workers)
    } else {
        census(args.n, args.k, workers)
    };
    let d = match result {
        Ok(d) => d,
        Err(err @ Error::Budget { .. }) => {
            let (log2, leaves) = cost_estimate(args.n, args.k);
            let leaves = leaves.map_or_else(|| format!("2^{log2}"), |l| l.to_string());
            eprintln!("estimated cost: {leaves} tuples (2^{log2})");
            if !args.force {
                eprintln!("rerun with --force to raise the ceiling");
            }
            return fail(&err);
        }
        Err(err) => return fail(&err),
    };
    let record = OutputRecord {
        command: "census",
        params: json!({ "n": args.n, "k": args.k }),
        payload: json!({
            "n": d.n,
            "k": d.k,
            "gamma": d.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
        timing: (!args.common.no_timing).then(|| start.elapsed()),
    };
    match args.common.format {
        Format::Json => record.print_json(),
        f => {
            print_distribution(&d, f);
            record.log_timing();
        }
    }
    ExitCode::SUCCESS
}

fn run_suite(args: &VerifyArgs) -> persym::Result<Report> {
    let ns: Vec<usize> = args.n_range.clone().collect();
    let workers = args.common.workers.max(1);
    match args.suite {
        Suite::Moments => suites::moments(&ns, args.k, args.source.into()),
        Suite::CensusVsFormula => suites::census_vs_formula(&ns, args.k, workers),
        Suite::Expsum => suites::expsum(args.n, args.k),
        Suite::Rq => suites::rq(args.q, &ns, args.k, args.source.into(), workers),
        Suite::Fit => suites::fit(),
        Suite::Typos => suites::typos(),
    }
}

fn run_verify(args: &VerifyArgs) -> ExitCode {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.common.workers.max(1))
        .build()
        .expect("thread pool");
    let report = match pool.install(|| run_suite(args)) {
        Ok(r) => r,
        Err(err) => return fail(&err),
    };
    let suite = report.suite;
    let record = OutputRecord {
        command: "verify",
        params: json!({
            "suite": suite,
            "n_range": [args.n_range.start(), args.n_range.end()],
            "k": args.k,
            "q": args.q,
            "n": args.n,
            "source": Source::from(args.source).name(),
        }),
        payload: report.to_json(),
        timing: (!args.common.no_timing).then(|| start.elapsed()),
    };
    match args.common.format {
        Format::Json => record.print_json(),
        Format::Csv => {
            report.print_csv();
            record.log_timing();
        }
        Format::Table => {
            report.print_table();
            record.log_timing();
        }
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: {} != {}", c.name, c.lhs, c.rhs);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match &cli.command {
        Command::Census(args) => run_census(args),
        Command::Verify(args) => run_verify(args),
    }
}
