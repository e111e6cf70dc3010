//! Command-line front end. Exit codes: 0 decided, 1 internal error,
//! 2 resource limit, 3 bad input or usage.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use trimcolor::exact::parse_rational;
use trimcolor::graph::{load_dimacs, parse_lists, to_dimacs};
use trimcolor::harness::{
    self, bench, BenchConfig, ColorAlgorithm, ColorOptions, DecideAlgorithm, Family, ListAlgorithm, RunReport, BENCH_HEADER,
};
use trimcolor::oracle::OracleBudget;
use trimcolor::removal::{format_family, hard_instance, parse_family, SetFamily};
use trimcolor::{Error, Graph, Limits, Result};

#[derive(Parser)]
#[command(name = "trimcolor", version, about = "Exact graph coloring over trimmed subset lattices")]
struct Cli {
    /// Worker threads for the parallel sums.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Leave `wall_ms` out of reports so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide k-colorability.
    Decide {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "bhk")]
        algorithm: DecideAlgorithm,
        #[arg(long)]
        delta: Option<usize>,
        file: PathBuf,
    },
    /// Find a proper k-coloring.
    Color {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "bhk")]
        algorithm: ColorAlgorithm,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, value_parser = rational)]
        alpha: Option<BigRational>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_reps: Option<u64>,
        #[arg(long, value_parser = rational)]
        epsilon: Option<BigRational>,
        file: PathBuf,
    },
    /// Decide list colorability; lists are `v: c1 c2 ...` lines.
    Listcolor {
        /// Bound on list sizes; defaults to the largest list.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "backtracking")]
        algorithm: ListAlgorithm,
        #[arg(long)]
        delta: Option<usize>,
        graph: PathBuf,
        lists: PathBuf,
    },
    /// Apply the removal lemma to a set family and check its certificate.
    Removal {
        #[arg(long = "C", value_parser = rational)]
        c: BigRational,
        family: PathBuf,
    },
    /// Generate an instance.
    Gen(GenArgs),
    /// Benchmark matrix as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "cycle,gnp,bounded")]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_value = "bhk,trimmed,bounded")]
        algorithms: Vec<DecideAlgorithm>,
        /// Inclusive range `a..b` or a comma list.
        #[arg(long, default_value = "8..14", value_parser = sizes)]
        sizes: Sizes,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force references.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GenKind {
    /// `N P`: G(n, p).
    #[arg(long, num_args = 2, value_names = ["N", "P"])]
    gnp: Option<Vec<String>>,
    /// `N DELTA ALPHA`: dense core plus a low-degree fringe.
    #[arg(long, num_args = 3, value_names = ["N", "DELTA", "ALPHA"])]
    bounded: Option<Vec<String>>,
    /// Disjoint tree-path copies; needs --C, --delta and --n.
    #[arg(long)]
    hard_removal: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "C")]
    c: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum OracleCommand {
    Colorable {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    Chromatic {
        file: PathBuf,
    },
    Cover {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    Listcolor {
        graph: PathBuf,
        lists: PathBuf,
    },
    Removal {
        #[arg(long = "C", value_parser = rational)]
        c: BigRational,
        family: PathBuf,
    },
}

#[derive(Clone, Debug)]
struct Sizes(Vec<usize>);

fn sizes(s: &str) -> std::result::Result<Sizes, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| format!("invalid size range '{s}'"))?;
        let b: usize = b.trim().parse().map_err(|_| format!("invalid size range '{s}'"))?;
        return Ok(Sizes((a..=b).collect()));
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("invalid size '{t}'")))
        .collect::<std::result::Result<_, _>>()
        .map(Sizes)
}

fn rational(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("invalid rational '{s}'"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn graph(path: &Path) -> Result<Graph> {
    load_dimacs(&read(path)?)
}

fn family(path: &Path) -> Result<SetFamily> {
    parse_family(&read(path)?)
}

fn input<T: std::str::FromStr>(what: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Parse {
        line: 0,
        message: format!("invalid {what} '{raw}'"),
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn generate(args: &GenArgs) -> Result<String> {
    let kind = &args.kind;
    if let Some(v) = &kind.gnp {
        let n = input("vertex count", &v[0])?;
        let g = harness::gen_gnp(n, input("edge probability", &v[1])?, args.seed)?;
        return Ok(to_dimacs(&g));
    }
    if let Some(v) = &kind.bounded {
        let n = input("vertex count", &v[0])?;
        let delta = input("degree bound", &v[1])?;
        let alpha = parse_rational(&v[2]).ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("invalid fraction '{}'", v[2]),
        })?;
        return Ok(to_dimacs(&harness::gen_bounded(n, delta, &alpha, args.seed)?));
    }
    let missing = || Error::Contract("--hard-removal needs --C, --delta and --n".into());
    let f = hard_instance(args.c.ok_or_else(missing)?, args.delta.ok_or_else(missing)?, args.n.ok_or_else(missing)?)?;
    Ok(format_family(&f))
}

fn run(cli: &Cli) -> Result<()> {
    let limits = Limits::from_env();
    let budget = OracleBudget::default();
    let timing = !cli.no_timing;
    let report = |r: Result<RunReport>| -> Result<()> {
        let mut r = r?;
        r.command = std::env::args().skip(1).collect();
        emit(&cli.output, &r.to_json())
    };
    match &cli.command {
        Command::Decide { k, algorithm, delta, file } => {
            let g = graph(file)?;
            report(harness::timed(timing, || harness::decide(&g, *k, *algorithm, *delta, &limits)))
        }
        Command::Color {
            k,
            algorithm,
            delta,
            alpha,
            seed,
            max_reps,
            epsilon,
            file,
        } => {
            let g = graph(file)?;
            let opts = ColorOptions {
                delta: *delta,
                alpha: alpha.clone(),
                seed: *seed,
                max_reps: *max_reps,
                epsilon: epsilon.clone(),
            };
            report(harness::timed(timing, || harness::color(&g, *k, *algorithm, &opts, &limits)))
        }
        Command::Listcolor {
            k,
            algorithm,
            delta,
            graph: gp,
            lists,
        } => {
            let g = graph(gp)?;
            let l = parse_lists(&read(lists)?, g.n())?;
            report(harness::timed(timing, || harness::listcolor(&g, &l, *k, *algorithm, *delta, &limits)))
        }
        Command::Removal { c, family: path } => {
            let f = family(path)?;
            report(harness::timed(timing, || harness::removal(&f, c)))
        }
        Command::Gen(args) => emit(&cli.output, &generate(args)?),
        Command::Bench {
            families,
            algorithms,
            sizes,
            k,
            delta,
            seed,
        } => {
            let cfg = BenchConfig {
                families: families.clone(),
                algorithms: algorithms.clone(),
                sizes: sizes.0.clone(),
                k: *k,
                delta: *delta,
                seed: *seed,
            };
            let mut csv = format!("{BENCH_HEADER}\n");
            if cli.output.is_none() {
                println!("{BENCH_HEADER}");
            }
            bench(&cfg, &limits, |row| {
                let mut line = row.csv();
                if !timing {
                    line = harness::BenchRow { wall_ms: 0, ..row.clone() }.csv();
                }
                if cli.output.is_none() {
                    println!("{line}");
                }
                csv.push_str(&line);
                csv.push('\n');
                Ok(())
            })?;
            if cli.output.is_some() {
                emit(&cli.output, &csv)?;
            }
            Ok(())
        }
        Command::Oracle(cmd) => match cmd {
            OracleCommand::Colorable { k, file } => {
                let g = graph(file)?;
                report(harness::timed(timing, || harness::oracle_cmd::colorable(&g, *k, &budget)))
            }
            OracleCommand::Chromatic { file } => {
                let g = graph(file)?;
                report(harness::timed(timing, || harness::oracle_cmd::chromatic(&g, &budget)))
            }
            OracleCommand::Cover { k, file } => {
                let g = graph(file)?;
                report(harness::timed(timing, || harness::oracle_cmd::cover(&g, *k, &budget)))
            }
            OracleCommand::Listcolor { graph: gp, lists } => {
                let g = graph(gp)?;
                let l = parse_lists(&read(lists)?, g.n())?;
                report(harness::timed(timing, || harness::oracle_cmd::listcolor(&g, &l, &budget)))
            }
            OracleCommand::Removal { c, family: path } => {
                let f = family(path)?;
                report(harness::timed(timing, || harness::oracle_cmd::removal(&f, c)))
            }
        },
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) | Error::Budget(_) => 2,
        Error::Parse { .. } | Error::Contract(_) | Error::Io(_) => 3,
        Error::InternalContradiction(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("trimcolor: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trimcolor: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
