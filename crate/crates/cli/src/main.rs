//! `distgrover`: run searches, verification suites and the algorithm
//! comparison table from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use distgrover::distsim::{bind_ledger, comparison_table};
use distgrover::oracle::load_oracle;
use distgrover::qsim::format_bits;
use distgrover::verify::{Scope, SuiteOptions};
use distgrover::{algorithms, BooleanOracle, PartitionConfig, SearchResult, Variant};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use output::{Format, RunArtifact, Shots};

/// Largest `n` accepted by `verify`; the end-to-end grid runs every `a` up to `2^n`.
const MAX_VERIFY_N: usize = 8;

#[derive(Parser)]
#[command(name = "distgrover", version, about = "Distributed exact Grover search simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one search and write the exact outcome distribution.
    Run(RunArgs),
    /// Run the operator, lemma and end-to-end verification suites.
    Verify(VerifyArgs),
    /// Print qubit, exactness and communication figures per algorithm.
    Compare(CompareArgs),
    /// Print the solution mass after every iteration.
    Trace(TraceArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// grover, long, dist or dist-exact.
    #[arg(long)]
    variant: Variant,
    /// Oracle file: `n=<int>` followed by one solution bit string per line,
    /// or `{"n": .., "solutions": [..]}`.
    #[arg(long)]
    oracle: PathBuf,
    /// Number of trailing input bits split across sub-oracle nodes.
    #[arg(long)]
    t: Option<usize>,
    /// Only accept `n > 4` and `1 < t < log2(n) - 1`, where every node is
    /// smaller than the undistributed register.
    #[arg(long)]
    node_size_constraint: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Also draw this many measurement shots from the exact distribution.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    scope: Scope,
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    /// Random oracles per partition in the operator grid.
    #[arg(long, default_value_t = 5)]
    oracles: usize,
    /// Sample points per lemma sweep.
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Corrupt one decomposed gate; the suite must then fail.
    #[arg(long, hide = true)]
    canary: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    /// Solution count used for the iteration counts in the communication column.
    #[arg(long, default_value_t = 1)]
    a: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Core(distgrover::Error),
    Usage(String),
    Output(PathBuf, std::io::Error),
    Verify { failed: usize, total: usize },
}

impl From<distgrover::Error> for Failure {
    fn from(e: distgrover::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verify { .. } => 1,
            Failure::Core(distgrover::Error::Capacity { .. }) => 3,
            Failure::Core(distgrover::Error::Leakage(_)) => 1,
            Failure::Core(_) | Failure::Usage(_) | Failure::Output(..) => 2,
        }
    }

    fn diagnostic(&self) -> String {
        let (kind, msg) = match self {
            Failure::Core(e) => (e.kind(), e.to_string()),
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Output(p, e) => ("io", format!("cannot write {}: {e}", p.display())),
            Failure::Verify { failed, total } => {
                ("verify", format!("{failed} of {total} checks failed"))
            }
        };
        format!("error[{kind}]: {}", msg.replace('\n', " "))
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), Failure> {
    output::emit(text, path.map(PathBuf::as_path))
        .map_err(|e| Failure::Output(path.cloned().unwrap_or_else(|| "<stdout>".into()), e))
}

fn partition(args: &SearchArgs, n: usize) -> Result<Option<PartitionConfig>, Failure> {
    match (args.variant.is_distributed(), args.t) {
        (true, None) => Err(Failure::Usage(format!(
            "variant {} needs --t",
            args.variant
        ))),
        (true, Some(t)) if args.node_size_constraint => {
            Ok(Some(PartitionConfig::with_node_size_constraint(n, t)?))
        }
        (true, Some(t)) => Ok(Some(PartitionConfig::new(n, t)?)),
        (false, Some(_)) => Err(Failure::Usage(format!(
            "--t only applies to distributed variants, not {}",
            args.variant
        ))),
        (false, None) => Ok(None),
    }
}

fn search(args: &SearchArgs) -> Result<(BooleanOracle, Option<PartitionConfig>, SearchResult), Failure> {
    let oracle = load_oracle(&args.oracle)?;
    let cfg = partition(args, oracle.n())?;
    let mut result = algorithms::run_search(args.variant, &oracle, cfg.as_ref())?;
    if let Some(cfg) = &cfg {
        result = bind_ledger(result, cfg)?;
    }
    Ok((oracle, cfg, result))
}

fn sample(result: &SearchResult, shots: u64, seed: u64) -> Result<Shots, Failure> {
    let dist = WeightedIndex::new(&result.distribution)
        .map_err(|e| Failure::Usage(format!("cannot sample distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..shots {
        let x = dist.sample(&mut rng);
        *counts.entry(format_bits(x, result.plan.n)).or_insert(0) += 1;
    }
    Ok(Shots { shots, seed, counts })
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let (oracle, cfg, result) = search(&args.search)?;
    let shots = args
        .shots
        .map(|s| sample(&result, s, args.seed))
        .transpose()?;
    let artifact = RunArtifact::new(result, &oracle, cfg.map(|c| c.t()), shots);
    let text = match args.format {
        Format::Json => output::json(&artifact),
        Format::Csv => artifact.to_csv(),
    };
    emit(&text, args.output.as_ref())?;
    if args.output.is_some() {
        print!("{}", artifact.summary());
    }
    Ok(())
}

fn cmd_trace(args: TraceArgs) -> Result<(), Failure> {
    let (_, _, result) = search(&args.search)?;
    let rows = output::trace_rows(&result);
    let text = match args.format {
        Format::Json => output::json(&rows),
        Format::Csv => output::trace_csv(&rows),
    };
    emit(&text, args.output.as_ref())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.max_n > MAX_VERIFY_N {
        return Err(distgrover::Error::Capacity {
            qubits: args.max_n,
            max: MAX_VERIFY_N,
        }
        .into());
    }
    if args.max_n < 2 {
        return Err(Failure::Usage("--max-n must be at least 2".into()));
    }
    let opts = SuiteOptions {
        max_n: args.max_n,
        oracles_per_config: args.oracles,
        points: args.points,
        seed: args.seed,
        fault: args.canary,
    };
    let report = args.scope.run(&opts)?;
    let text = match args.format {
        Format::Json => output::json(&report),
        Format::Csv => output::report_csv(&report),
    };
    emit(&text, args.output.as_ref())?;
    if report.all_passed {
        Ok(())
    } else {
        Err(Failure::Verify {
            failed: report.failed,
            total: report.checks.len(),
        })
    }
}

fn cmd_compare(args: CompareArgs) -> Result<(), Failure> {
    let cfg = PartitionConfig::new(args.n, args.t)?;
    let rows = comparison_table(&cfg, args.a)?;
    let text = match args.format {
        Format::Json => output::json(&rows),
        Format::Csv => output::comparison_csv(&rows),
    };
    emit(&text, args.output.as_ref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("{}", Failure::Usage(msg.to_string()).diagnostic());
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Trace(a) => cmd_trace(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.diagnostic());
            ExitCode::from(f.exit_code())
        }
    }
}
