use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cu_sketch_lab::seed::DEFAULT_SEED;
use cu_sketch_lab::{Error, Strategy, StreamModel};

mod commands;

/// Count-Min and conservative-update counter processes on random hash
/// hypergraphs: generators, single runs and replicated experiments.
#[derive(Debug, Parser)]
#[command(name = "cu-sketch-lab", version, about)]
struct Cli {
    /// Worker threads for parallel experiments (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a hypergraph and write it as an edge list.
    Gen(GenArgs),
    /// Peel a hypergraph and report vertex levels and the core.
    Peel(PeelArgs),
    /// Run one counter process and report per-edge errors.
    Run(RunArgs),
    /// Replicated error sweep over edge densities.
    Sweep(SweepArgs),
    /// Per-edge error distribution of one instance.
    Dist(DistArgs),
    /// Error sweep under Zipf input for several skewness values.
    Zipf(ZipfArgs),
    /// Dual complete hypergraph against its limiting error.
    Dual(DualArgs),
    /// Error on random 2-regular 3-uniform hypergraphs.
    Regular(RegularArgs),
    /// Feed a key file through a counting sketch and report estimates.
    Sketch(SketchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Balanced,
    Uniform,
    Zipf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Cm,
    Cu,
    Both,
}

impl StrategyArg {
    fn all(self) -> Vec<Strategy> {
        match self {
            StrategyArg::Cm => vec![Strategy::Cm],
            StrategyArg::Cu => vec![Strategy::Cu],
            StrategyArg::Both => Strategy::BOTH.to_vec(),
        }
    }

    fn single(self) -> Result<Strategy, Error> {
        match self {
            StrategyArg::Cm => Ok(Strategy::Cm),
            StrategyArg::Cu => Ok(Strategy::Cu),
            StrategyArg::Both => Err(Error::InvalidParameter(
                "--strategy both is not available for this command".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file, written atomically.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Root seed for every random choice.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct StreamArgs {
    /// Multiplicity N: the stream has N·m keys.
    #[arg(long = "N", default_value_t = 10_000)]
    multiplicity: u64,
    #[arg(long, value_enum, default_value_t = Model::Uniform)]
    model: Model,
    /// Zipf skewness; requires --model zipf.
    #[arg(long)]
    beta: Option<f64>,
}

impl StreamArgs {
    fn model(&self) -> Result<StreamModel, Error> {
        match (self.model, self.beta) {
            (Model::Zipf, Some(beta)) => Ok(StreamModel::Zipf { beta }),
            (Model::Zipf, None) => Err(Error::InvalidParameter("--model zipf needs --beta".into())),
            (_, Some(_)) => Err(Error::InvalidParameter(
                "--beta requires --model zipf".into(),
            )),
            (Model::Balanced, None) => Ok(StreamModel::Balanced),
            (Model::Uniform, None) => Ok(StreamModel::Uniform),
        }
    }
}

#[derive(Debug, Args)]
struct RandomGraphArgs {
    /// Edge order.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Number of vertices (counters).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Edge density m/n.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    /// Uniform random k-uniform hypergraph with m = λn edges.
    Random,
    /// Dual of the complete graph K_n (uses --r).
    Dual,
    /// 2-regular 3-uniform hypergraph on 3t vertices.
    Regular,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GraphKind::Random)]
    kind: GraphKind,
    #[command(flatten)]
    graph: RandomGraphArgs,
    /// Edge order of the complete hypergraph dualized by --kind dual.
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Size parameter for --kind regular.
    #[arg(long)]
    t: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PeelArgs {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated vertex ids that are never peeled.
    #[arg(long, value_delimiter = ',')]
    marked: Vec<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Edge-list file; when absent a random hypergraph is generated.
    #[arg(long, conflicts_with = "lambda")]
    input: Option<PathBuf>,
    #[command(flatten)]
    graph: RandomGraphArgs,
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Cu)]
    strategy: StrategyArg,
    /// Verify the process invariants after every step.
    #[arg(long)]
    check_invariants: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Single edge density.
    #[arg(long, conflicts_with = "lambda_grid")]
    lambda: Option<f64>,
    /// Inclusive grid a:b:step of edge densities.
    #[arg(long)]
    lambda_grid: Option<String>,
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 15)]
    replicates: usize,
    #[arg(long)]
    check_invariants: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct DistArgs {
    #[command(flatten)]
    graph: RandomGraphArgs,
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Cu)]
    strategy: StrategyArg,
    /// Histogram bin width on R_e.
    #[arg(long, default_value_t = cu_sketch_lab::experiments::DEFAULT_BIN_WIDTH)]
    bin_width: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ZipfArgs {
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, conflicts_with = "lambda_grid")]
    lambda: Option<f64>,
    #[arg(long)]
    lambda_grid: Option<String>,
    /// Comma-separated skewness values.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,0.9")]
    betas: Vec<f64>,
    #[arg(long = "N", default_value_t = 10_000)]
    multiplicity: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 15)]
    replicates: usize,
    #[arg(long)]
    check_invariants: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct DualArgs {
    /// Vertices of the complete graph whose dual is run.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Edge order of the complete hypergraph (2 for K'_n).
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Cu)]
    strategy: StrategyArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RegularArgs {
    /// Size parameter: 3t vertices, 2t edges.
    #[arg(long, default_value_t = 200)]
    t: usize,
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Cu)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 10)]
    replicates: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SketchArgs {
    /// Key file, one unsigned integer per line.
    #[arg(long)]
    input: PathBuf,
    /// Counters in the shared array; defaults to the (epsilon, delta) sizing.
    #[arg(long)]
    width: Option<usize>,
    /// Hash functions per key; defaults to the (epsilon, delta) sizing.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Cu)]
    strategy: StrategyArg,
    /// Also write the serialized sketch to this path.
    #[arg(long)]
    save: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result =
        cu_sketch_lab::experiments::with_jobs(cli.jobs, || commands::dispatch(cli.command))
            .and_then(|r| r);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_invariant_violation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
