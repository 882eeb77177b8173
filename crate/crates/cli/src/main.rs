use std::path::PathBuf;
use std::process::ExitCode;

use acmin::cluster::{AcminParams, InitStrategy};
use acmin::oracle::{DEFAULT_MAX_LEN, DENSE_MAX_N};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

mod commands;
mod convert;

/// Attributed graph clustering by multi-hop conductance minimization
#[derive(Parser)]
#[command(name = "acmin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a LINQS-style citation dataset (.content + .cites) to TSV files
    Convert(ConvertArgs),
    /// Cluster a graph and write node<TAB>cluster plus a JSON run report
    Cluster(ClusterArgs),
    /// Score an assignment against labels and/or the graph
    Eval(EvalArgs),
    /// Dense and brute-force reference computations
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Args)]
struct ConvertArgs {
    /// Lines of "<id> <attr weights...> <label>"
    #[arg(long)]
    content: PathBuf,
    /// Lines of "<cited id> <citing id>"
    #[arg(long)]
    cites: PathBuf,
    /// Output prefix; writes <prefix>.edges, .attrs, .labels and .ids
    #[arg(long)]
    out_prefix: PathBuf,
    /// Add the reverse of every citation
    #[arg(long)]
    symmetrize: bool,
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Edge file (src<TAB>dst)
    #[arg(long)]
    graph: PathBuf,
    /// Attribute file (node<TAB>attr[<TAB>weight])
    #[arg(long)]
    attrs: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct WalkArgs {
    #[arg(long, default_value_t = AcminParams::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = AcminParams::DEFAULT_BETA)]
    beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Acmin,
    Usc,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long, required_unless_present = "replay")]
    graph: Option<PathBuf>,
    #[arg(long)]
    attrs: Option<PathBuf>,
    #[arg(short = 'k', long = "clusters", required_unless_present = "replay")]
    k: Option<usize>,
    #[arg(long, default_value_t = AcminParams::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = AcminParams::DEFAULT_BETA)]
    beta: f64,
    /// Maximum orthogonal iterations
    #[arg(long, default_value_t = AcminParams::DEFAULT_MAX_ITERATIONS)]
    te: usize,
    /// Maximum rounding (or k-means) sweeps
    #[arg(long, default_value_t = AcminParams::DEFAULT_ROUNDING_ITERATIONS)]
    tm: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Acmin)]
    method: Method,
    /// Starting assignment for acmin
    #[arg(long, value_enum, default_value_t = InitArg::Greedy)]
    init: InitArg,
    /// Node cap for dense matrices (usc)
    #[arg(long, default_value_t = DENSE_MAX_N)]
    max_dense_n: usize,
    /// Assignment output (node<TAB>cluster)
    #[arg(short, long)]
    out: PathBuf,
    /// Run report output; defaults to <out>.json
    #[arg(long)]
    report: Option<PathBuf>,
    /// Re-run with the configuration recorded in an earlier run report
    #[arg(long)]
    replay: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
    Greedy,
    Random,
}

impl From<InitArg> for InitStrategy {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Greedy => InitStrategy::Greedy,
            InitArg::Random => InitStrategy::Random,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Assignment to score (node<TAB>cluster)
    #[arg(long)]
    pred: PathBuf,
    /// Ground truth (node<TAB>label)
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    attrs: Option<PathBuf>,
    /// Comma-separated subset of ca,nmi,modularity,aamc. Defaults to every
    /// metric whose inputs were given.
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<Metric>>,
    #[command(flatten)]
    walk: WalkArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Ca,
    Nmi,
    Modularity,
    Aamc,
}

#[derive(Subcommand)]
enum OracleAction {
    /// Dense truncated stopping-probability matrix
    DenseS {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// Truncation depth; defaults to ceil(1/alpha)
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = DENSE_MAX_N)]
        max_dense_n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo stop counts of attributed random walks from one node
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        source: usize,
        #[arg(long, default_value_t = 1_000_000)]
        walks: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive minimum of the conductance objective over k-partitions
    BruteForce {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(short = 'k', long = "clusters")]
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert(args) => convert::run(&args),
        Command::Cluster(args) => commands::cluster(&args),
        Command::Eval(args) => commands::eval(&args),
        Command::Oracle { action } => commands::oracle(&action),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
