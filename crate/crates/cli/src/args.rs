use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tightwalk", version, about = "Random walks, fractional matchings and tight Hamilton cycles in Dirac hypergraphs")]
pub struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file with default parameters; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Complete,
    Binomial,
    Dirac,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    MatchingAverage,
    MaxMin,
    MinNormality,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    SelfAvoiding,
    Simple,
    Stationary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    TightHc,
    EllCycles,
    Pm,
    Connected,
}

/// Where the graph comes from: a file, or a generator spec.
#[derive(Args, Debug, Clone)]
pub struct GraphSource {
    /// Graph file (`n k` header, one edge per line).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub spec: GeneratorSpec,
}

#[derive(Args, Debug, Clone)]
pub struct GeneratorSpec {
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Dirac parameter of the dirac generator.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Edge probability (binomial), or initial edge probability (dirac).
    #[arg(long)]
    pub p: Option<f64>,
    /// Generator seed.
    #[arg(long = "graph-seed")]
    pub graph_seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct WeightSource {
    /// Weight file written by `pfm`.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Weighting construction used when no weight file is given.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph and write it to a file.
    Generate {
        #[command(flatten)]
        spec: GeneratorSpec,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Order, edge count, minimum codegree and content hash.
    Info {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Build a perfect fractional matching.
    Pfm {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one seeded walk.
    Walk {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        weights: WeightSource,
        #[arg(long, value_enum, default_value_t = Mode::SelfAvoiding)]
        mode: Mode,
        /// Start tuple, comma separated (default: the first k-1 vertices).
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stationary distribution of the tuple chain and its vertex marginal.
    Stationary {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        weights: WeightSource,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Distance to stationarity of the simple walk, per step.
    Mix {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        weights: WeightSource,
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 50)]
        q_max: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Empirical goodness rate of self-avoiding walks.
    Goodness {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        weights: WeightSource,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Bin width of the error histogram.
        #[arg(long, default_value_t = 0.25)]
        bin_width: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Grow a long tight path and close it into a Hamilton cycle.
    Grow {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        weights: WeightSource,
        /// Segment lengths, comma separated (default: round(√n_i)).
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        clip_schedule: bool,
        /// Dirac parameter used by the audit (default: measured).
        #[arg(long = "host-gamma")]
        host_gamma: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        retries: Option<usize>,
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 0.0)]
        reserve_fraction: f64,
        /// Number of independent samples; more than one reports collisions.
        #[arg(long, default_value_t = 1)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the distinct cycles, one vertex ordering per line.
        #[arg(long)]
        cycles: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Complete a tight path into a tight Hamilton cycle.
    Complete {
        #[command(flatten)]
        source: GraphSource,
        /// Path vertices, comma separated.
        #[arg(long)]
        path: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact counts by exhaustive search.
    Count {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum, default_value_t = Target::TightHc)]
        target: Target,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Single-segment lower-bound ledger.
    Ledger {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        weights: WeightSource,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// How often random unions of parts induce a γ/2-Dirac graph.
    Probe {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = 1)]
        part: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long = "host-gamma")]
        host_gamma: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance battery and print a pass/fail summary.
    Suite {
        /// Smaller instances and fewer samples.
        #[arg(long)]
        quick: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}
