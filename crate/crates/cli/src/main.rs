mod args;
mod config;
mod error;
mod report;
mod suite;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::json;

use args::{Cli, Command, Format, GeneratorSpec, GraphSource, Kind, Method, Mode, Target, WeightSource};
use config::{pick, FileConfig};
use error::CliError;
use report::{emit, Report};
use tightwalk::cycles::{
    complete_to_cycle, count_hamilton_ell_cycles, count_tight_hamilton_cycles, grow_long_path,
    is_tight_hamilton_connected, lower_bound_ledger, sample_hamilton_cycles, subset_dirac_probe,
    GrowConfig, WeightPolicy,
};
use tightwalk::goodness::{default_threshold, error_histogram_csv, goodness_rate};
use tightwalk::hypergraph::{generate, DiracParams, GraphKind};
use tightwalk::matching::{
    matching_average_weighting, optimize_weighting, AverageOptions, EdgeWeighting, Objective,
};
use tightwalk::walk::{
    mixing_csv, mixing_curve, run_walk, stationarity_residual, stationary_distribution,
    vertex_marginal, Distribution, WalkConfig, WalkMode, WalkStart,
};
use tightwalk::{KGraph, OrderedTuple, TightPath, Vertex, DEFAULT_NODE_BUDGET};

struct Ctx {
    file: FileConfig,
    format: Format,
}

impl Ctx {
    fn budget(&self, flag: Option<u64>) -> Result<u64, CliError> {
        self.file.node_budget(flag, DEFAULT_NODE_BUDGET)
    }

    /// The given seed, the configured one, or a fresh one announced on stderr.
    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.file.seed).unwrap_or_else(|| {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            s
        })
    }

    fn method(&self, flag: Option<Method>) -> Result<Method, CliError> {
        if let Some(m) = flag {
            return Ok(m);
        }
        match &self.file.method {
            Some(s) => Method::from_str(s, true).map_err(|_| CliError::Usage(format!("unknown method {s:?}"))),
            None => Ok(Method::MatchingAverage),
        }
    }

    fn json_only(&self, command: &str) -> Result<(), CliError> {
        if self.format == Format::Csv {
            return Err(CliError::Usage(format!("{command} has no csv output")));
        }
        Ok(())
    }
}

fn generator_kind(spec: &GeneratorSpec) -> Result<GraphKind, CliError> {
    let kind = spec
        .kind
        .ok_or_else(|| CliError::Usage("a generator needs --kind".into()))?;
    Ok(match kind {
        Kind::Complete => GraphKind::Complete,
        Kind::Binomial => GraphKind::Binomial {
            p: spec
                .p
                .ok_or_else(|| CliError::Usage("--kind binomial needs --p".into()))?,
        },
        Kind::Dirac => {
            let mut params = DiracParams::new(
                spec.gamma
                    .ok_or_else(|| CliError::Usage("--kind dirac needs --gamma".into()))?,
            );
            params.edge_prob = spec.p;
            GraphKind::Dirac(params)
        }
    })
}

fn generate_from(spec: &GeneratorSpec, seed: u64) -> Result<tightwalk::hypergraph::Generated, CliError> {
    let kind = generator_kind(spec)?;
    let n = spec.n.ok_or_else(|| CliError::Usage("a generator needs --n".into()))?;
    let k = spec.k.ok_or_else(|| CliError::Usage("a generator needs --k".into()))?;
    Ok(generate(&kind, n, k, seed)?)
}

fn load_graph(ctx: &Ctx, source: &GraphSource) -> Result<KGraph, CliError> {
    match (&source.graph, source.spec.kind) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --graph or a generator spec, not both".into())),
        (None, None) => Err(CliError::Usage("no graph: give --graph FILE or --kind with --n and --k".into())),
        (Some(path), None) => Ok(KGraph::read(path)?),
        (None, Some(_)) => {
            let seed = source.spec.graph_seed.unwrap_or_else(|| ctx.seed(None));
            Ok(generate_from(&source.spec, seed)?.graph)
        }
    }
}

fn build_weighting(g: &KGraph, method: Method, budget: u64) -> Result<EdgeWeighting, CliError> {
    Ok(match method {
        Method::MatchingAverage => matching_average_weighting(
            g,
            AverageOptions {
                budget,
                ..AverageOptions::default()
            },
        )?,
        Method::MaxMin => optimize_weighting(g, Objective::MaxMinWeight)?,
        Method::MinNormality => optimize_weighting(g, Objective::MinNormality)?,
        Method::Uniform => EdgeWeighting::uniform(g, 1.0)?,
    })
}

fn load_weights(ctx: &Ctx, g: &KGraph, src: &WeightSource) -> Result<EdgeWeighting, CliError> {
    match &src.weights {
        Some(path) => Ok(EdgeWeighting::read(g, path)?),
        None => build_weighting(g, ctx.method(src.method)?, ctx.budget(None)?),
    }
}

fn parse_vertices(text: &str) -> Result<Vec<Vertex>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<Vertex>()
                .map_err(|_| CliError::Usage(format!("bad vertex {t:?}")))
        })
        .collect()
}

fn start_tuple(g: &KGraph, text: Option<&str>) -> Result<OrderedTuple, CliError> {
    let vertices = match text {
        Some(t) => parse_vertices(t)?,
        None => g.vertices().take(g.k() - 1).collect(),
    };
    Ok(OrderedTuple::for_graph(g, vertices)?)
}

fn json_report<T: Serialize>(
    command: &str,
    seed: Option<u64>,
    g: Option<&KGraph>,
    result: T,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let r = Report::new(command, seed, g.map(|g| g.content_hash()), result);
    emit(&r.to_json()?, output)
}

fn tuple_rows(d: &Distribution) -> serde_json::Value {
    match d {
        Distribution::Tuples(m) => m
            .iter()
            .map(|(t, p)| json!({ "tuple": t, "p": p }))
            .collect(),
        Distribution::Vertices(m) => m
            .iter()
            .map(|(v, p)| json!({ "vertex": v, "p": p }))
            .collect(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let threads = cli.threads.or(file.threads);
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?;
    }
    let ctx = Ctx {
        file,
        format: cli.format,
    };
    match cli.command {
        Command::Generate { spec, seed, output } => {
            ctx.json_only("generate")?;
            let seed = ctx.seed(seed.or(spec.graph_seed));
            let out = generate_from(&spec, seed)?;
            out.graph.write(&output)?;
            let g = &out.graph;
            json_report(
                "generate",
                Some(seed),
                Some(g),
                json!({
                    "path": output.display().to_string(),
                    "n": g.order(),
                    "k": g.k(),
                    "edges": g.edge_count(),
                    "min_codegree": g.min_codegree().value,
                    "repairs": out.repairs,
                    "samples_drawn": out.samples_drawn,
                }),
                None,
            )
        }
        Command::Info { source } => {
            ctx.json_only("info")?;
            let g = load_graph(&ctx, &source)?;
            let mc = g.min_codegree();
            json_report(
                "info",
                None,
                Some(&g),
                json!({
                    "n": g.order(),
                    "k": g.k(),
                    "edges": g.edge_count(),
                    "min_codegree": mc.value,
                    "min_codegree_witness": mc.witness,
                    "measured_gamma": g.measured_gamma(),
                }),
                None,
            )
        }
        Command::Pfm { source, method, output } => {
            ctx.json_only("pfm")?;
            let g = load_graph(&ctx, &source)?;
            let method = ctx.method(method)?;
            let x = build_weighting(&g, method, ctx.budget(None)?)?;
            if let Some(path) = &output {
                x.write(&g, path)?;
            }
            json_report(
                "pfm",
                None,
                Some(&g),
                json!({
                    "method": method.to_possible_value().map(|v| v.get_name().to_string()),
                    "exact": x.is_exact(),
                    "min_weight": x.min_weight(),
                    "max_weight": x.max_weight(),
                    "profile": x.profile(),
                }),
                None,
            )
        }
        Command::Walk { source, weights, mode, start, length, seed, output } => {
            ctx.json_only("walk")?;
            let g = load_graph(&ctx, &source)?;
            let x = load_weights(&ctx, &g, &weights)?;
            let seed = ctx.seed(seed);
            let length = pick(length, ctx.file.kappa, (g.order() as f64).sqrt().round() as usize);
            let mode = match mode {
                Mode::SelfAvoiding => WalkMode::SelfAvoiding,
                Mode::Simple => WalkMode::Simple,
                Mode::Stationary => WalkMode::Stationary,
            };
            let cfg = if mode == WalkMode::Stationary {
                if start.is_some() {
                    return Err(CliError::Usage("a stationary walk takes no --start".into()));
                }
                WalkConfig::stationary(length, seed)
            } else {
                WalkConfig {
                    mode,
                    start: Some(WalkStart::Tuple(start_tuple(&g, start.as_deref())?)),
                    length,
                    seed,
                }
            };
            let trace = run_walk(&g, &x, &cfg)?;
            json_report("walk", Some(seed), Some(&g), trace, output.as_deref())
        }
        Command::Stationary { source, weights, output } => {
            ctx.json_only("stationary")?;
            let g = load_graph(&ctx, &source)?;
            let x = load_weights(&ctx, &g, &weights)?;
            let pi = stationary_distribution(&g, &x)?;
            let residual = stationarity_residual(&g, &x, &pi)?;
            let marginal = vertex_marginal(&g, &x)?;
            let n = g.order() as f64;
            let deviation = g
                .vertices()
                .map(|v| (marginal.vertex_prob(v) - 1.0 / n).abs())
                .fold(0.0, f64::max);
            json_report(
                "stationary",
                None,
                Some(&g),
                json!({
                    "residual_l1": residual,
                    "marginal_max_deviation": deviation,
                    "marginal": tuple_rows(&marginal),
                    "stationary": tuple_rows(&pi),
                }),
                output.as_deref(),
            )
        }
        Command::Mix { source, weights, start, q_max, output } => {
            let g = load_graph(&ctx, &source)?;
            let x = load_weights(&ctx, &g, &weights)?;
            let curve = mixing_curve(&g, &x, &start_tuple(&g, start.as_deref())?, q_max)?;
            match ctx.format {
                Format::Csv => emit(&mixing_csv(&curve), output.as_deref()),
                Format::Json => json_report("mix", None, Some(&g), curve, output.as_deref()),
            }
        }
        Command::Goodness { source, weights, start, kappa, samples, theta, seed, bin_width, output } => {
            let g = load_graph(&ctx, &source)?;
            let x = load_weights(&ctx, &g, &weights)?;
            let seed = ctx.seed(seed);
            let n = g.order();
            let kappa = pick(kappa, ctx.file.kappa, (n as f64).sqrt().round() as usize);
            let samples = pick(samples, ctx.file.samples, 1000);
            let theta = pick(theta, ctx.file.theta, default_threshold(n));
            let start = start_tuple(&g, start.as_deref())?;
            let rate = goodness_rate(&g, &x, &start, kappa, samples, theta, seed)?;
            match ctx.format {
                Format::Csv => emit(&error_histogram_csv(&rate.max_errors, bin_width), output.as_deref()),
                Format::Json => json_report(
                    "goodness",
                    Some(seed),
                    Some(&g),
                    json!({ "kappa": kappa, "threshold": theta, "start": start, "rate": rate }),
                    output.as_deref(),
                ),
            }
        }
        Command::Grow {
            source,
            weights,
            schedule,
            clip_schedule,
            host_gamma,
            theta,
            retries,
            strict,
            reserve_fraction,
            samples,
            seed,
            cycles,
            output,
        } => {
            let g = load_graph(&ctx, &source)?;
            let seed = ctx.seed(seed);
            let policy = match (&weights.weights, ctx.method(weights.method)?) {
                (Some(path), _) => WeightPolicy::Provided(EdgeWeighting::read(&g, path)?),
                (None, Method::MatchingAverage) => WeightPolicy::MatchingAverage,
                (None, Method::MaxMin) => WeightPolicy::Optimize(Objective::MaxMinWeight),
                (None, Method::MinNormality) => WeightPolicy::Optimize(Objective::MinNormality),
                (None, Method::Uniform) => WeightPolicy::Provided(EdgeWeighting::uniform(&g, 1.0)?),
            };
            let schedule = match schedule {
                Some(s) => Some(
                    parse_vertices(&s)?
                        .into_iter()
                        .map(|v| v as usize)
                        .collect::<Vec<_>>(),
                ),
                None => None,
            };
            let cfg = GrowConfig {
                policy,
                schedule,
                clip_schedule,
                gamma: host_gamma.or(ctx.file.gamma),
                threshold: theta.or(ctx.file.theta),
                retries: pick(retries, ctx.file.retries, 20),
                strict_mode: strict || ctx.file.strict_mode.unwrap_or(false),
                start: None,
                reserve_fraction,
                budget: ctx.budget(None)?,
            };
            if samples > 1 {
                let summary = sample_hamilton_cycles(&g, samples, seed, &cfg);
                if let Some(path) = &cycles {
                    let lines: String = summary.distinct.iter().map(|c| c.to_line() + "\n").collect();
                    std::fs::write(path, lines)?;
                }
                return match ctx.format {
                    Format::Csv => Err(CliError::Usage("grow --samples has no csv output".into())),
                    Format::Json => json_report("grow", Some(seed), Some(&g), summary, output.as_deref()),
                };
            }
            let grown = grow_long_path(&g, &cfg, seed)?;
            if ctx.format == Format::Csv {
                return emit(&grown.ledger.segments_csv(), output.as_deref());
            }
            let cycle = complete_to_cycle(&g, &grown.path, cfg.budget);
            if let (Some(path), Ok(c)) = (&cycles, &cycle) {
                std::fs::write(path, c.to_line() + "\n")?;
            }
            let (cycle, completion_error) = match cycle {
                Ok(c) => (Some(c), None),
                Err(e) => (None, Some(e.to_string())),
            };
            json_report(
                "grow",
                Some(seed),
                Some(&g),
                json!({ "growth": grown, "cycle": cycle, "completion_error": completion_error }),
                output.as_deref(),
            )
        }
        Command::Complete { source, path, output } => {
            ctx.json_only("complete")?;
            let g = load_graph(&ctx, &source)?;
            let path = TightPath::new(&g, parse_vertices(&path)?)?;
            let cycle = complete_to_cycle(&g, &path, ctx.budget(None)?)?;
            json_report("complete", None, Some(&g), cycle, output.as_deref())
        }
        Command::Count { source, target, ell, budget, output } => {
            let g = load_graph(&ctx, &source)?;
            let budget = ctx.budget(budget)?;
            let (method, count, used) = match target {
                Target::TightHc => {
                    let c = count_tight_hamilton_cycles(&g, budget)?;
                    ("tight-hc".to_string(), c.distinct, c.nodes)
                }
                Target::EllCycles => {
                    let ell = ell.ok_or_else(|| CliError::Usage("--target ell-cycles needs --ell".into()))?;
                    let c = count_hamilton_ell_cycles(&g, ell, budget)?;
                    (format!("ell-cycles:{ell}"), c.distinct, c.nodes)
                }
                Target::Pm => {
                    let c = count_hamilton_ell_cycles(&g, 0, budget)?;
                    ("pm".to_string(), c.distinct, c.nodes)
                }
                Target::Connected => {
                    let r = is_tight_hamilton_connected(&g, budget)?;
                    ("tight-hamilton-connected".to_string(), u64::from(r.connected), r.pairs_checked)
                }
            };
            match ctx.format {
                Format::Csv => emit(
                    &format!("graph_hash,method,count,budget_used\n{},{method},{count},{used}\n", g.content_hash()),
                    output.as_deref(),
                ),
                Format::Json => {
                    #[derive(Serialize)]
                    struct CountReport {
                        graph_hash: String,
                        method: String,
                        count: u64,
                        budget_used: u64,
                    }
                    let r = CountReport {
                        graph_hash: g.content_hash(),
                        method,
                        count,
                        budget_used: used,
                    };
                    json_report("count", None, Some(&g), r, output.as_deref())
                }
            }
        }
        Command::Ledger { source, weights, start, kappa, samples, theta, seed, output } => {
            let g = load_graph(&ctx, &source)?;
            let x = load_weights(&ctx, &g, &weights)?;
            let seed = ctx.seed(seed);
            let n = g.order();
            let kappa = pick(kappa, ctx.file.kappa, (n as f64).sqrt().round() as usize);
            let samples = pick(samples, ctx.file.samples, 1000);
            let theta = pick(theta, ctx.file.theta, default_threshold(n));
            let start = start_tuple(&g, start.as_deref())?;
            let ledger = lower_bound_ledger(&g, &x, Some(&start), kappa, samples, theta, seed)?;
            match ctx.format {
                Format::Csv => emit(&ledger.segments_csv(), output.as_deref()),
                Format::Json => json_report("ledger", Some(seed), Some(&g), ledger, output.as_deref()),
            }
        }
        Command::Probe { source, part, t, m, trials, host_gamma, seed, output } => {
            ctx.json_only("probe")?;
            let g = load_graph(&ctx, &source)?;
            let seed = ctx.seed(seed);
            let r = subset_dirac_probe(&g, part, t, m, trials, seed, host_gamma.or(ctx.file.gamma))?;
            json_report("probe", Some(seed), Some(&g), r, output.as_deref())
        }
        Command::Suite { quick, output } => {
            ctx.json_only("suite")?;
            let rows = suite::run(quick);
            let failed: Vec<u32> = rows.iter().filter(|r| !r.pass).map(|r| r.id).collect();
            let passed = rows.len() - failed.len();
            if let Some(path) = &output {
                json_report("suite", None, None, &rows, Some(path))?;
            }
            println!("suite: {passed}/{} passed", rows.len());
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Domain(format!("criteria failed: {failed:?}")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
