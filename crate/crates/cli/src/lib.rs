//! Command-line pipeline over the `topoaware` library.
//!
//! Every subcommand resolves its flags into a [`RunConfig`] first; the
//! config is written verbatim into the report so a run can be replayed
//! from its own output.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use topoaware::embed::{one_hot_features, propagate, synthetic_sbm, FeatureMatrix};
use topoaware::eval::{
    aggregate_distance, bound_report, format_acc_md, ordering_check, subgroup_accuracy, Aggregator,
    Labels, PredictionTable,
};
use topoaware::ingest::*;
use topoaware::metrics::{
    estimate_distortion, hop_embedding_profile, paired_distances_for_distortion,
    partition_by_distance, EmbeddingTable, PointToSet, ZeroDistancePolicy,
};
use topoaware::sampling::{
    baseline_select, coverage_sampling, kcenter_greedy, Baseline, StartPolicy,
};
use topoaware::verify::{run_all, Fault, VerifyConfig};
use topoaware::{ErrorKind, Graph, HopDistance, VertexId};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const COVERAGE: i32 = 4;
    pub const INVARIANT: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "topoaware",
    version,
    about = "Topology-awareness analysis for node embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Edge list, one `u v` pair per line.
    #[arg(long, global = true, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Seed (training) vertex tokens, one per line.
    #[arg(long, global = true, value_name = "PATH")]
    pub seeds: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
    /// Ground-truth label table.
    #[arg(long, global = true, value_name = "PATH")]
    pub labels: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub predictions: Option<PathBuf>,
    #[arg(long, global = true, conflicts_with = "fraction")]
    pub k: Option<usize>,
    /// Seed budget as a fraction of n; k = floor(fraction * n), at least 1.
    #[arg(long, global = true)]
    pub fraction: Option<f64>,
    #[arg(long, global = true, default_value_t = 5)]
    pub max_hop: u32,
    #[arg(long, global = true, value_enum, default_value_t = AggregatorArg::Max)]
    pub aggregator: AggregatorArg,
    #[arg(long, global = true, value_enum, default_value_t = PointToSetArg::Min)]
    pub point_to_set: PointToSetArg,
    /// Random number generator seed.
    #[arg(long = "seed", global = true)]
    pub rng_seed: Option<u64>,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Structured)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Count vertices per hop distance from the seed set.
    Partition,
    /// Estimate distortion between hop and embedding distances.
    Distortion {
        /// Drop pairs with identical embeddings instead of failing.
        #[arg(long)]
        exclude_zero: bool,
    },
    /// Select seed vertices.
    Sample {
        #[arg(long, value_enum, default_value_t = MethodArg::Kcenter)]
        method: MethodArg,
        /// highest-degree | random | vertex TOKEN
        #[arg(long, num_args = 1..=2, value_names = ["POLICY", "TOKEN"])]
        start: Vec<String>,
        /// Also write the chosen seeds as a seed file.
        #[arg(long, value_name = "PATH")]
        seeds_out: Option<PathBuf>,
    },
    /// Per-hop accuracy, discrepancy and, with embeddings, risk bounds.
    Evaluate {
        #[arg(long)]
        exclude_zero: bool,
        /// Constant multiplying alpha * distance in the reported bound.
        #[arg(long, default_value_t = 1.0)]
        bound_constant: f64,
    },
    /// Mean-aggregation propagation embeddings.
    Embed {
        #[arg(long, default_value_t = 2)]
        layers: usize,
        /// Feature table; one-hot when absent.
        #[arg(long, value_name = "PATH")]
        features: Option<PathBuf>,
    },
    /// Stochastic block model graph and block labels.
    Synth {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        p_in: f64,
        #[arg(long)]
        p_out: f64,
        #[arg(long, value_name = "PATH")]
        labels_out: Option<PathBuf>,
    },
    /// Run the built-in oracle suites.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregatorArg {
    Max,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointToSetArg {
    Min,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Structured,
    Tabular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Kcenter,
    Coverage,
    Random,
    Degree,
    Centrality,
    Pagerank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    Bfs,
    Kcenter,
    Distortion,
}

impl AggregatorArg {
    fn resolve(self) -> Aggregator {
        match self {
            AggregatorArg::Max => Aggregator::Max,
            AggregatorArg::Mean => Aggregator::Mean,
        }
    }
}

impl PointToSetArg {
    fn resolve(self) -> PointToSet {
        match self {
            PointToSetArg::Min => PointToSet::Min,
            PointToSetArg::Mean => PointToSet::Mean,
        }
    }
}

impl FormatArg {
    fn resolve(self) -> ReportFormat {
        match self {
            FormatArg::Structured => ReportFormat::Structured,
            FormatArg::Tabular => ReportFormat::Tabular,
        }
    }
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_owned()
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(topoaware::Error),
    /// Inputs lack rows for these vertex tokens.
    Coverage(Vec<String>),
    /// The verify suite ran and at least one property failed.
    PropertyFailed(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::PropertyFailed(_) => exit::INVARIANT,
            CliError::Coverage(_) => exit::COVERAGE,
            CliError::Lib(e) => match e.kind() {
                ErrorKind::Argument => exit::USAGE,
                ErrorKind::Parse => exit::PARSE,
                ErrorKind::Coverage => exit::COVERAGE,
                ErrorKind::Invariant => exit::INVARIANT,
                ErrorKind::Io => exit::OTHER,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Coverage(tokens) => {
                write!(
                    f,
                    "missing data for {} vertices: {}",
                    tokens.len(),
                    tokens.join(", ")
                )
            }
            CliError::PropertyFailed(names) => write!(f, "properties failed: {}", names.join(", ")),
        }
    }
}

impl std::error::Error for CliError {}

impl From<topoaware::Error> for CliError {
    fn from(e: topoaware::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Effective configuration of one run, flattened to strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

impl RunConfig {
    fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_owned(), value.to_string());
    }

    fn set_path(&mut self, key: &str, path: &Option<PathBuf>) {
        if let Some(p) = path {
            self.set(key, p.display());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn into_parameters(self) -> BTreeMap<String, String> {
        self.entries
    }

    fn from_cli(cli: &Cli) -> Self {
        let c = &cli.common;
        let mut cfg = RunConfig::default();
        cfg.set("subcommand", subcommand_name(&cli.command));
        cfg.set_path("graph", &c.graph);
        cfg.set_path("seeds", &c.seeds);
        cfg.set_path("embeddings", &c.embeddings);
        cfg.set_path("labels", &c.labels);
        cfg.set_path("predictions", &c.predictions);
        cfg.set_path("out", &c.out);
        if let Some(f) = c.fraction {
            cfg.set("fraction", f);
        }
        if let Some(k) = c.k {
            cfg.set("k", k);
        }
        cfg.set("max_hop", c.max_hop);
        cfg.set("aggregator", value_name(&c.aggregator));
        cfg.set("point_to_set", value_name(&c.point_to_set));
        cfg.set("format", value_name(&c.format));
        if let Some(s) = c.rng_seed {
            cfg.set("rng_seed", s);
        }
        match &cli.command {
            Command::Partition => {}
            Command::Distortion { exclude_zero } => cfg.set("exclude_zero", exclude_zero),
            Command::Sample {
                method,
                start,
                seeds_out,
            } => {
                cfg.set("method", value_name(method));
                if *method == MethodArg::Kcenter {
                    cfg.set(
                        "start",
                        if start.is_empty() {
                            "highest-degree".to_owned()
                        } else {
                            start.join(" ")
                        },
                    );
                }
                cfg.set_path("seeds_out", seeds_out);
            }
            Command::Evaluate {
                exclude_zero,
                bound_constant,
            } => {
                cfg.set("exclude_zero", exclude_zero);
                cfg.set("bound_constant", bound_constant);
            }
            Command::Embed { layers, features } => {
                cfg.set("layers", layers);
                cfg.set_path("features", features);
            }
            Command::Synth {
                sizes,
                p_in,
                p_out,
                labels_out,
            } => {
                let sizes: Vec<String> = sizes.iter().map(ToString::to_string).collect();
                cfg.set("sizes", sizes.join(","));
                cfg.set("p_in", p_in);
                cfg.set("p_out", p_out);
                cfg.set_path("labels_out", labels_out);
            }
            Command::Verify {
                trials,
                max_n,
                inject_fault,
            } => {
                cfg.set("trials", trials);
                cfg.set("max_n", max_n);
                if let Some(f) = inject_fault {
                    cfg.set("inject_fault", value_name(f));
                }
            }
        }
        cfg
    }
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Partition => "partition",
        Command::Distortion { .. } => "distortion",
        Command::Sample { .. } => "sample",
        Command::Evaluate { .. } => "evaluate",
        Command::Embed { .. } => "embed",
        Command::Synth { .. } => "synth",
        Command::Verify { .. } => "verify",
    }
}

/// `k` from either an explicit count or a fraction of `n`.
pub fn resolve_k(k: Option<usize>, fraction: Option<f64>, n: usize) -> CliResult<usize> {
    let k = match (k, fraction) {
        (Some(k), None) => k,
        (None, Some(f)) => {
            if !(f > 0.0 && f < 1.0) {
                return Err(usage(format!("--fraction {f} must lie in (0, 1)")));
            }
            ((f * n as f64).floor() as usize).max(1)
        }
        (None, None) => return Err(usage("one of --k or --fraction is required")),
        (Some(_), Some(_)) => return Err(usage("--k and --fraction are exclusive")),
    };
    if k == 0 || k > n {
        return Err(usage(format!("k = {k} outside 1..={n}")));
    }
    Ok(k)
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Lib(topoaware::Error::Io(format!("{}: {e}", path.display()))))
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> CliResult<&'a Path> {
    path.as_deref()
        .ok_or_else(|| usage(format!("--{flag} is required")))
}

fn required_seed(c: &Common, what: &str) -> CliResult<u64> {
    c.rng_seed
        .ok_or_else(|| usage(format!("{what} is randomized and needs an explicit --seed")))
}

fn load_graph(c: &Common) -> CliResult<Graph> {
    Ok(read_graph(open(required(&c.graph, "graph")?)?)?)
}

fn load_seeds(c: &Common, g: &Graph) -> CliResult<Vec<VertexId>> {
    let seeds = parse_seed_file(open(required(&c.seeds, "seeds")?)?, g.tokens())?;
    if seeds.is_empty() {
        return Err(usage("seed file lists no vertices"));
    }
    Ok(seeds)
}

fn load_embeddings(path: &Path, g: &Graph) -> CliResult<EmbeddingTable> {
    Ok(parse_embeddings(open(path)?, g.tokens())?)
}

fn load_labels(path: &Path, g: &Graph) -> CliResult<Labels> {
    Ok(parse_label_table(open(path)?, g.tokens())?)
}

/// Writes to `path`, or to `stdout` when absent.
fn emit(
    path: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> CliResult<()>,
) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| {
                CliError::Lib(topoaware::Error::Io(format!("{}: {e}", p.display())))
            })?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(stdout)?,
    }
    Ok(())
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let mut cfg = RunConfig::from_cli(cli);
    let c = &cli.common;
    let payload = match &cli.command {
        Command::Partition => {
            let g = &load_graph(c)?;
            named(g, cmd_partition(c, g))?
        }
        Command::Distortion { exclude_zero } => {
            let g = &load_graph(c)?;
            named(g, cmd_distortion(c, g, *exclude_zero))?
        }
        Command::Sample {
            method,
            start,
            seeds_out,
        } => {
            let g = &load_graph(c)?;
            named(g, cmd_sample(c, g, &mut cfg, *method, start, seeds_out))?
        }
        Command::Evaluate {
            exclude_zero,
            bound_constant,
        } => {
            let g = &load_graph(c)?;
            named(g, cmd_evaluate(c, g, *exclude_zero, *bound_constant))?
        }
        Command::Embed { layers, features } => {
            let g = &load_graph(c)?;
            return named(g, cmd_embed(c, g, *layers, features, stdout));
        }
        Command::Synth {
            sizes,
            p_in,
            p_out,
            labels_out,
        } => return cmd_synth(c, sizes, *p_in, *p_out, labels_out, stdout),
        Command::Verify {
            trials,
            max_n,
            inject_fault,
        } => {
            let payload = cmd_verify(c, *trials, *max_n, *inject_fault)?;
            let failed: Vec<String> = match &payload {
                Payload::Verify(v) => v
                    .properties
                    .iter()
                    .filter(|p| !p.passed)
                    .map(|p| p.name.clone())
                    .collect(),
                _ => unreachable!(),
            };
            write_run_report(c, cfg, payload, stdout)?;
            return if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::PropertyFailed(failed))
            };
        }
    };
    write_run_report(c, cfg, payload, stdout)
}

/// Replaces vertex ids in coverage errors with their tokens.
fn named<T>(g: &Graph, r: CliResult<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        CliError::Lib(topoaware::Error::Coverage { missing }) => {
            CliError::Coverage(missing.iter().map(|&v| g.token(v).to_owned()).collect())
        }
        other => other,
    })
}

fn write_run_report(
    c: &Common,
    cfg: RunConfig,
    payload: Payload,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let report = Report::new(TOOL_VERSION, cfg.into_parameters(), payload);
    let format = c.format.resolve();
    emit(&c.out, stdout, |w| Ok(write_report(&report, format, w)?))
}

fn cmd_partition(c: &Common, g: &Graph) -> CliResult<Payload> {
    let seeds = load_seeds(c, g)?;
    let part = partition_by_distance(g, &seeds, c.max_hop)?;
    Ok(Payload::Partition(PartitionSummary {
        seed_count: part.seed_set.len(),
        per_hop: part
            .counts()
            .into_iter()
            .map(|(hop, count)| HopCount { hop, count })
            .collect(),
        beyond_max_hop: part.overflow.len(),
        unreachable: part.unreachable.len(),
        max_hop: c.max_hop,
    }))
}

fn zero_policy(exclude: bool) -> ZeroDistancePolicy {
    if exclude {
        ZeroDistancePolicy::Exclude
    } else {
        ZeroDistancePolicy::Reject
    }
}

fn cmd_distortion(c: &Common, g: &Graph, exclude_zero: bool) -> CliResult<Payload> {
    let seeds = load_seeds(c, g)?;
    let emb = load_embeddings(required(&c.embeddings, "embeddings")?, g)?;
    let mode = c.point_to_set.resolve();
    let (gd, ed) = paired_distances_for_distortion(g, &seeds, &emb, c.max_hop, mode)?;
    let estimate = estimate_distortion(&gd, &ed, zero_policy(exclude_zero))?;
    let profile = hop_embedding_profile(g, &seeds, &emb, c.max_hop, mode)?;
    let part = partition_by_distance(g, &seeds, c.max_hop)?;
    Ok(Payload::Distortion(DistortionSummary {
        estimate,
        profile,
        beyond_max_hop: part.overflow.len(),
        unreachable: part.unreachable.len(),
    }))
}

fn parse_start(start: &[String], g: &Graph, c: &Common) -> CliResult<StartPolicy> {
    match start
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .as_slice()
    {
        [] | ["highest-degree"] => Ok(StartPolicy::HighestDegree),
        ["random"] => Ok(StartPolicy::Random(required_seed(c, "--start random")?)),
        ["vertex", token] => g
            .tokens()
            .id(token)
            .map(StartPolicy::Vertex)
            .ok_or_else(|| {
                CliError::Lib(topoaware::Error::UnknownTokens {
                    tokens: vec![token.to_string()],
                })
            }),
        other => Err(usage(format!(
            "bad --start {:?}; expected highest-degree | random | vertex TOKEN",
            other.join(" ")
        ))),
    }
}

fn cmd_sample(
    c: &Common,
    g: &Graph,
    cfg: &mut RunConfig,
    method: MethodArg,
    start: &[String],
    seeds_out: &Option<PathBuf>,
) -> CliResult<Payload> {
    let k = resolve_k(c.k, c.fraction, g.n())?;
    cfg.set("k", k);
    if !start.is_empty() && method != MethodArg::Kcenter {
        return Err(usage("--start applies only to --method kcenter"));
    }
    let selection = match method {
        MethodArg::Kcenter => kcenter_greedy(g, k, parse_start(start, g, c)?)?,
        MethodArg::Coverage => coverage_sampling(g, k, required_seed(c, "coverage sampling")?)?,
        MethodArg::Random => {
            baseline_select(g, k, Baseline::Random, required_seed(c, "random sampling")?)?
        }
        MethodArg::Degree => baseline_select(g, k, Baseline::Degree, 0)?,
        MethodArg::Centrality => baseline_select(g, k, Baseline::Centrality, 0)?,
        MethodArg::Pagerank => baseline_select(g, k, Baseline::Pagerank, 0)?,
    };
    let aggregate = if selection.full_cover {
        None
    } else {
        aggregate_distance(g, &selection.seeds, c.aggregator.resolve()).ok()
    };
    if let Some(path) = seeds_out {
        emit(&Some(path.clone()), &mut io::sink(), |w| {
            Ok(write_seed_file(&selection.seeds, g.tokens(), w)?)
        })?;
    }
    let seed_tokens = selection
        .seeds
        .iter()
        .map(|&s| g.token(s).to_owned())
        .collect();
    Ok(Payload::Selection(SelectionSummary {
        selection,
        seed_tokens,
        aggregate,
        note: (method == MethodArg::Centrality)
            .then(|| "centrality is closeness centrality, Wasserman-Faust corrected".to_owned()),
    }))
}

fn cmd_evaluate(
    c: &Common,
    g: &Graph,
    exclude_zero: bool,
    bound_constant: f64,
) -> CliResult<Payload> {
    let seeds = load_seeds(c, g)?;
    let predicted = load_labels(required(&c.predictions, "predictions")?, g)?;
    let truth = load_labels(required(&c.labels, "labels")?, g)?;
    let preds = PredictionTable::new(predicted, truth)?;
    let part = partition_by_distance(g, &seeds, c.max_hop)?;
    let subgroups = subgroup_accuracy(&part, &preds)?;
    let acc_md = format_acc_md(
        100.0 * subgroups.test_accuracy,
        100.0 * subgroups.max_discrepancy,
    )?;
    let risks: Vec<(u32, f64)> = subgroups
        .per_hop
        .iter()
        .map(|h| (h.hop, 1.0 - h.accuracy))
        .collect();
    let ordering = if risks.len() >= 2 {
        Some(ordering_check(&risks)?)
    } else {
        None
    };
    let (distortion, bounds) = match &c.embeddings {
        None => (None, Vec::new()),
        Some(path) => {
            let emb = load_embeddings(path, g)?;
            let (gd, ed) = paired_distances_for_distortion(
                g,
                &seeds,
                &emb,
                c.max_hop,
                c.point_to_set.resolve(),
            )?;
            let est = estimate_distortion(&gd, &ed, zero_policy(exclude_zero))?;
            let train_risk = 1.0 - subgroups.train_accuracy;
            let bounds = subgroups
                .per_hop
                .iter()
                .map(|h| {
                    let bound = bound_report(train_risk, &est, HopDistance::Finite(h.hop))?;
                    Ok(HopBound {
                        hop: h.hop,
                        bound_value: bound.bound_value(bound_constant),
                        bound,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            (Some(est), bounds)
        }
    };
    Ok(Payload::Evaluation(EvaluationSummary {
        subgroups,
        acc_md,
        ordering,
        distortion,
        bounds,
    }))
}

fn cmd_embed(
    c: &Common,
    g: &Graph,
    layers: usize,
    features: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let x: FeatureMatrix = match features {
        Some(p) => parse_features(open(p)?, g.tokens())?,
        None => one_hot_features(g),
    };
    let emb = propagate(g, &x, layers)?;
    emit(&c.out, stdout, |w| {
        Ok(write_embeddings(&emb, g.tokens(), w)?)
    })
}

fn cmd_synth(
    c: &Common,
    sizes: &[usize],
    p_in: f64,
    p_out: f64,
    labels_out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let seed = required_seed(c, "synth")?;
    let data = synthetic_sbm(sizes, p_in, p_out, seed)?;
    let g = &data.graph;
    emit(&c.out, stdout, |w| Ok(write_edge_list(g, w)?))?;
    if let Some(path) = labels_out {
        let labels = Labels::Classes(data.labels.iter().map(|&l| Some(l)).collect());
        emit(&Some(path.clone()), &mut io::sink(), |w| {
            Ok(write_label_table(&labels, g.tokens(), w)?)
        })?;
    }
    Ok(())
}

fn cmd_verify(
    c: &Common,
    trials: usize,
    max_n: usize,
    fault: Option<FaultArg>,
) -> CliResult<Payload> {
    let config = VerifyConfig {
        trials,
        max_n,
        rng_seed: required_seed(c, "verify")?,
        fault: fault.map(|f| match f {
            FaultArg::Bfs => Fault::Bfs,
            FaultArg::Kcenter => Fault::Kcenter,
            FaultArg::Distortion => Fault::Distortion,
        }),
    };
    config.validate()?;
    Ok(Payload::Verify(VerifySummary {
        properties: run_all(&config)?,
    }))
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    exit::OK
                }
                _ => exit::USAGE,
            };
        }
    };
    match run(&cli, stdout) {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
