use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pmar::estimators::{fit_method, ClipMode, EstimatorConfig, Method, OuterStage, WeightConfig};
use pmar::evaluation::{evaluate, EvalConfig, CSV_HEADER};
use pmar::experiment::{format_table, read_manifest, run_experiment, write_outputs, ExperimentConfig, ExperimentKind, Preset};
use pmar::gpsim::{simulate_admg, BiasConfig, Example1, SimConfig};
use pmar::graphs::{enumerate_pmar_admgs, parse_graph, write_graph, write_graphs, EnumerationDomain};
use pmar::io::{load_dataset, load_model, save_dataset, save_model};
use pmar::numerics::RngStream;
use pmar::regression::Trend;
use pmar::Error;

/// Regression with privileged missingness: graph enumeration, simulation,
/// model fitting, evaluation and replicated experiments.
#[derive(Parser, Debug)]
#[command(name = "pmar", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 20240101)]
    seed: u64,
    /// Output file or directory (meaning depends on the subcommand).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replication scale for experiments.
    #[arg(long, global = true, value_enum, default_value_t = Preset::Desk)]
    preset: Preset,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Keep outcomes of unselected rows in written datasets.
    #[arg(long, global = true)]
    oracle: bool,
    /// Housing biasing selects rows with p < U instead of U < p.
    #[arg(long, global = true)]
    literal_indicator: bool,
    /// Lower end of the probability clipping range.
    #[arg(long, global = true, default_value_t = 0.05)]
    clip_low: f64,
    /// Upper end of the probability clipping range.
    #[arg(long, global = true, default_value_t = 1.0)]
    clip_high: f64,
    /// Clip probabilities with min/max instead of the affine map.
    #[arg(long, global = true)]
    floor_clip: bool,
    /// Rescale importance weights to mean one.
    #[arg(long, global = true)]
    normalize_weights: bool,
    /// Enumerate only graphs in which S has no children.
    #[arg(long, global = true)]
    require_s_sink: bool,
    /// Forbid a directed and a bidirected edge between the same pair.
    #[arg(long, global = true)]
    no_coexisting_edges: bool,
    /// Enumerate DAGs only.
    #[arg(long, global = true)]
    no_bidirected: bool,
    /// Enumerate ancestral graphs only.
    #[arg(long, global = true)]
    ancestral: bool,
    /// Kernel ridge penalty per training row.
    #[arg(long, global = true, default_value_t = 1e-4)]
    ridge: f64,
    /// Multiplier on the median-distance lengthscale.
    #[arg(long, global = true, default_value_t = 1.0)]
    bandwidth_multiplier: f64,
    /// Unpenalized trend of the kernel ridge fits.
    #[arg(long, global = true, value_enum, default_value_t = TrendArg::Linear)]
    trend: TrendArg,
    /// Use a polynomial of this degree for the outer repeated-regression stage.
    #[arg(long, global = true)]
    outer_degree: Option<usize>,
    /// L2 penalty of the logistic propensity model.
    #[arg(long, global = true, default_value_t = 1e-3)]
    propensity_l2: f64,
    /// Divide re-weighted metrics by the total weight.
    #[arg(long, global = true)]
    self_normalized_metrics: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum TrendArg {
    Constant,
    Linear,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate all four-vertex mixed graphs with the PMAR pattern.
    Enumerate,
    /// Simulate datasets from a graph or the univariate example.
    Simulate(SimulateArgs),
    /// Fit one method on a training CSV.
    Fit(FitArgs),
    /// Score a fitted model on a test CSV.
    Eval(EvalArgs),
    /// Run a replicated experiment.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Graph text file.
    #[arg(long, conflicts_with_all = ["builtin", "graph_id"])]
    graph: Option<PathBuf>,
    /// Index into the enumeration under the current domain flags.
    #[arg(long, conflicts_with = "builtin")]
    graph_id: Option<usize>,
    /// Built-in generator.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Simulate even if the graph lacks the PMAR pattern.
    #[arg(long)]
    no_check: bool,
    /// Noise standard deviation of the univariate example.
    #[arg(long, default_value_t = 2.0)]
    noise_sd: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Builtin {
    Example1,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long)]
    method: Method,
    /// Training CSV.
    #[arg(long)]
    train: PathBuf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// Test CSV.
    #[arg(long)]
    test: PathBuf,
    /// Training CSV whose selected rows define the interpolation region
    /// (default: the box stored in the model).
    #[arg(long)]
    train: Option<PathBuf>,
    /// Also write the report as a CSV row.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: Option<ExperimentKind>,
    /// Rerun the configuration recorded in a manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    test_sets: Option<usize>,
    /// Number of graphs drawn for the sweep (0 = all).
    #[arg(long)]
    graphs: Option<usize>,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    /// Housing CSV with rm, lstat, medv columns.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Use the housing columns in their original units.
    #[arg(long)]
    no_standardize: bool,
    /// Minimum selected rows when biasing the housing data.
    #[arg(long, default_value_t = 120)]
    min_selected: usize,
    /// Noise standard deviation of the univariate example.
    #[arg(long)]
    noise_sd: Option<f64>,
    /// Skip failed replications instead of aborting.
    #[arg(long)]
    keep_going: bool,
}

impl Global {
    fn domain(&self) -> EnumerationDomain {
        EnumerationDomain {
            bidirected: !self.no_bidirected,
            coexisting_edges: !self.no_coexisting_edges,
            require_s_sink: self.require_s_sink,
            ancestral: self.ancestral,
        }
    }

    fn weights(&self) -> WeightConfig {
        WeightConfig {
            clip_low: self.clip_low,
            clip_high: self.clip_high,
            clip_mode: if self.floor_clip { ClipMode::Floor } else { ClipMode::Affine },
            normalize: self.normalize_weights,
            ..WeightConfig::default()
        }
    }

    fn estimator(&self) -> EstimatorConfig {
        let mut cfg = EstimatorConfig { weights: self.weights(), propensity_l2: self.propensity_l2, ..Default::default() };
        cfg.krr.ridge = self.ridge;
        cfg.krr.bandwidth_multiplier = self.bandwidth_multiplier;
        cfg.krr.trend = match self.trend {
            TrendArg::Constant => Trend::Constant,
            TrendArg::Linear => Trend::Linear,
        };
        if let Some(degree) = self.outer_degree {
            cfg.outer = OuterStage::Poly { degree };
        }
        cfg
    }

    fn eval(&self) -> EvalConfig {
        EvalConfig { weights: self.weights(), self_normalized: self.self_normalized_metrics }
    }
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    err: Error,
}

fn code_for(err: &Error, fallback: u8) -> u8 {
    match err {
        Error::InvalidValue(_)
        | Error::GraphFormat { .. }
        | Error::CyclicGraph
        | Error::WrongVertexSet
        | Error::UnknownVertex(_)
        | Error::OverlappingSets
        | Error::GraphNotPmar => 2,
        Error::ResampleLimitExceeded { .. } | Error::ReplicationFailed { .. } => 3,
        Error::Schema(_) | Error::SchemaValue { .. } | Error::Parse { .. } | Error::Csv(_) => 4,
        Error::AllZeroWeights
        | Error::SingleClass
        | Error::Diverged(_)
        | Error::TooFewSelected { .. }
        | Error::NoSelectedRows => 5,
        Error::Io(_) | Error::Json(_) => 1,
        _ => fallback,
    }
}

trait Exit<T> {
    fn exit(self, fallback: u8) -> Result<T, Failure>;
}

impl<T> Exit<T> for pmar::Result<T> {
    fn exit(self, fallback: u8) -> Result<T, Failure> {
        self.map_err(|err| Failure { code: code_for(&err, fallback), err })
    }
}

fn write_text(path: &Path, text: &str) -> pmar::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn cmd_enumerate(g: &Global) -> Result<(), Failure> {
    let graphs = enumerate_pmar_admgs(g.domain());
    if let Some(out) = &g.out {
        write_text(out, &write_graphs(&graphs)).exit(1)?;
    }
    println!("{}", graphs.len());
    Ok(())
}

fn cmd_simulate(g: &Global, a: &SimulateArgs) -> Result<(), Failure> {
    let out = g.out.clone().unwrap_or_else(|| PathBuf::from("simulated"));
    if a.reps == 0 || a.n < 2 {
        return Err(Failure { code: 2, err: Error::InvalidValue("need reps >= 1 and n >= 2".into()) });
    }
    let root = RngStream::new(g.seed, 0).derive_named("simulate");
    enum Source {
        Example(Example1),
        Graph(Box<SimConfig>, String),
    }
    let source = match (&a.builtin, &a.graph, a.graph_id) {
        (Some(Builtin::Example1), _, _) => Source::Example(Example1 { noise_sd: a.noise_sd }),
        (None, Some(path), _) => {
            let text = fs::read_to_string(path).map_err(Error::from).exit(2)?;
            let graph = parse_graph(&text).exit(2)?;
            let key = write_graph(&graph);
            let mut cfg = SimConfig::new(a.n, graph);
            cfg.check_pattern = !a.no_check;
            Source::Graph(Box::new(cfg), key)
        }
        (None, None, Some(id)) => {
            let all = enumerate_pmar_admgs(g.domain());
            let graph = all.get(id).cloned().ok_or_else(|| Failure {
                code: 2,
                err: Error::InvalidValue(format!("graph id {id} out of range (0..{})", all.len())),
            })?;
            let key = write_graph(&graph);
            Source::Graph(Box::new(SimConfig::new(a.n, graph)), key)
        }
        (None, None, None) => {
            return Err(Failure { code: 2, err: Error::InvalidValue("pass --graph, --graph-id or --builtin".into()) })
        }
    };
    fs::create_dir_all(&out).map_err(Error::from).exit(1)?;
    let (stream, label, graph_text) = match &source {
        Source::Example(_) => (root.derive_named("example1"), "example1".to_string(), None),
        Source::Graph(_, key) => (root.derive_named(key), "graph".to_string(), Some(key.clone())),
    };
    let width = (a.reps - 1).to_string().len().max(3);
    let mut files = Vec::new();
    for r in 0..a.reps {
        let mut rng = stream.derive(r as u64).rng();
        let d = match &source {
            Source::Example(ex) => ex.simulate(a.n, &mut rng),
            Source::Graph(cfg, _) => simulate_admg(cfg, &mut rng),
        }
        .exit(3)?;
        let name = format!("rep_{r:0width$}.csv");
        save_dataset(&d, out.join(&name), g.oracle).exit(1)?;
        files.push(name);
    }
    let manifest = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "tool_version": env!("CARGO_PKG_VERSION"),
        "source": label,
        "graph": graph_text,
        "n": a.n,
        "reps": a.reps,
        "seed": g.seed,
        "oracle": g.oracle,
        "noise_sd": matches!(source, Source::Example(_)).then_some(a.noise_sd),
        "files": files,
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(Error::from).exit(1)? + "\n";
    write_text(&out.join("manifest.json"), &text).exit(1)?;
    println!("wrote {} datasets to {}", a.reps, out.display());
    Ok(())
}

fn cmd_fit(g: &Global, a: &FitArgs) -> Result<(), Failure> {
    let train = load_dataset(&a.train).exit(4)?;
    let mut missing = Vec::new();
    if train.y.is_none() {
        missing.push("y".to_string());
    }
    if train.s.is_none() {
        missing.push("s".to_string());
    }
    if matches!(a.method, Method::IwT | Method::DrT) && train.p.is_none() {
        missing.push("p".to_string());
    }
    if !missing.is_empty() {
        return Err(Failure { code: 4, err: Error::Schema(missing) });
    }
    let model = fit_method(a.method, &train, &g.estimator()).exit(5)?;
    let out = g.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.model.json", a.method)));
    save_model(&model, &out).exit(1)?;
    println!(
        "method={} rows={} selected={} model={}",
        a.method,
        train.n(),
        train.num_selected().unwrap_or(0),
        out.display()
    );
    Ok(())
}

fn cmd_eval(g: &Global, a: &EvalArgs) -> Result<(), Failure> {
    let model = load_model(&a.model).exit(4)?;
    let test = load_dataset(&a.test).exit(4)?;
    if test.x.cols() != model.model.input_dim() {
        return Err(Failure {
            code: 4,
            err: Error::DimensionMismatch(format!(
                "test x has {} columns, model expects {}",
                test.x.cols(),
                model.model.input_dim()
            )),
        });
    }
    let x_sel = match &a.train {
        Some(p) => {
            let t = load_dataset(p).exit(4)?;
            let idx = t.selected_indices().exit(4)?;
            Some(t.subset(&idx).x)
        }
        None => None,
    };
    let report = evaluate(&model, &test, x_sel.as_ref(), None, &g.eval()).exit(4)?;
    let json = serde_json::to_string_pretty(&report).map_err(Error::from).exit(1)? + "\n";
    if let Some(out) = &g.out {
        write_text(out, &json).exit(1)?;
    }
    if let Some(path) = &a.csv {
        let write = || -> pmar::Result<()> {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(CSV_HEADER)?;
            w.write_record(report.csv_record())?;
            w.flush()?;
            Ok(())
        };
        write().exit(1)?;
    }
    print!("{json}");
    Ok(())
}

fn cmd_experiment(g: &Global, a: &ExperimentArgs) -> Result<(), Failure> {
    let cfg = match (&a.manifest, a.kind) {
        (Some(path), _) => read_manifest(path).exit(2)?,
        (None, Some(kind)) => {
            let mut cfg = ExperimentConfig::new(kind, g.preset);
            cfg.seed = g.seed;
            cfg.estimator = g.estimator();
            cfg.eval = g.eval();
            cfg.domain = g.domain();
            cfg.bias = BiasConfig { min_selected: a.min_selected, literal_indicator: g.literal_indicator, ..cfg.bias };
            cfg.data_path = a.data.clone();
            cfg.standardize = !a.no_standardize;
            cfg.keep_going = a.keep_going;
            if let Some(v) = a.n {
                cfg.n = v;
            }
            if let Some(v) = a.reps {
                cfg.replications = v;
            }
            if let Some(v) = a.test_sets {
                cfg.test_sets = v;
            }
            if let Some(v) = a.graphs {
                cfg.graphs = v;
            }
            if let Some(m) = &a.methods {
                cfg.methods = m.clone();
            }
            if let Some(sd) = a.noise_sd {
                cfg.example1.noise_sd = sd;
            }
            cfg
        }
        (None, None) => {
            return Err(Failure { code: 2, err: Error::InvalidValue("pass an experiment kind or --manifest".into()) })
        }
    };
    cfg.validate().exit(2)?;
    let out_dir = g.out.clone().unwrap_or_else(|| {
        PathBuf::from("results").join(match cfg.experiment {
            ExperimentKind::Example1 => "example1",
            ExperimentKind::AdmgSweep => "admg-sweep",
            ExperimentKind::Boston => "boston",
        })
    });
    let output = run_experiment(&cfg).exit(3)?;
    for f in &output.failures {
        eprintln!("replication {} ({}) failed: {}", f.replication, f.group, f.error);
    }
    write_outputs(&output, &out_dir).exit(1)?;
    eprintln!("results written to {}", out_dir.display());
    print!("{}", format_table(&output.summary));
    let _ = std::io::stdout().flush();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let g = &cli.global;
    let res = match &cli.command {
        Command::Enumerate => cmd_enumerate(g),
        Command::Simulate(a) => cmd_simulate(g, a),
        Command::Fit(a) => cmd_fit(g, a),
        Command::Eval(a) => cmd_eval(g, a),
        Command::Experiment(a) => cmd_experiment(g, a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.err);
            ExitCode::from(f.code)
        }
    }
}
