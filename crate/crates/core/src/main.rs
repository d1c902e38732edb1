use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;

use ordered_steiner::experiment::{
    self, ExperimentConfig, Model, LANE_CALIBRATE, LANE_CASCADE, LANE_GRAPH, LANE_SAMPLE,
    LANE_SOURCE,
};
use ordered_steiner::generate::generate_ba_graph;
use ordered_steiner::graph::{parse_edge_list, parse_reports, write_edge_list, write_reports};
use ordered_steiner::metrics::evaluate;
use ordered_steiner::reconstruct::{parse_tree, write_tree, Algorithm};
use ordered_steiner::simulate::{
    calibrate_ic, parse_cascade, sample_reports, simulate_ct, simulate_ic, simulate_si,
    simulate_sp, write_cascade, RngSeed,
};
use ordered_steiner::{Error, Graph, Result};

#[derive(Parser)]
#[command(
    name = "ordered-steiner",
    version,
    about = "Temporally consistent cascade reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a cascade and optionally sample reports from it.
    Simulate(SimulateArgs),
    /// Reconstruct a tree from a graph and a report file.
    Reconstruct(ReconstructArgs),
    /// Score a tree against a ground-truth cascade (JSON to stdout).
    Evaluate(EvaluateArgs),
    /// Run a seeded experiment grid and write CSV.
    Experiment(ExperimentArgs),
    /// Generate a Barabási–Albert graph edge list.
    GenGraph(GenGraphArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    model: Model,
    /// Source node; drawn uniformly when omitted.
    #[arg(long)]
    source: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    stop_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    run: u64,
    /// Cascade output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reporting probability for the sampled report file.
    #[arg(long, requires = "reports_out")]
    q: Option<f64>,
    #[arg(long, requires = "q")]
    reports_out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    reports: PathBuf,
    #[arg(long, default_value = "closure")]
    algo: Algorithm,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    cascade: PathBuf,
    #[arg(long)]
    tree: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML file with experiment keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "ba_nodes")]
    graph: Option<PathBuf>,
    #[arg(long)]
    ba_nodes: Option<usize>,
    #[arg(long)]
    ba_attach: Option<usize>,
    #[arg(long)]
    model: Option<Model>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    stop_fraction: Option<f64>,
    /// Reporting probabilities, comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    #[arg(long)]
    algo: Vec<Algorithm>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Row CSV; failure log and summary are written alongside. Rows go to
    /// stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record reconstruction wall-clock in `runtime_ms`.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 2)]
    attach: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(parse_edge_list(BufReader::new(File::open(path)?))?.graph)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    if g.node_count() == 0 {
        return Err(Error::Config("graph has no nodes".into()));
    }
    let seed = RngSeed::new(args.seed, args.run);
    let source = match args.source {
        Some(s) => s,
        None => seed.rng(LANE_SOURCE).gen_range(0..g.node_count()),
    };
    let mut rng = seed.rng(LANE_CASCADE);
    let need_p = || {
        args.p
            .ok_or_else(|| Error::Config(format!("model {} needs --p", args.model)))
    };
    let cascade = match args.model {
        Model::Si => simulate_si(&g, source, need_p()?, args.stop_fraction, &mut rng)?,
        Model::Ic => {
            let p = match args.p {
                Some(p) => p,
                None => calibrate_ic(&g, args.stop_fraction, 200, &mut seed.rng(LANE_CALIBRATE))?.p,
            };
            simulate_ic(&g, source, p, &mut rng)?
        }
        Model::Ct => simulate_ct(&g, source, args.beta, args.stop_fraction, &mut rng)?,
        Model::Sp => simulate_sp(&g, source, args.stop_fraction)?,
    };
    let mut out = output(args.out.as_deref())?;
    write_cascade(&cascade, &mut out)?;
    out.flush()?;
    if let (Some(q), Some(path)) = (args.q, args.reports_out) {
        let reports = sample_reports(&cascade, q, &mut seed.rng(LANE_SAMPLE))?;
        let mut out = output(Some(&path))?;
        write_reports(&reports, &mut out)?;
        out.flush()?;
    }
    Ok(())
}

fn reconstruct(args: ReconstructArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let reports = parse_reports(BufReader::new(File::open(&args.reports)?), g.node_count())?;
    let tree = args.algo.run(&g, &reports)?;
    let mut out = output(args.out.as_deref())?;
    write_tree(&tree, &mut out)?;
    out.flush()?;
    Ok(())
}

fn evaluate_cmd(args: EvaluateArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let cascade = parse_cascade(BufReader::new(File::open(&args.cascade)?), g.node_count())?;
    let tree = parse_tree(BufReader::new(File::open(&args.tree)?))?;
    if let Err(v) = tree.check_structure(&g) {
        return Err(Error::InvalidParameter(format!(
            "tree is not a subtree of the graph: {v:?}"
        )));
    }
    let record = evaluate(&tree, &cascade, None)?;
    let json = serde_json::to_string_pretty(&record).map_err(|e| Error::Io(e.into()))?;
    println!("{json}");
    Ok(())
}

fn experiment_config(args: ExperimentArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(path) = args.graph {
        cfg.graph_path = Some(path);
        cfg.ba_nodes = None;
    }
    if let Some(n) = args.ba_nodes {
        cfg.ba_nodes = Some(n);
        cfg.graph_path = None;
    }
    macro_rules! set {
        ($($field:ident <- $value:expr),* $(,)?) => {
            $(if let Some(v) = $value { cfg.$field = v; })*
        };
    }
    set!(
        ba_attach <- args.ba_attach,
        model <- args.model,
        beta <- args.beta,
        stop_fraction <- args.stop_fraction,
        runs <- args.runs,
        master_seed <- args.seed,
        threads <- args.threads,
    );
    if args.p.is_some() {
        cfg.p = args.p;
    }
    if !args.q.is_empty() {
        cfg.q_list = args.q;
    }
    if !args.algo.is_empty() {
        cfg.algorithms = args.algo;
    }
    if args.out.is_some() {
        cfg.output_path = args.out;
    }
    cfg.timing |= args.timing;
    cfg.validate()?;
    Ok(cfg)
}

fn experiment_cmd(args: ExperimentArgs) -> Result<()> {
    let cfg = experiment_config(args)?;
    let result = experiment::run_experiment(&cfg)?;
    match &cfg.output_path {
        Some(path) => experiment::write_outputs(&result, path)?,
        None => {
            let mut out = output(None)?;
            experiment::emit_csv(&result.rows, &mut out)?;
            out.flush()?;
        }
    }
    if !result.failures.is_empty() {
        eprintln!(
            "{} failed (algorithm, q, run) combinations excluded",
            result.failures.len()
        );
    }
    Ok(())
}

fn gen_graph(args: GenGraphArgs) -> Result<()> {
    let mut rng = RngSeed::new(args.seed, 0).rng(LANE_GRAPH);
    let g = generate_ba_graph(args.nodes, args.attach, &mut rng)?;
    let mut out = output(args.out.as_deref())?;
    write_edge_list(&g, &mut out)?;
    out.flush()?;
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 3,
        Error::Io(_) | Error::RunFailed(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Experiment(a) => experiment_cmd(a),
        Command::GenGraph(a) => gen_graph(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
