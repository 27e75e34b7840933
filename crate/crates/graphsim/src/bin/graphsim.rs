//! Experiment CLI: simulate prediction runs, report bound terms,
//! cross-check the fast overlay learner, and sample spanning trees.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use graphsim::generate;
use graphsim::graph::{Graph, Labeling};
use graphsim::harness::{self, LearnerSpec, RunConfig};
use graphsim::spanning::{linearize, sample_uniform_spanning_tree};
use graphsim::{Error, Result};

/// Keeps labeling draws independent of how much randomness the graph
/// generator consumed.
const LABEL_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Parser)]
#[command(
    name = "graphsim",
    about = "Online similarity prediction over labeled graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play the prediction game and emit one CSV row per round.
    Simulate(SimulateArgs),
    /// Report cut statistics and mistake-bound terms for a labeled graph.
    Bounds(LabeledSourceArgs),
    /// Drive the fast overlay learner and its dense mirror in lockstep.
    VerifyEquivalence(VerifyArgs),
    /// Sample a uniform spanning tree and print its edge list.
    SampleTree(SampleTreeArgs),
}

#[derive(Args)]
struct GraphSourceArgs {
    /// Edge-list file: one "u v" per line, '#' comments.
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generator kind: cliques, grid, cycle, random-tree, or er.
    #[arg(long)]
    gen: Option<String>,
    /// Generator parameters as key=value,key=value.
    #[arg(long, default_value = "")]
    gen_params: String,
    /// Seed for graph generation.
    #[arg(long, default_value_t = 1)]
    seed_graph: u64,
}

#[derive(Args)]
struct LabeledSourceArgs {
    #[command(flatten)]
    graph: GraphSourceArgs,
    /// Label file: one "v k" per line.
    #[arg(long, conflicts_with = "labgen")]
    labels: Option<PathBuf>,
    /// Labeling kind: by-cluster, bfs-regions:K, or random:K.
    #[arg(long)]
    labgen: Option<String>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: LabeledSourceArgs,
    /// Learner: matrix-perceptron, matrix-winnow, fast-bst, rnorm,
    /// tree-winnow, master-sim, class-from-sim, or one-vs-rest.
    #[arg(long)]
    learner: String,
    /// Rounds to play.
    #[arg(long, default_value_t = 1000)]
    rounds: usize,
    /// Pair policy: random or all-pairs.
    #[arg(long, default_value = "random")]
    pairs: String,
    /// Path policy for the unknown-graph regime: shortest,
    /// random-walk, or dfs.
    #[arg(long, default_value = "shortest")]
    paths: String,
    /// Seed for spanning-tree sampling.
    #[arg(long, default_value_t = 2)]
    seed_tree: u64,
    /// Seed for the query sequence.
    #[arg(long, default_value_t = 3)]
    seed_seq: u64,
    /// True cut size, required by matrix-winnow.
    #[arg(long)]
    cutsize: Option<usize>,
    /// Master base learner: halving or tree-winnow.
    #[arg(long, default_value = "halving")]
    base: String,
    /// Master pool size abort threshold.
    #[arg(long, default_value_t = 1_000_000)]
    pool_cap: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: LabeledSourceArgs,
    #[arg(long, default_value_t = 1000)]
    rounds: usize,
    #[arg(long, default_value_t = 2)]
    seed_tree: u64,
    #[arg(long, default_value_t = 3)]
    seed_seq: u64,
}

#[derive(Args)]
struct SampleTreeArgs {
    #[command(flatten)]
    graph: GraphSourceArgs,
    #[arg(long, default_value_t = 2)]
    seed_tree: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_gen_params(text: &str) -> Result<HashMap<String, String>> {
    let mut params = HashMap::new();
    for piece in text.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = piece.split_once('=').ok_or_else(|| {
            Error::Config(format!("generator parameter {piece:?} is not key=value"))
        })?;
        params.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(params)
}

fn load_graph(args: &GraphSourceArgs) -> Result<generate::Generated> {
    match (&args.graph, &args.gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            Ok(generate::Generated {
                graph: Graph::parse_edge_list(&text)?,
                clusters: None,
            })
        }
        (None, Some(kind)) => {
            let params = parse_gen_params(&args.gen_params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed_graph);
            generate::generate_graph(kind, &params, &mut rng)
        }
        _ => Err(Error::Config("provide exactly one of --graph or --gen".into())),
    }
}

fn load_labels(source: &LabeledSourceArgs, gen: &generate::Generated) -> Result<Labeling> {
    match (&source.labels, &source.labgen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            Labeling::parse(&text, gen.graph.n())
        }
        (None, Some(kind)) => {
            let mut rng =
                ChaCha8Rng::seed_from_u64(source.graph.seed_graph ^ LABEL_SEED_SALT);
            generate::generate_labeling(kind, &gen.graph, gen.clusters.as_deref(), &mut rng)
        }
        _ => Err(Error::Config(
            "provide exactly one of --labels or --labgen".into(),
        )),
    }
}

fn with_output<F>(out: &Option<PathBuf>, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)?;
            body(&mut file)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match body(&mut lock) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let gen = load_graph(&args.source.graph)?;
    let lab = load_labels(&args.source, &gen)?;
    let learner = LearnerSpec::from_cli(&args.learner, args.cutsize, &args.base, args.pool_cap)?;
    let include_path = learner.needs_path();
    let cfg = RunConfig {
        learner,
        rounds: args.rounds,
        pairs: args.pairs.parse()?,
        paths: args.paths.parse()?,
        seed_tree: args.seed_tree,
        seed_seq: args.seed_seq,
    };
    let outcome = harness::run(&gen.graph, &lab, &cfg)?;
    with_output(&args.source.out, |w| {
        harness::write_csv(&outcome.records, include_path, w)
    })?;
    eprint!("{}", outcome.summary);
    Ok(())
}

fn bounds(args: &LabeledSourceArgs) -> Result<()> {
    let gen = load_graph(&args.graph)?;
    let lab = load_labels(args, &gen)?;
    let rows = harness::bounds_report(&gen.graph, &lab)?;
    with_output(&args.out, |w| harness::write_bounds(&rows, w))
}

fn verify_equivalence(args: &VerifyArgs) -> Result<()> {
    let gen = load_graph(&args.source.graph)?;
    let lab = load_labels(&args.source, &gen)?;
    let report = harness::verify_equivalence(
        &gen.graph,
        &lab,
        args.rounds,
        args.seed_tree,
        args.seed_seq,
    )?;
    with_output(&args.source.out, |w| {
        writeln!(w, "rounds {}", report.rounds)?;
        writeln!(w, "fast_mistakes {}", report.fast_mistakes)?;
        writeln!(w, "dense_mistakes {}", report.dense_mistakes)?;
        match report.divergence {
            None => writeln!(w, "divergence none"),
            Some(t) => writeln!(w, "divergence {t}"),
        }
    })
}

fn sample_tree(args: &SampleTreeArgs) -> Result<()> {
    let gen = load_graph(&args.graph)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed_tree);
    let tree = sample_uniform_spanning_tree(&gen.graph, &mut rng)?;
    let order = linearize(&tree, 1);
    with_output(&args.out, |w| {
        writeln!(
            w,
            "# uniform spanning tree, {} vertices; depth-first order: {}",
            tree.n(),
            order
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )?;
        for &(u, v) in tree.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    })
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Simulate(args) => simulate(args),
        Cmd::Bounds(args) => bounds(args),
        Cmd::VerifyEquivalence(args) => verify_equivalence(args),
        Cmd::SampleTree(args) => sample_tree(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
