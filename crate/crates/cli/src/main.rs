//! `magdist`: batch pipeline over CSV files.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 MCL did not converge
//! and `--strict` was given.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magdist::io::{self as csvio, CsvKind, CsvSchema};
use magdist::mcl::mcl_cluster;
use magdist::pipeline::{self, PipelineConfig};
use magdist::simgraph::{gaussian_graph, knn_graph, magsim, threshold_graph};
use magdist::{
    Clustering, Error, KnnMode, LabeledDataset, MclParams, MultiAttributedGraph, PairsMode,
    SimilarityGraph,
};

const EXIT_INPUT: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "magdist", version, about = "Distances, similarity graphs and Markov clustering for multi-attributed graphs")]
struct Cli {
    /// Field delimiter of every input CSV.
    #[arg(long, global = true, default_value_t = ',')]
    delimiter: char,
    /// Suppress progress lines on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Edge-weighted distances between vertices of a multi-attributed graph.
    Dist(DistArgs),
    /// Rescale a distance file into similarities in [0, 1].
    Simgraph(SimgraphArgs),
    /// Gaussian-kernel similarity graph with a cut-off.
    Gaussian(GaussianArgs),
    /// k-nearest-neighbour similarity graph.
    Knn(KnnArgs),
    /// Markov clustering of a similarity graph.
    Mcl(MclArgs),
    /// Score a clustering against class labels.
    Eval(EvalArgs),
    /// Gaussian graph, distances, similarities, clustering and scores in one run.
    Pipeline(PipelineArgs),
    /// Pipeline over a grid of gamma, min-sim and inflation values.
    Sweep(SweepArgs),
    /// Split a raw `a1,...,an,label` file into a vertex file and a label file.
    Ingest(IngestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PairsArg {
    /// Every unordered vertex pair.
    All,
    /// Only pairs joined by an edge.
    Edges,
}

impl From<PairsArg> for PairsMode {
    fn from(p: PairsArg) -> Self {
        match p {
            PairsArg::All => PairsMode::AllPairs,
            PairsArg::Edges => PairsMode::EdgeListOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KnnArg {
    Union,
    Mutual,
}

impl From<KnnArg> for KnnMode {
    fn from(k: KnnArg) -> Self {
        match k {
            KnnArg::Union => KnnMode::Union,
            KnnArg::Mutual => KnnMode::Mutual,
        }
    }
}

#[derive(Args)]
struct DistArgs {
    /// Vertex CSV (`id,a1,...,an`).
    #[arg(long)]
    vertices: PathBuf,
    /// Edge CSV (`src,dst,e1,...,em`).
    #[arg(long)]
    edges: PathBuf,
    /// Comma-separated edge weights summing to 1; uniform when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Edge-weightage exponent.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, value_enum, default_value = "all")]
    pairs: PairsArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimgraphArgs {
    /// Distance CSV (`i,j,delta`).
    #[arg(long)]
    distances: PathBuf,
    /// Drop edges with similarity below this value.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    min_sim: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GaussianArgs {
    #[arg(long)]
    vertices: PathBuf,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
    /// Keep pairs whose kernel value is at least this.
    #[arg(long, default_value_t = 0.55, allow_negative_numbers = true)]
    threshold: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KnnArgs {
    #[arg(long)]
    vertices: PathBuf,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, value_enum, default_value = "union")]
    mode: KnnArg,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct MclOpts {
    /// Entrywise power applied each iteration; larger gives more clusters.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    inflation: f64,
    /// Matrix power applied each iteration.
    #[arg(long, default_value_t = 2)]
    expansion: u32,
    /// Entries below this are zeroed after inflation.
    #[arg(long, default_value_t = 1e-5)]
    prune: f64,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Do not add unit self-loops before normalizing.
    #[arg(long)]
    no_self_loops: bool,
    /// Exit with code 3 if MCL stops before converging.
    #[arg(long)]
    strict: bool,
}

impl MclOpts {
    fn params(&self) -> MclParams {
        MclParams {
            expansion: self.expansion,
            inflation: self.inflation,
            prune_threshold: self.prune,
            max_iters: self.max_iters,
            add_self_loops: !self.no_self_loops,
            ..MclParams::default()
        }
    }
}

#[derive(Args)]
struct MclArgs {
    /// Similarity CSV (`i,j,sim`).
    #[arg(long)]
    graph: PathBuf,
    /// Vertex CSV; its ids without edges become singleton clusters.
    #[arg(long)]
    vertices: Option<PathBuf>,
    #[command(flatten)]
    mcl: MclOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Cluster CSV (`id,cluster`).
    #[arg(long)]
    clusters: PathBuf,
    /// Label CSV (`id,label`).
    #[arg(long)]
    labels: PathBuf,
    /// CSV report; the text report always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GraphOpts {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
    /// Gaussian-kernel cut-off for the first graph.
    #[arg(long, default_value_t = 0.55, allow_negative_numbers = true)]
    threshold: f64,
    /// Comma-separated edge weights; the Gaussian graph has one edge attribute.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "all")]
    pairs: PairsArg,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    vertices: PathBuf,
    /// Label CSV; scoring is skipped when omitted.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphOpts,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    /// Similarity cut applied to the rescaled graph before clustering.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    min_sim: f64,
    #[command(flatten)]
    mcl: MclOpts,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    vertices: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[command(flatten)]
    graph: GraphOpts,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    gammas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    min_sims: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1.4,1.6,1.8,2.0,2.2")]
    inflations: Vec<f64>,
    /// Text report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    /// Raw rows `a1,...,an,label`.
    #[arg(long)]
    input: PathBuf,
    /// Prefix of the generated row ids.
    #[arg(long, default_value = "r")]
    id_prefix: String,
    #[arg(long)]
    out_vertices: PathBuf,
    #[arg(long)]
    out_labels: PathBuf,
}

struct Ctx {
    delimiter: char,
    quiet: bool,
}

impl Ctx {
    fn log(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("magdist: {}", msg.as_ref());
        }
    }

    fn schema(&self, kind: CsvKind) -> Result<CsvSchema, Error> {
        CsvSchema::new(kind).with_delimiter(self.delimiter)
    }

    fn vertices(&self, path: &Path) -> Result<Vec<magdist::VertexVector>, Error> {
        csvio::read_vertices(csvio::open(path)?, &self.schema(CsvKind::Vertices)?)
    }

    fn labels(&self, path: &Path) -> Result<LabeledDataset, Error> {
        csvio::read_labels(csvio::open(path)?, &self.schema(CsvKind::Labels)?)
    }
}

/// Writes to `path`, or to stdout when `None`.
fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Result<(), Error> {
    match path {
        Some(p) => {
            let mut w = csvio::create(p)?;
            f(&mut w)?;
            w.flush().map_err(|source| Error::Io {
                path: p.to_owned(),
                source,
            })
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn check_convergence(ctx: &Ctx, c: &Clustering, strict: bool) -> ExitCode {
    if c.converged {
        return ExitCode::SUCCESS;
    }
    ctx.log(format!("warning: MCL did not converge within {} iterations", c.iterations));
    if strict {
        ExitCode::from(EXIT_NOT_CONVERGED)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_dist(ctx: &Ctx, a: DistArgs) -> Result<ExitCode, Error> {
    let vertices = ctx.vertices(&a.vertices)?;
    let edges = csvio::read_edges(csvio::open(&a.edges)?, &ctx.schema(CsvKind::Edges)?)?;
    let graph = MultiAttributedGraph::new(vertices, edges)?;
    let cfg = PipelineConfig {
        alpha: a.alpha,
        gamma: a.gamma,
        ..PipelineConfig::default()
    };
    let params = cfg.distance_params(graph.edge_dim())?;
    ctx.log(format!(
        "{} vertices, {} edges, m = {}",
        graph.vertices().len(),
        graph.edges().len(),
        graph.edge_dim()
    ));
    let records = magdist::distance::magdist(&graph, &params, a.pairs.into())?;
    ctx.log(format!("{} distances", records.len()));
    emit(a.out.as_deref(), |w| csvio::write_distances(w, &records))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simgraph(ctx: &Ctx, a: SimgraphArgs) -> Result<ExitCode, Error> {
    let records = csvio::read_distances(csvio::open(&a.distances)?, &ctx.schema(CsvKind::Distances)?)?;
    let g = threshold_graph(&magsim(&records)?, a.min_sim)?;
    ctx.log(format!("{} similarity edges kept of {}", g.edges.len(), records.len()));
    emit(a.out.as_deref(), |w| csvio::write_similarity(w, &g))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gaussian(ctx: &Ctx, a: GaussianArgs) -> Result<ExitCode, Error> {
    let vertices = ctx.vertices(&a.vertices)?;
    let g = gaussian_graph(&vertices, a.sigma, a.threshold)?;
    ctx.log(format!("{} vertices, {} edges", g.vertices.len(), g.edges.len()));
    emit(a.out.as_deref(), |w| csvio::write_similarity(w, &g))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_knn(ctx: &Ctx, a: KnnArgs) -> Result<ExitCode, Error> {
    let vertices = ctx.vertices(&a.vertices)?;
    let g = knn_graph(&vertices, a.k, a.sigma, a.mode.into())?;
    ctx.log(format!("{} vertices, {} edges", g.vertices.len(), g.edges.len()));
    emit(a.out.as_deref(), |w| csvio::write_similarity(w, &g))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mcl(ctx: &Ctx, a: MclArgs) -> Result<ExitCode, Error> {
    let mut g = csvio::read_similarity(csvio::open(&a.graph)?, &ctx.schema(CsvKind::Similarity)?)?;
    if let Some(path) = &a.vertices {
        let ids: Vec<String> = ctx.vertices(path)?.into_iter().map(|v| v.id).collect();
        let known: std::collections::HashSet<&str> = ids.iter().map(String::as_str).collect();
        if let Some(stray) = g.vertices.iter().find(|v| !known.contains(v.as_str())) {
            return Err(Error::Referential(stray.clone()));
        }
        g = SimilarityGraph::new(ids, g.edges)?;
    }
    let c = mcl_cluster(&g, &a.mcl.params())?;
    ctx.log(format!("{} clusters after {} iterations", c.len(), c.iterations));
    emit(a.out.as_deref(), |w| csvio::write_clusters(w, &c))?;
    Ok(check_convergence(ctx, &c, a.mcl.strict))
}

fn cmd_eval(ctx: &Ctx, a: EvalArgs) -> Result<ExitCode, Error> {
    let clustering = csvio::read_clusters(csvio::open(&a.clusters)?, &ctx.schema(CsvKind::Clusters)?)?;
    let labels = ctx.labels(&a.labels)?;
    let report = magdist::eval::tpr_fpr(&magdist::eval::contingency(&clustering, &labels)?)?;
    print!("{}", report.render_text());
    if let Some(out) = &a.out {
        emit(Some(out), |w| csvio::write_report(w, &report))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn config(graph: &GraphOpts, gamma: f64, min_sim: f64, mcl: &MclOpts) -> PipelineConfig {
    PipelineConfig {
        sigma: graph.sigma,
        threshold: graph.threshold,
        alpha: graph.alpha.clone(),
        gamma,
        pairs_mode: graph.pairs.into(),
        min_sim,
        mcl: mcl.params(),
    }
}

fn cmd_pipeline(ctx: &Ctx, a: PipelineArgs) -> Result<ExitCode, Error> {
    let vertices = ctx.vertices(&a.vertices)?;
    let labels = match &a.labels {
        Some(p) if p.exists() => Some(ctx.labels(p)?),
        Some(p) => {
            ctx.log(format!("warning: {} not found, skipping evaluation", p.display()));
            None
        }
        None => {
            ctx.log("warning: no --labels given, skipping evaluation");
            None
        }
    };
    let cfg = config(&a.graph, a.gamma, a.min_sim, &a.mcl);
    let out = pipeline::run(&vertices, labels.as_ref(), &cfg)?;
    ctx.log(format!(
        "gaussian graph: {} vertices, {} edges; rescaled graph: {} edges; {} clusters",
        out.gaussian.vertices.len(),
        out.gaussian.edges.len(),
        out.result.similarity.edges.len(),
        out.result.clustering.len()
    ));

    fs::create_dir_all(&a.out).map_err(|source| Error::Io {
        path: a.out.clone(),
        source,
    })?;
    let file = |name: &str| a.out.join(name);
    emit(Some(&file("gaussian.csv")), |w| csvio::write_similarity(w, &out.gaussian))?;
    emit(Some(&file("distances.csv")), |w| csvio::write_distances(w, &out.result.distances))?;
    emit(Some(&file("similarity.csv")), |w| csvio::write_similarity(w, &out.result.similarity))?;
    emit(Some(&file("clusters.csv")), |w| csvio::write_clusters(w, &out.result.clustering))?;
    if let Some(report) = &out.result.report {
        emit(Some(&file("report.csv")), |w| csvio::write_report(w, report))?;
        let text = report.render_text();
        emit(Some(&file("report.txt")), |w| {
            w.write_all(text.as_bytes()).map_err(|source| Error::Io {
                path: file("report.txt"),
                source,
            })
        })?;
        print!("{text}");
    }
    Ok(check_convergence(ctx, &out.result.clustering, a.mcl.strict))
}

fn cmd_sweep(ctx: &Ctx, a: SweepArgs) -> Result<ExitCode, Error> {
    let vertices = ctx.vertices(&a.vertices)?;
    let labels = ctx.labels(&a.labels)?;
    let base = PipelineConfig {
        sigma: a.graph.sigma,
        threshold: a.graph.threshold,
        alpha: a.graph.alpha.clone(),
        pairs_mode: a.graph.pairs.into(),
        ..PipelineConfig::default()
    };
    let report = pipeline::sweep(&vertices, &labels, &base, &a.gammas, &a.min_sims, &a.inflations)?;
    ctx.log(format!(
        "{} rescaled-distance runs, {} gaussian runs",
        report.magsim.len(),
        report.gaussian.len()
    ));
    let text = report.render_text();
    emit(a.out.as_deref(), |w| {
        w.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: a.out.clone().unwrap_or_default(),
            source,
        })
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_ingest(ctx: &Ctx, a: IngestArgs) -> Result<ExitCode, Error> {
    let schema = ctx.schema(CsvKind::LabeledRows)?;
    let (vertices, labels) = csvio::read_labeled_rows(csvio::open(&a.input)?, &schema, &a.id_prefix)?;
    ctx.log(format!("{} rows, {} classes", vertices.len(), labels.classes().len()));
    let ids: Vec<String> = vertices.iter().map(|v| v.id.clone()).collect();
    emit(Some(&a.out_vertices), |w| csvio::write_vertices(w, &vertices))?;
    emit(Some(&a.out_labels), |w| csvio::write_labels(w, &ids, &labels))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        delimiter: cli.delimiter,
        quiet: cli.quiet,
    };
    let result = match cli.command {
        Command::Dist(a) => cmd_dist(&ctx, a),
        Command::Simgraph(a) => cmd_simgraph(&ctx, a),
        Command::Gaussian(a) => cmd_gaussian(&ctx, a),
        Command::Knn(a) => cmd_knn(&ctx, a),
        Command::Mcl(a) => cmd_mcl(&ctx, a),
        Command::Eval(a) => cmd_eval(&ctx, a),
        Command::Pipeline(a) => cmd_pipeline(&ctx, a),
        Command::Sweep(a) => cmd_sweep(&ctx, a),
        Command::Ingest(a) => cmd_ingest(&ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("magdist: error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
