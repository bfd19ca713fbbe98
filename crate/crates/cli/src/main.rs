//! `collab-graph`: every pipeline stage as a subcommand.
//!
//! Exit codes: 0 success, 1 I/O or malformed input, 2 empty result,
//! 3 not found, 64 usage.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use collab_core::export::{DocumentParams, ExportError, ImportedGraph};
use collab_core::graph::{GraphError, Mode, ProjectionParams};
use collab_core::ingest::{load_alias_map, CleanStats, IngestError};
use collab_core::layout::{render_attributes, run_layout, LayoutParams, LayoutState};
use collab_core::{
    clean_links, export_graph, import_graph, parse_link_stream, project, AliasMap, BipartiteGraph,
};
use collab_server::{GraphRegistry, ServiceConfig};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("{0}: {1}")]
    Document(PathBuf, #[source] ExportError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("{0}")]
    Empty(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) | CliError::Document(..) | CliError::Ingest(_) => 1,
            CliError::Empty(_) => 2,
            CliError::NotFound(_) => 3,
            CliError::Usage(_) => 64,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "collab-graph",
    version,
    about = "Build, lay out and serve developer collaboration graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Author,
    Project,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Author => Mode::Author,
            ModeArg::Project => Mode::Project,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Clean a raw `project<TAB>author` link file.
    Ingest {
        #[arg(long)]
        links: PathBuf,
        /// `raw<TAB>canonical` author id pairs.
        #[arg(long)]
        aliases: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        min_authors: usize,
        /// Cleaned pairs; statistics go to `<out>.stats.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Project cleaned pairs onto authors or projects.
    Project {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        min_degree: u32,
        #[arg(long)]
        min_shared: u32,
        #[arg(long)]
        drop_isolated: bool,
        /// Write the document even when no node survives.
        #[arg(long)]
        allow_empty: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run ForceAtlas2 on a graph document.
    Layout {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = LayoutParams::default().max_iterations)]
        iterations: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the neighborhood of one node.
    A2gr {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve every `.graph.json` in a directory over HTTP.
    Serve {
        #[arg(long)]
        graphs: PathBuf,
        /// Cleaned pairs used as the source for new projections.
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[arg(long, default_value_t = collab_server::DEFAULT_NODE_CAP)]
        node_cap: usize,
        /// Directory with the UI bundle.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Io(path.into(), e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(path.into(), e))
}

fn read_document(path: &Path) -> Result<ImportedGraph> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.into(), e))?;
    import_graph(&bytes).map_err(|e| CliError::Document(path.into(), e))
}

fn read_pairs(path: &Path) -> Result<BipartiteGraph> {
    let parsed = parse_link_stream(open(path)?, '\t')?;
    if parsed.errors > 0 {
        eprintln!(
            "{}: skipped {} malformed lines",
            path.display(),
            parsed.errors
        );
    }
    Ok(BipartiteGraph::from_pairs(
        parsed
            .records
            .iter()
            .map(|r| (r.project.as_str(), r.author.as_str())),
    ))
}

#[derive(Serialize)]
struct IngestReport {
    #[serde(flatten)]
    stats: CleanStats,
    malformed_lines: u64,
    malformed_aliases: u64,
}

fn ingest(links: &Path, aliases: Option<&Path>, min_authors: usize, out: &Path) -> Result<()> {
    let parsed = parse_link_stream(open(links)?, '\t')?;
    let (aliases, malformed_aliases) = match aliases {
        Some(p) => {
            let loaded = load_alias_map(open(p)?)?;
            (loaded.map, loaded.malformed)
        }
        None => (AliasMap::new(), 0),
    };
    let cleaned = clean_links(&parsed.records, &aliases, min_authors)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut w = BufWriter::new(File::create(out).map_err(|e| CliError::Io(out.into(), e))?);
    cleaned
        .write_tsv(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Io(out.into(), e))?;
    let report = IngestReport {
        stats: cleaned.stats,
        malformed_lines: parsed.errors as u64,
        malformed_aliases: malformed_aliases as u64,
    };
    let json = serde_json::to_string_pretty(&report).expect("stats serialize");
    let mut sidecar = out.as_os_str().to_owned();
    sidecar.push(".stats.json");
    write_file(Path::new(&sidecar), json.as_bytes())?;
    eprintln!("{json}");
    if cleaned.is_empty() {
        return Err(CliError::Empty("no pairs survived cleaning".into()));
    }
    Ok(())
}

fn project_cmd(
    pairs: &Path,
    params: ProjectionParams,
    allow_empty: bool,
    out: &Path,
) -> Result<()> {
    params
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let bg = read_pairs(pairs)?;
    let g = project(&bg, &params).map_err(|e| CliError::Usage(e.to_string()))?;
    if g.node_count() == 0 && !allow_empty {
        return Err(CliError::Empty(
            "projection is empty; relax the thresholds or pass --allow-empty".into(),
        ));
    }
    let layout = LayoutState::from_positions(vec![[0.0, 0.0]; g.node_count()], 0);
    let attrs = render_attributes(&g);
    let doc = export_graph(
        &g,
        &layout,
        &attrs,
        DocumentParams {
            projection: Some(params),
            layout: None,
        },
    )
    .map_err(|e| CliError::Document(out.into(), e))?;
    eprintln!("{} nodes, {} edges", g.node_count(), g.edge_count());
    write_file(out, &doc)
}

fn layout_cmd(graph: &Path, seed: u64, iterations: u32, out: &Path) -> Result<()> {
    let input = read_document(graph)?;
    if input.graph.node_count() == 0 {
        let bytes = std::fs::read(graph).map_err(|e| CliError::Io(graph.into(), e))?;
        return write_file(out, &bytes);
    }
    let params = LayoutParams {
        seed,
        max_iterations: iterations,
        ..Default::default()
    };
    let state = run_layout(&input.graph, &params).map_err(|e| CliError::Usage(e.to_string()))?;
    eprintln!("layout stopped after {} iterations", state.iteration);
    let doc_params = DocumentParams {
        layout: Some(params),
        ..input.params
    };
    let doc = export_graph(&input.graph, &state, &input.attrs, doc_params)
        .map_err(|e| CliError::Document(out.into(), e))?;
    write_file(out, &doc)
}

fn a2gr(graph: &Path, center: &str, depth: usize, out: &Path) -> Result<()> {
    let view = read_document(graph)?;
    let sub = view.neighborhood(center, depth).map_err(|e| match e {
        GraphError::NodeNotFound(id) => {
            CliError::NotFound(format!("node {id:?} is not in {}", graph.display()))
        }
        other => CliError::Usage(other.to_string()),
    })?;
    eprintln!(
        "{} nodes, {} edges",
        sub.graph.node_count(),
        sub.graph.edge_count()
    );
    write_file(
        out,
        &sub.to_bytes()
            .map_err(|e| CliError::Document(out.into(), e))?,
    )
}

fn serve(graphs: &Path, pairs: Option<&Path>, config: ServiceConfig) -> Result<()> {
    let mut registry = GraphRegistry::new();
    if let Some(p) = pairs {
        registry = registry.with_source(read_pairs(p)?);
    }
    let count = registry.load_dir(graphs).map_err(|e| match e {
        collab_server::ServiceError::Io(_, err) => CliError::Io(graphs.into(), err),
        collab_server::ServiceError::Document { path, source } => {
            CliError::Document(path.into(), source)
        }
    })?;
    let listen = config.listen;
    eprintln!(
        "loaded {count} graphs from {}; listening on {listen}",
        graphs.display()
    );
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(graphs.into(), e))?;
    rt.block_on(collab_server::run(Arc::new(registry), config))
        .map_err(|e| CliError::Io(listen.to_string().into(), e))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            links,
            aliases,
            min_authors,
            out,
        } => ingest(&links, aliases.as_deref(), min_authors, &out),
        Command::Project {
            pairs,
            mode,
            min_degree,
            min_shared,
            drop_isolated,
            allow_empty,
            out,
        } => {
            let params = ProjectionParams::new(mode.into(), min_degree, min_shared)
                .drop_isolated(drop_isolated);
            project_cmd(&pairs, params, allow_empty, &out)
        }
        Command::Layout {
            graph,
            seed,
            iterations,
            out,
        } => layout_cmd(&graph, seed, iterations, &out),
        Command::A2gr {
            graph,
            center,
            depth,
            out,
        } => a2gr(&graph, &center, depth, &out),
        Command::Serve {
            graphs,
            pairs,
            listen,
            node_cap,
            static_dir,
        } => {
            tracing_subscriber::fmt()
                .with_writer(std::io::stderr)
                .init();
            serve(
                &graphs,
                pairs.as_deref(),
                ServiceConfig {
                    listen,
                    node_cap,
                    static_dir,
                },
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
