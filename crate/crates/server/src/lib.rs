//! HTTP API over a registry of collaboration graphs.
//!
//! - `GET  /api/graphs` lists `{id, mode, node_count, edge_count}`
//! - `GET  /api/graphs/{id}` returns the stored graph document
//! - `GET  /api/graphs/{id}/search?q=&limit=` returns matching node entries
//! - `GET  /api/graphs/{id}/nodes/{node}/neighborhood?depth=` returns a subgraph document
//! - `POST /api/projections` projects the loaded bipartite source and registers the result
//!
//! Errors are `{"error": ..., "detail": ...}` JSON bodies.

mod registry;
mod routes;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use collab_core::export::ExportError;
use tokio::net::TcpListener;

pub use registry::{GraphRegistry, GraphSummary, Snapshot};
pub use routes::{router, ProjectionRequest};

pub const DEFAULT_NODE_CAP: usize = 50_000;
pub const DEFAULT_SEARCH_LIMIT: usize = 20;
pub const MAX_SEARCH_LIMIT: usize = 200;
pub const DEFAULT_DEPTH: usize = 1;
pub const MAX_DEPTH: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{path}: {source}")]
    Document {
        path: String,
        #[source]
        source: ExportError,
    },
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    /// Projections with more nodes than this are rejected with 422.
    pub node_cap: usize,
    /// Served for any path outside `/api`.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            node_cap: DEFAULT_NODE_CAP,
            static_dir: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AppState {
    pub registry: Arc<GraphRegistry>,
    pub node_cap: usize,
    // tokio's mutex is fair, so queued projection jobs run in arrival order
    jobs: Arc<tokio::sync::Mutex<()>>,
}

impl AppState {
    pub fn new(registry: Arc<GraphRegistry>, node_cap: usize) -> Self {
        AppState {
            registry,
            node_cap,
            jobs: Arc::default(),
        }
    }
}

/// Serves on an already bound listener until the future is dropped.
pub async fn serve(
    listener: TcpListener,
    registry: Arc<GraphRegistry>,
    config: &ServiceConfig,
) -> std::io::Result<()> {
    let app = router(
        AppState::new(registry, config.node_cap),
        config.static_dir.as_deref(),
    );
    axum::serve(listener, app).await
}

pub async fn run(registry: Arc<GraphRegistry>, config: ServiceConfig) -> std::io::Result<()> {
    let listener = TcpListener::bind(config.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, graphs = registry.len(), "listening");
    serve(listener, registry, &config).await
}
