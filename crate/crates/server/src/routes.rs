use std::collections::HashMap;
use std::path::Path;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use collab_core::export::{DocumentParams, NodeEntry};
use collab_core::graph::{project, search_node_indices, Mode, ProjectionParams};
use collab_core::layout::{render_attributes, run_layout, LayoutParams};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::{AppState, Snapshot, DEFAULT_DEPTH, DEFAULT_SEARCH_LIMIT, MAX_DEPTH, MAX_SEARCH_LIMIT};

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    error: &'static str,
    detail: String,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            error,
            detail: detail.into(),
        }
    }

    fn bad_request(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", detail)
    }

    fn not_found(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", detail)
    }

    fn internal(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", detail)
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    detail: &'a str,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(ErrorBody {
                error: self.error,
                detail: &self.detail,
            }),
        )
            .into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn json_bytes(bytes: impl Into<axum::body::Body>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], bytes.into()).into_response()
}

pub fn router(state: AppState, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/graphs", get(list_graphs))
        .route("/api/graphs/{id}", get(get_graph))
        .route("/api/graphs/{id}/search", get(search))
        .route(
            "/api/graphs/{id}/nodes/{node}/neighborhood",
            get(neighborhood),
        )
        .route("/api/projections", post(create_projection))
        .route("/api/{*rest}", get(unknown_route))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(unknown_route),
    }
}

async fn unknown_route() -> ApiError {
    ApiError::not_found("no such route")
}

async fn list_graphs(State(state): State<AppState>) -> Json<Vec<crate::GraphSummary>> {
    Json(state.registry.list())
}

fn lookup(state: &AppState, id: &str) -> ApiResult<std::sync::Arc<Snapshot>> {
    state
        .registry
        .get(id)
        .ok_or_else(|| ApiError::not_found(format!("unknown graph {id:?}")))
}

async fn get_graph(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Response> {
    let snap = lookup(&state, &id)?;
    Ok(json_bytes(Bytes::from_owner(snap.bytes.clone())))
}

fn parse_bounded(
    raw: Option<&String>,
    name: &str,
    default: usize,
    min: usize,
    max: usize,
) -> ApiResult<usize> {
    let Some(raw) = raw else {
        return Ok(default);
    };
    match raw.parse::<usize>() {
        Ok(v) if (min..=max).contains(&v) => Ok(v),
        _ => Err(ApiError::bad_request(format!(
            "{name} must be an integer in {min}..={max}, got {raw:?}"
        ))),
    }
}

async fn search(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Json<Vec<NodeEntry>>> {
    let snap = lookup(&state, &id)?;
    let q = query
        .get("q")
        .ok_or_else(|| ApiError::bad_request("missing query parameter q"))?;
    let limit = parse_bounded(
        query.get("limit"),
        "limit",
        DEFAULT_SEARCH_LIMIT,
        1,
        MAX_SEARCH_LIMIT,
    )?;
    let hits = search_node_indices(&snap.view.graph, q, limit);
    Ok(Json(
        hits.into_iter()
            .map(|i| snap.document.nodes[i].clone())
            .collect(),
    ))
}

async fn neighborhood(
    State(state): State<AppState>,
    UrlPath((id, node)): UrlPath<(String, String)>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let snap = lookup(&state, &id)?;
    let depth = parse_bounded(query.get("depth"), "depth", DEFAULT_DEPTH, 0, MAX_DEPTH)?;
    let sub = snap
        .view
        .neighborhood(&node, depth)
        .map_err(|_| ApiError::not_found(format!("unknown node {node:?} in graph {id:?}")))?;
    let doc = sub
        .to_bytes()
        .map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(json_bytes(doc))
}

/// Body of `POST /api/projections`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionRequest {
    pub mode: Mode,
    pub min_degree: u32,
    pub min_shared: u32,
    #[serde(default)]
    pub drop_isolated: bool,
    #[serde(default)]
    pub layout: bool,
}

#[derive(Serialize)]
struct Created {
    id: String,
}

enum JobError {
    TooLarge(usize),
    Failed(String),
}

async fn create_projection(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let source = state.registry.source().cloned().ok_or_else(|| {
        ApiError::new(
            StatusCode::CONFLICT,
            "no_source",
            "no bipartite source graph is loaded",
        )
    })?;
    let req: ProjectionRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("invalid body: {e}")))?;
    let params = ProjectionParams::new(req.mode, req.min_degree, req.min_shared)
        .drop_isolated(req.drop_isolated);
    params
        .validate()
        .map_err(|e| ApiError::bad_request(e.to_string()))?;

    let _job = state.jobs.lock().await;
    let cap = state.node_cap;
    let with_layout = req.layout;
    let job = tokio::task::spawn_blocking(move || -> Result<Snapshot, JobError> {
        let g = project(&source, &params).map_err(|e| JobError::Failed(e.to_string()))?;
        if g.node_count() > cap {
            return Err(JobError::TooLarge(g.node_count()));
        }
        let mut doc_params = DocumentParams {
            projection: Some(params),
            layout: None,
        };
        let snapshot = if with_layout {
            let lp = LayoutParams::default();
            let layout = run_layout(&g, &lp).map_err(|e| JobError::Failed(e.to_string()))?;
            doc_params.layout = Some(lp);
            let attrs = render_attributes(&g);
            Snapshot::new(g, layout, attrs, doc_params)
        } else {
            Snapshot::unpositioned(g, doc_params)
        };
        snapshot.map_err(|e| JobError::Failed(e.to_string()))
    });
    let snapshot = match job.await {
        Ok(Ok(s)) => s,
        Ok(Err(JobError::TooLarge(n))) => {
            return Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "too_large",
                format!("projection has {n} nodes, above the cap of {cap}; raise the thresholds"),
            ))
        }
        Ok(Err(JobError::Failed(e))) => return Err(ApiError::internal(e)),
        Err(e) => return Err(ApiError::internal(format!("projection job failed: {e}"))),
    };
    let id = state.registry.insert_fresh(snapshot);
    Ok((StatusCode::CREATED, Json(Created { id })).into_response())
}
