//! `.graph.json` documents: a projected graph together with its layout and
//! render attributes.

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{
    GraphError, GraphStats, Mode, ProjectedEdge, ProjectedGraph, ProjectedNode, ProjectionParams,
};
use crate::layout::{LayoutParams, LayoutState, RenderAttributes};

pub const SCHEMA_VERSION: u32 = 1;
pub const FILE_EXTENSION: &str = ".graph.json";

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("{what} covers {got} nodes but the graph has {expected}")]
    Coverage {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema_version {0} (supported: {SCHEMA_VERSION})")]
    UnsupportedVersion(u32),
    #[error("integrity error: {0}")]
    Integrity(String),
}

/// Rounds to 9 significant decimal digits.
pub fn round_sig9(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.8e}").parse().unwrap_or(v)
}

fn sig9<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig9(*v))
}

/// Parameters that produced the document; either part may be absent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DocumentParams {
    pub projection: Option<ProjectionParams>,
    pub layout: Option<LayoutParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentMeta {
    pub mode: Mode,
    pub params: DocumentParams,
    pub stats: GraphStats,
    pub schema_version: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: String,
    pub label: String,
    #[serde(serialize_with = "sig9")]
    pub x: f64,
    #[serde(serialize_with = "sig9")]
    pub y: f64,
    #[serde(serialize_with = "sig9")]
    pub size: f64,
    #[serde(serialize_with = "sig9")]
    pub color_scalar: f64,
    pub counterpart_count: u32,
    pub weighted_degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub source: String,
    pub target: String,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub meta: DocumentMeta,
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
}

/// Everything a document describes.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedGraph {
    pub graph: ProjectedGraph,
    pub layout: LayoutState,
    pub attrs: RenderAttributes,
    pub params: DocumentParams,
}

fn round_params(mut p: DocumentParams) -> DocumentParams {
    if let Some(l) = p.layout.as_mut() {
        l.scaling = round_sig9(l.scaling);
        l.gravity = round_sig9(l.gravity);
        l.theta = round_sig9(l.theta);
        l.tolerance = round_sig9(l.tolerance);
    }
    p
}

impl GraphDocument {
    pub fn build(
        g: &ProjectedGraph,
        layout: &LayoutState,
        attrs: &RenderAttributes,
        params: DocumentParams,
    ) -> Result<Self, ExportError> {
        let n = g.node_count();
        let check = |what, got| {
            if got == n {
                Ok(())
            } else {
                Err(ExportError::Coverage {
                    what,
                    expected: n,
                    got,
                })
            }
        };
        check("layout", layout.len())?;
        check("sizes", attrs.sizes.len())?;
        check("colors", attrs.colors.len())?;

        let wd = g.weighted_degrees();
        // Node index order is id order, and edges are sorted by index.
        let nodes = g
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, node)| NodeEntry {
                id: node.id.clone(),
                label: node.id.clone(),
                x: round_sig9(layout.positions[i][0]),
                y: round_sig9(layout.positions[i][1]),
                size: round_sig9(attrs.sizes[i]),
                color_scalar: round_sig9(attrs.colors[i]),
                counterpart_count: node.counterpart_count,
                weighted_degree: wd[i],
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeEntry {
                source: g.nodes()[e.source as usize].id.clone(),
                target: g.nodes()[e.target as usize].id.clone(),
                weight: e.weight,
            })
            .collect();
        Ok(GraphDocument {
            meta: DocumentMeta {
                mode: g.mode(),
                params: round_params(params),
                stats: g.stats(),
                schema_version: SCHEMA_VERSION,
            },
            nodes,
            edges,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("document serialization is infallible")
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ExportError> {
        // Check the version before the full schema so a future document
        // reports the version rather than a field mismatch.
        #[derive(Deserialize)]
        struct Probe {
            meta: ProbeMeta,
        }
        #[derive(Deserialize)]
        struct ProbeMeta {
            schema_version: u32,
        }
        let probe: Probe = serde_json::from_slice(bytes)?;
        if probe.meta.schema_version != SCHEMA_VERSION {
            return Err(ExportError::UnsupportedVersion(probe.meta.schema_version));
        }
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Rebuilds the graph, layout and attributes.
    pub fn into_parts(mut self) -> Result<ImportedGraph, ExportError> {
        self.nodes.sort_by(|a, b| a.id.cmp(&b.id));
        let index = |id: &str| self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok();
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (s, t) = match (index(&e.source), index(&e.target)) {
                (Some(s), Some(t)) => (s, t),
                _ => {
                    return Err(ExportError::Integrity(format!(
                        "edge {} -- {} references a missing node",
                        e.source, e.target
                    )))
                }
            };
            edges.push(ProjectedEdge {
                source: s as u32,
                target: t as u32,
                weight: e.weight,
            });
        }
        for n in &self.nodes {
            if !(n.x.is_finite()
                && n.y.is_finite()
                && n.size.is_finite()
                && n.color_scalar.is_finite())
            {
                return Err(ExportError::Integrity(format!(
                    "node {} has a non-finite attribute",
                    n.id
                )));
            }
        }
        let positions = self.nodes.iter().map(|n| [n.x, n.y]).collect();
        let attrs = RenderAttributes {
            sizes: self.nodes.iter().map(|n| n.size).collect(),
            colors: self.nodes.iter().map(|n| n.color_scalar).collect(),
        };
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| ProjectedNode {
                id: n.id,
                counterpart_count: n.counterpart_count,
            })
            .collect();
        let graph = ProjectedGraph::new(self.meta.mode, nodes, edges)
            .map_err(|e: GraphError| ExportError::Integrity(e.to_string()))?;
        let seed = self.meta.params.layout.map_or(0, |l| l.seed);
        Ok(ImportedGraph {
            graph,
            layout: LayoutState::from_positions(positions, seed),
            attrs,
            params: self.meta.params,
        })
    }
}

/// Serializes a graph with its layout and attributes. Output is
/// deterministic: nodes sorted by id, edges by (source, target).
pub fn export_graph(
    g: &ProjectedGraph,
    layout: &LayoutState,
    attrs: &RenderAttributes,
    params: DocumentParams,
) -> Result<Vec<u8>, ExportError> {
    Ok(GraphDocument::build(g, layout, attrs, params)?.to_bytes())
}

pub fn import_graph(bytes: &[u8]) -> Result<ImportedGraph, ExportError> {
    GraphDocument::from_bytes(bytes)?.into_parts()
}

impl ImportedGraph {
    /// Neighborhood of `center` within `depth` hops. Coordinates and render
    /// attributes are copied from this view rather than recomputed.
    pub fn neighborhood(&self, center: &str, depth: usize) -> Result<ImportedGraph, GraphError> {
        let c = self
            .graph
            .index_of(center)
            .ok_or_else(|| GraphError::NodeNotFound(center.to_owned()))?;
        let keep = self.graph.ball(c, depth);
        let pick = |v: &[f64]| keep.iter().map(|&i| v[i as usize]).collect::<Vec<_>>();
        Ok(ImportedGraph {
            graph: self.graph.induced_subgraph(&keep),
            layout: LayoutState::from_positions(
                keep.iter()
                    .map(|&i| self.layout.positions[i as usize])
                    .collect(),
                self.params.layout.map_or(0, |l| l.seed),
            ),
            attrs: RenderAttributes {
                sizes: pick(&self.attrs.sizes),
                colors: pick(&self.attrs.colors),
            },
            params: self.params,
        })
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, ExportError> {
        export_graph(&self.graph, &self.layout, &self.attrs, self.params)
    }
}
