//! Copy-on-write registry of immutable graph snapshots.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use collab_core::export::{DocumentParams, ExportError, GraphDocument, ImportedGraph};
use collab_core::graph::{BipartiteGraph, Mode};
use collab_core::layout::{render_attributes, LayoutState, RenderAttributes};
use collab_core::ProjectedGraph;
use parking_lot::RwLock;
use serde::Serialize;

use crate::ServiceError;

/// One registered graph. Never mutated after construction.
#[derive(Debug)]
pub struct Snapshot {
    pub view: ImportedGraph,
    /// The document as parsed entries, indexed like `view.graph.nodes()`.
    pub document: GraphDocument,
    /// Serialized `document`, served verbatim.
    pub bytes: Arc<[u8]>,
}

impl Snapshot {
    pub fn new(
        graph: ProjectedGraph,
        layout: LayoutState,
        attrs: RenderAttributes,
        params: DocumentParams,
    ) -> Result<Self, ExportError> {
        let document = GraphDocument::build(&graph, &layout, &attrs, params)?;
        let bytes = document.to_bytes().into();
        Ok(Snapshot {
            view: ImportedGraph {
                graph,
                layout,
                attrs,
                params,
            },
            document,
            bytes,
        })
    }

    /// A graph with every node at the origin.
    pub fn unpositioned(
        graph: ProjectedGraph,
        params: DocumentParams,
    ) -> Result<Self, ExportError> {
        let layout = LayoutState::from_positions(vec![[0.0, 0.0]; graph.node_count()], 0);
        let attrs = render_attributes(&graph);
        Self::new(graph, layout, attrs, params)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ExportError> {
        let imported = collab_core::import_graph(bytes)?;
        Self::new(
            imported.graph,
            imported.layout,
            imported.attrs,
            imported.params,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub id: String,
    pub mode: Mode,
    pub node_count: usize,
    pub edge_count: usize,
}

type SnapshotMap = BTreeMap<String, Arc<Snapshot>>;

/// Readers clone the current `Arc` and never block writers for long; a
/// writer builds a new map and swaps it in.
#[derive(Debug, Default)]
pub struct GraphRegistry {
    snapshots: RwLock<Arc<SnapshotMap>>,
    source: Option<Arc<BipartiteGraph>>,
    next_id: AtomicU64,
}

impl GraphRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_source(mut self, source: BipartiteGraph) -> Self {
        self.source = Some(Arc::new(source));
        self
    }

    pub fn source(&self) -> Option<&Arc<BipartiteGraph>> {
        self.source.as_ref()
    }

    pub fn current(&self) -> Arc<SnapshotMap> {
        self.snapshots.read().clone()
    }

    pub fn get(&self, id: &str) -> Option<Arc<Snapshot>> {
        self.snapshots.read().get(id).cloned()
    }

    pub fn list(&self) -> Vec<GraphSummary> {
        self.current()
            .iter()
            .map(|(id, s)| GraphSummary {
                id: id.clone(),
                mode: s.view.graph.mode(),
                node_count: s.view.graph.node_count(),
                edge_count: s.view.graph.edge_count(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.snapshots.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Registers `snapshot` under `id`, replacing any previous one.
    pub fn insert(&self, id: impl Into<String>, snapshot: Snapshot) {
        let snapshot = Arc::new(snapshot);
        let mut guard = self.snapshots.write();
        let mut next = SnapshotMap::clone(&guard);
        next.insert(id.into(), snapshot);
        *guard = Arc::new(next);
    }

    /// Registers under a fresh `proj-N` id and returns it.
    pub fn insert_fresh(&self, snapshot: Snapshot) -> String {
        let snapshot = Arc::new(snapshot);
        let mut guard = self.snapshots.write();
        let id = loop {
            let id = format!("proj-{}", self.next_id.fetch_add(1, Ordering::Relaxed) + 1);
            // skip ids already taken by loaded files
            if !guard.contains_key(&id) {
                break id;
            }
        };
        let mut next = SnapshotMap::clone(&guard);
        next.insert(id.clone(), snapshot);
        *guard = Arc::new(next);
        id
    }

    /// Loads every `*.graph.json` in `dir`; the id is the file name without
    /// that extension.
    pub fn load_dir(&self, dir: &Path) -> Result<usize, ServiceError> {
        let mut loaded = Vec::new();
        for entry in
            std::fs::read_dir(dir).map_err(|e| ServiceError::Io(dir.display().to_string(), e))?
        {
            let path = entry
                .map_err(|e| ServiceError::Io(dir.display().to_string(), e))?
                .path();
            let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
                continue;
            };
            let Some(id) = name.strip_suffix(collab_core::export::FILE_EXTENSION) else {
                continue;
            };
            let bytes = std::fs::read(&path)
                .map_err(|e| ServiceError::Io(path.display().to_string(), e))?;
            let snapshot =
                Snapshot::from_bytes(&bytes).map_err(|source| ServiceError::Document {
                    path: path.display().to_string(),
                    source,
                })?;
            loaded.push((id.to_owned(), snapshot));
        }
        let count = loaded.len();
        let mut guard = self.snapshots.write();
        let mut next = SnapshotMap::clone(&guard);
        for (id, s) in loaded {
            next.insert(id, Arc::new(s));
        }
        *guard = Arc::new(next);
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use collab_core::graph::{ProjectedEdge, ProjectedNode};

    fn tiny(n: usize) -> Snapshot {
        let nodes = (0..n)
            .map(|i| ProjectedNode {
                id: format!("n{i}"),
                counterpart_count: 1,
            })
            .collect();
        let edges = (1..n as u32)
            .map(|i| ProjectedEdge {
                source: 0,
                target: i,
                weight: 1,
            })
            .collect();
        Snapshot::unpositioned(
            ProjectedGraph::new(Mode::Author, nodes, edges).unwrap(),
            DocumentParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn fresh_ids_skip_taken_ones() {
        let r = GraphRegistry::new();
        r.insert("proj-1", tiny(1));
        assert_eq!(r.insert_fresh(tiny(2)), "proj-2");
        assert_eq!(r.insert_fresh(tiny(3)), "proj-3");
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn readers_keep_their_snapshot() {
        let r = GraphRegistry::new();
        r.insert("a", tiny(2));
        let before = r.current();
        r.insert("a", tiny(4));
        assert_eq!(before["a"].view.graph.node_count(), 2);
        assert_eq!(r.get("a").unwrap().view.graph.node_count(), 4);
        let list = r.list();
        assert_eq!(
            list,
            vec![GraphSummary {
                id: "a".into(),
                mode: Mode::Author,
                node_count: 4,
                edge_count: 3
            }]
        );
    }
}
