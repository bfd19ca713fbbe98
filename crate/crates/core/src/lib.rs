//! Collaboration graphs from project/author contribution records.
//!
//! The pipeline runs [`ingest`] (parse, alias, validate, dedup, filter),
//! [`graph`] (bipartite graph, one-mode projection, neighbourhoods, search),
//! [`layout`] (ForceAtlas2 with Barnes-Hut repulsion) and [`export`] (JSON
//! documents). Data-parallel loops go through [`par::Execution`]; build
//! without the default `parallel` feature for a purely sequential library.

pub mod export;
pub mod graph;
pub mod ingest;
pub mod layout;
pub mod par;
pub mod synth;

pub use export::{export_graph, import_graph, DocumentParams, GraphDocument, ImportedGraph};
pub use graph::{
    build_bipartite, neighborhood, project, search_nodes, BipartiteGraph, Mode, ProjectedGraph,
    ProjectionParams,
};
pub use ingest::{clean_links, parse_link_stream, AliasMap, CleanedLinkSet, LinkRecord};
pub use layout::{render_attributes, run_layout, LayoutParams, LayoutState, RenderAttributes};
pub use par::Execution;
