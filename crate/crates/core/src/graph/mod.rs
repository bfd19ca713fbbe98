//! Bipartite contribution graph, one-mode projections and queries over them.

mod bipartite;
mod project;
mod projected;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bipartite::{build_bipartite, BipartiteGraph};
pub use project::{adjacency_maps, adjacency_maps_with, project, project_with, ProjectionParams};
pub use projected::{
    graph_stats, neighborhood, search_node_indices, search_nodes, GraphStats, ProjectedEdge,
    ProjectedGraph, ProjectedNode,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node not found: {0}")]
    NodeNotFound(String),
    #[error("invalid projection parameters: {0}")]
    InvalidParams(&'static str),
    #[error("duplicate node id: {0}")]
    DuplicateNode(String),
    #[error("duplicate edge: {0} -- {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on {0}")]
    SelfLoop(String),
    #[error("edge endpoint {0} out of range")]
    DanglingEdge(u32),
    #[error("edge weight must be positive")]
    ZeroWeight,
}

/// Which side of the bipartite graph becomes the node set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Author,
    Project,
}

impl Mode {
    pub fn other(self) -> Mode {
        match self {
            Mode::Author => Mode::Project,
            Mode::Project => Mode::Author,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Author => "author",
            Mode::Project => "project",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "author" => Ok(Mode::Author),
            "project" => Ok(Mode::Project),
            other => Err(format!(
                "unknown mode '{other}' (expected 'author' or 'project')"
            )),
        }
    }
}
