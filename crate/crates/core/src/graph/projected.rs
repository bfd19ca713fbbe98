use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{GraphError, Mode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedNode {
    pub id: String,
    /// Bipartite degree before any thresholding.
    pub counterpart_count: u32,
}

/// Undirected weighted edge with `source < target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectedEdge {
    pub source: u32,
    pub target: u32,
    pub weight: u32,
}

/// One-mode weighted graph. Nodes are sorted by id, so node index order and
/// id order coincide; edges are sorted by `(source, target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedGraph {
    mode: Mode,
    nodes: Vec<ProjectedNode>,
    edges: Vec<ProjectedEdge>,
    // (neighbour, weight) per node, sorted by neighbour.
    adj_offsets: Vec<usize>,
    adj: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub node_count: u64,
    pub edge_count: u64,
    pub total_weight: u64,
    pub max_weighted_degree: u64,
}

impl ProjectedGraph {
    pub fn empty(mode: Mode) -> Self {
        Self::from_sorted_parts(mode, Vec::new(), Vec::new())
    }

    /// Validating constructor. Nodes may come in any order; edges refer to
    /// positions in `nodes` and may have either orientation.
    pub fn new(
        mode: Mode,
        mut nodes: Vec<ProjectedNode>,
        edges: Vec<ProjectedEdge>,
    ) -> Result<Self, GraphError> {
        let n = nodes.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| nodes[a].id.cmp(&nodes[b].id));
        for w in order.windows(2) {
            if nodes[w[0]].id == nodes[w[1]].id {
                return Err(GraphError::DuplicateNode(nodes[w[0]].id.clone()));
            }
        }
        let mut rank = vec![0u32; n];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new as u32;
        }

        let mut canon = Vec::with_capacity(edges.len());
        for e in edges {
            let (s, t) = (e.source as usize, e.target as usize);
            if s >= n || t >= n {
                return Err(GraphError::DanglingEdge(e.source.max(e.target)));
            }
            if s == t {
                return Err(GraphError::SelfLoop(nodes[s].id.clone()));
            }
            if e.weight == 0 {
                return Err(GraphError::ZeroWeight);
            }
            let (a, b) = (rank[s], rank[t]);
            canon.push(ProjectedEdge {
                source: a.min(b),
                target: a.max(b),
                weight: e.weight,
            });
        }
        canon.sort_unstable();
        for w in canon.windows(2) {
            if (w[0].source, w[0].target) == (w[1].source, w[1].target) {
                let (s, t) = (order[w[0].source as usize], order[w[0].target as usize]);
                return Err(GraphError::DuplicateEdge(
                    nodes[s].id.clone(),
                    nodes[t].id.clone(),
                ));
            }
        }

        let mut slots: Vec<Option<ProjectedNode>> = nodes.drain(..).map(Some).collect();
        let sorted = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        Ok(Self::from_sorted_parts(mode, sorted, canon))
    }

    /// Nodes already sorted by id, edges canonical and sorted.
    pub(crate) fn from_sorted_parts(
        mode: Mode,
        nodes: Vec<ProjectedNode>,
        edges: Vec<ProjectedEdge>,
    ) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0].id < w[1].id));
        debug_assert!(edges
            .windows(2)
            .all(|w| (w[0].source, w[0].target) < (w[1].source, w[1].target)));
        debug_assert!(edges.iter().all(|e| e.source < e.target));

        let n = nodes.len();
        let mut adj_offsets = vec![0usize; n + 1];
        for e in &edges {
            adj_offsets[e.source as usize + 1] += 1;
            adj_offsets[e.target as usize + 1] += 1;
        }
        for i in 0..n {
            adj_offsets[i + 1] += adj_offsets[i];
        }
        let mut fill = adj_offsets.clone();
        let mut adj = vec![(0u32, 0u32); adj_offsets[n]];
        // Rows fill in edge order; sort each one afterwards.
        for e in &edges {
            adj[fill[e.source as usize]] = (e.target, e.weight);
            fill[e.source as usize] += 1;
            adj[fill[e.target as usize]] = (e.source, e.weight);
            fill[e.target as usize] += 1;
        }
        for i in 0..n {
            adj[adj_offsets[i]..adj_offsets[i + 1]].sort_unstable();
        }
        ProjectedGraph {
            mode,
            nodes,
            edges,
            adj_offsets,
            adj,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn nodes(&self) -> &[ProjectedNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[ProjectedEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok()
    }

    /// `(neighbour, weight)` pairs of node `i`, sorted by neighbour.
    pub fn neighbors(&self, i: usize) -> &[(u32, u32)] {
        &self.adj[self.adj_offsets[i]..self.adj_offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj_offsets[i + 1] - self.adj_offsets[i]
    }

    pub fn weighted_degree_at(&self, i: usize) -> u64 {
        self.neighbors(i).iter().map(|&(_, w)| w as u64).sum()
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, id: &str) -> Result<u64, GraphError> {
        let i = self
            .index_of(id)
            .ok_or_else(|| GraphError::NodeNotFound(id.to_owned()))?;
        Ok(self.weighted_degree_at(i))
    }

    pub fn weighted_degrees(&self) -> Vec<u64> {
        (0..self.nodes.len())
            .map(|i| self.weighted_degree_at(i))
            .collect()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            node_count: self.nodes.len() as u64,
            edge_count: self.edges.len() as u64,
            total_weight: self.edges.iter().map(|e| e.weight as u64).sum(),
            max_weighted_degree: self.weighted_degrees().into_iter().max().unwrap_or(0),
        }
    }

    /// Node indices within `depth` hops of `center`, ascending.
    pub fn ball(&self, center: usize, depth: usize) -> Vec<u32> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::new();
        dist[center] = 0;
        queue.push_back(center);
        let mut seen = vec![center as u32];
        while let Some(u) = queue.pop_front() {
            if dist[u] == depth {
                continue;
            }
            for &(v, _) in self.neighbors(u) {
                let v = v as usize;
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    seen.push(v as u32);
                    queue.push_back(v);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    /// Subgraph induced by `keep` (ascending node indices).
    pub fn induced_subgraph(&self, keep: &[u32]) -> ProjectedGraph {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let mut remap = vec![u32::MAX; self.nodes.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let nodes = keep
            .iter()
            .map(|&i| self.nodes[i as usize].clone())
            .collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let (s, t) = (remap[e.source as usize], remap[e.target as usize]);
                (s != u32::MAX && t != u32::MAX).then_some(ProjectedEdge {
                    source: s,
                    target: t,
                    weight: e.weight,
                })
            })
            .collect();
        Self::from_sorted_parts(self.mode, nodes, edges)
    }
}

/// Induced subgraph on every node at most `depth` hops from `center`.
pub fn neighborhood(
    g: &ProjectedGraph,
    center: &str,
    depth: usize,
) -> Result<ProjectedGraph, GraphError> {
    let c = g
        .index_of(center)
        .ok_or_else(|| GraphError::NodeNotFound(center.to_owned()))?;
    Ok(g.induced_subgraph(&g.ball(c, depth)))
}

/// Case-insensitive substring search, strongest weighted degree first, ties
/// by id. An empty query matches nothing.
pub fn search_nodes<'g>(g: &'g ProjectedGraph, query: &str, limit: usize) -> Vec<&'g str> {
    search_node_indices(g, query, limit)
        .into_iter()
        .map(|i| g.nodes()[i].id.as_str())
        .collect()
}

pub fn search_node_indices(g: &ProjectedGraph, query: &str, limit: usize) -> Vec<usize> {
    if query.is_empty() || limit == 0 {
        return Vec::new();
    }
    let needle = query.to_lowercase();
    let mut hits: Vec<(u64, usize)> = g
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.id.to_lowercase().contains(&needle))
        .map(|(i, _)| (g.weighted_degree_at(i), i))
        .collect();
    // Index order is id order.
    hits.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    hits.truncate(limit);
    hits.into_iter().map(|(_, i)| i).collect()
}

pub fn graph_stats(g: &ProjectedGraph) -> GraphStats {
    g.stats()
}
