//! One-mode projection of the bipartite graph.

use serde::{Deserialize, Serialize};

use crate::par::Execution;

use super::bipartite::{BipartiteGraph, Csr};
use super::projected::{ProjectedEdge, ProjectedGraph, ProjectedNode};
use super::{GraphError, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionParams {
    pub mode: Mode,
    /// Minimum counterpart count for a node to survive.
    pub min_degree: u32,
    /// Minimum number of shared counterparts for an edge to survive.
    pub min_shared: u32,
    pub drop_isolated: bool,
}

impl ProjectionParams {
    pub fn new(mode: Mode, min_degree: u32, min_shared: u32) -> Self {
        Self {
            mode,
            min_degree,
            min_shared,
            drop_isolated: false,
        }
    }

    pub fn drop_isolated(mut self, drop: bool) -> Self {
        self.drop_isolated = drop;
        self
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.min_degree == 0 {
            return Err(GraphError::InvalidParams("min_degree must be at least 1"));
        }
        if self.min_shared == 0 {
            return Err(GraphError::InvalidParams("min_shared must be at least 1"));
        }
        Ok(())
    }
}

pub fn project(
    bg: &BipartiteGraph,
    params: &ProjectionParams,
) -> Result<ProjectedGraph, GraphError> {
    project_with(bg, params, Execution::default())
}

/// Node filter on counterpart count, then pairwise shared-counterpart
/// counting, then the edge-weight filter, then (optionally) isolated-node
/// removal. Shared counterparts are counted over the full opposite side.
pub fn project_with(
    bg: &BipartiteGraph,
    params: &ProjectionParams,
    exec: Execution,
) -> Result<ProjectedGraph, GraphError> {
    params.validate()?;
    let mode = params.mode;
    let ids = bg.nodes(mode);
    let other = bg.nodes(mode.other()).len();

    let survivors: Vec<u32> = (0..ids.len())
        .filter(|&u| bg.counterparts(mode, u).len() >= params.min_degree as usize)
        .map(|u| u as u32)
        .collect();
    let mut local = vec![u32::MAX; ids.len()];
    for (i, &u) in survivors.iter().enumerate() {
        local[u as usize] = i as u32;
    }

    // For each counterpart, its surviving members in local numbering.
    let members = Csr::from_sorted_edges(
        other,
        (0..other).flat_map(|c| {
            let local = &local;
            bg.counterparts(mode.other(), c)
                .iter()
                .filter_map(move |&u| {
                    let l = local[u as usize];
                    (l != u32::MAX).then_some((c as u32, l))
                })
        }),
    );

    let n = survivors.len();
    let min_shared = params.min_shared;
    // Per-source accumulation into a dense counter that is flushed after each
    // source node, so memory stays O(n) per worker regardless of hub sizes.
    let rows: Vec<Vec<(u32, u32)>> = exec.map_range_with(
        n,
        || (vec![0u32; n], Vec::<u32>::new()),
        |(counts, touched), i| {
            let u = survivors[i] as usize;
            for &c in bg.counterparts(mode, u) {
                let row = members.row(c as usize);
                let after = row.partition_point(|&v| v <= i as u32);
                for &v in &row[after..] {
                    let slot = &mut counts[v as usize];
                    if *slot == 0 {
                        touched.push(v);
                    }
                    *slot += 1;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::new();
            for &v in touched.iter() {
                let w = std::mem::take(&mut counts[v as usize]);
                if w >= min_shared {
                    out.push((v, w));
                }
            }
            touched.clear();
            out
        },
    );

    let mut keep: Vec<bool> = vec![!params.drop_isolated; n];
    if params.drop_isolated {
        for (i, row) in rows.iter().enumerate() {
            if !row.is_empty() {
                keep[i] = true;
            }
            for &(v, _) in row {
                keep[v as usize] = true;
            }
        }
    }
    let mut final_index = vec![u32::MAX; n];
    let mut nodes = Vec::new();
    for i in 0..n {
        if keep[i] {
            final_index[i] = nodes.len() as u32;
            let u = survivors[i] as usize;
            nodes.push(ProjectedNode {
                id: ids[u].clone(),
                counterpart_count: bg.counterparts(mode, u).len() as u32,
            });
        }
    }
    let edges = rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            let fi = &final_index;
            row.iter().map(move |&(v, w)| ProjectedEdge {
                source: fi[i],
                target: fi[v as usize],
                weight: w,
            })
        })
        .collect();

    Ok(ProjectedGraph::from_sorted_parts(mode, nodes, edges))
}

/// Same-mode neighbour lists over the unthresholded graph, indexed like
/// `bg.nodes(mode)`.
pub fn adjacency_maps(bg: &BipartiteGraph, mode: Mode) -> Vec<Vec<u32>> {
    adjacency_maps_with(bg, mode, Execution::default())
}

pub fn adjacency_maps_with(bg: &BipartiteGraph, mode: Mode, exec: Execution) -> Vec<Vec<u32>> {
    let n = bg.nodes(mode).len();
    exec.map_range_with(
        n,
        || vec![false; n],
        |mark, u| {
            let mut out = Vec::new();
            for &c in bg.counterparts(mode, u) {
                for &v in bg.counterparts(mode.other(), c as usize) {
                    if v as usize != u && !mark[v as usize] {
                        mark[v as usize] = true;
                        out.push(v);
                    }
                }
            }
            for &v in &out {
                mark[v as usize] = false;
            }
            out.sort_unstable();
            out
        },
    )
}
