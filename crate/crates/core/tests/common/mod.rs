//! Independent oracles and random fixtures shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use collab_core::graph::{Mode, ProjectedEdge, ProjectedGraph, ProjectedNode, ProjectionParams};
use collab_core::ingest::LinkRecord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `(project, author)` pairs: every possible pair is present with
/// probability `density`.
pub fn random_pairs(
    rng: &mut ChaCha8Rng,
    projects: usize,
    authors: usize,
    density: f64,
) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for p in 0..projects {
        for a in 0..authors {
            if rng.random::<f64>() < density {
                out.push((format!("p{p:03}"), format!("a{a:03}@x.org")));
            }
        }
    }
    out
}

/// Expected projection as `id -> counterpart_count` and
/// `(id_u, id_v) -> weight` with `id_u < id_v`.
pub struct OracleProjection {
    pub nodes: BTreeMap<String, u32>,
    pub edges: BTreeMap<(String, String), u32>,
}

/// Enumerates every same-mode pair and intersects counterpart sets.
pub fn oracle_project(pairs: &[(String, String)], params: &ProjectionParams) -> OracleProjection {
    let mut counterparts: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (p, a) in pairs {
        let (node, other) = match params.mode {
            Mode::Author => (a, p),
            Mode::Project => (p, a),
        };
        counterparts
            .entry(node.clone())
            .or_default()
            .insert(other.clone());
    }
    let survivors: Vec<(&String, &BTreeSet<String>)> = counterparts
        .iter()
        .filter(|(_, c)| c.len() >= params.min_degree as usize)
        .collect();
    let mut edges = BTreeMap::new();
    for i in 0..survivors.len() {
        for j in i + 1..survivors.len() {
            let shared = survivors[i].1.intersection(survivors[j].1).count() as u32;
            if shared >= params.min_shared && shared > 0 {
                edges.insert((survivors[i].0.clone(), survivors[j].0.clone()), shared);
            }
        }
    }
    let mut nodes: BTreeMap<String, u32> = survivors
        .iter()
        .map(|(id, c)| ((*id).clone(), c.len() as u32))
        .collect();
    if params.drop_isolated {
        let touched: BTreeSet<&String> = edges.keys().flat_map(|(a, b)| [a, b]).collect();
        nodes.retain(|id, _| touched.contains(id));
    }
    OracleProjection { nodes, edges }
}

pub fn as_oracle(g: &ProjectedGraph) -> OracleProjection {
    let ids = |i: u32| g.nodes()[i as usize].id.clone();
    OracleProjection {
        nodes: g
            .nodes()
            .iter()
            .map(|n| (n.id.clone(), n.counterpart_count))
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| ((ids(e.source), ids(e.target)), e.weight))
            .collect(),
    }
}

pub fn oracle_eq(a: &OracleProjection, b: &OracleProjection) -> bool {
    a.nodes == b.nodes && a.edges == b.edges
}

/// Erdos-Renyi style projected graph with random weights.
pub fn random_projected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ProjectedGraph {
    let nodes = (0..n)
        .map(|i| ProjectedNode {
            id: format!("node{i:04}"),
            counterpart_count: rng.random_range(1..50),
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random::<f64>() < p {
                edges.push(ProjectedEdge {
                    source: u,
                    target: v,
                    weight: rng.random_range(1..10),
                });
            }
        }
    }
    ProjectedGraph::new(Mode::Author, nodes, edges).unwrap()
}

/// Node ids at hop distance <= depth, via a hash-map adjacency built from
/// the raw edge list.
pub fn oracle_ball(g: &ProjectedGraph, center: &str, depth: usize) -> BTreeSet<String> {
    let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in g.edges() {
        let (s, t) = (
            g.nodes()[e.source as usize].id.as_str(),
            g.nodes()[e.target as usize].id.as_str(),
        );
        adj.entry(s).or_default().push(t);
        adj.entry(t).or_default().push(s);
    }
    let mut dist: HashMap<&str, usize> = HashMap::new();
    dist.insert(center, 0);
    let mut q = VecDeque::from([center]);
    while let Some(u) = q.pop_front() {
        let d = dist[u];
        if d == depth {
            continue;
        }
        for &v in adj.get(u).map(Vec::as_slice).unwrap_or(&[]) {
            if !dist.contains_key(v) {
                dist.insert(v, d + 1);
                q.push_back(v);
            }
        }
    }
    dist.keys().map(|s| s.to_string()).collect()
}

/// Edges of `g` whose both endpoints are in `keep`, as id triples.
pub fn oracle_induced_edges(
    g: &ProjectedGraph,
    keep: &BTreeSet<String>,
) -> BTreeSet<(String, String, u32)> {
    g.edges()
        .iter()
        .map(|e| {
            (
                g.nodes()[e.source as usize].id.clone(),
                g.nodes()[e.target as usize].id.clone(),
                e.weight,
            )
        })
        .filter(|(s, t, _)| keep.contains(s) && keep.contains(t))
        .collect()
}

pub fn edge_triples(g: &ProjectedGraph) -> BTreeSet<(String, String, u32)> {
    g.edges()
        .iter()
        .map(|e| {
            (
                g.nodes()[e.source as usize].id.clone(),
                g.nodes()[e.target as usize].id.clone(),
                e.weight,
            )
        })
        .collect()
}

/// O(n^2) repulsion: `scaling * m_i * m_j / d` along the separation.
pub fn exact_repulsion(pos: &[[f64; 2]], mass: &[f64], scaling: f64) -> Vec<[f64; 2]> {
    let n = pos.len();
    let mut out = vec![[0.0; 2]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dx = pos[i][0] - pos[j][0];
            let dy = pos[i][1] - pos[j][1];
            let d2 = dx * dx + dy * dy;
            if d2 > 0.0 {
                let f = scaling * mass[i] * mass[j] / d2;
                out[i][0] += dx * f;
                out[i][1] += dy * f;
            }
        }
    }
    out
}

pub fn rel_err(a: [f64; 2], b: [f64; 2]) -> f64 {
    let diff = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let norm = (b[0] * b[0] + b[1] * b[1]).sqrt();
    if norm == 0.0 {
        diff
    } else {
        diff / norm
    }
}

/// Two k-cliques joined by a single bridge edge between node 0 and node k.
pub fn barbell(k: usize) -> ProjectedGraph {
    let nodes = (0..2 * k)
        .map(|i| ProjectedNode {
            id: format!("n{i:03}"),
            counterpart_count: 1,
        })
        .collect();
    let mut edges = Vec::new();
    for side in 0..2 {
        let base = (side * k) as u32;
        for u in 0..k as u32 {
            for v in u + 1..k as u32 {
                edges.push(ProjectedEdge {
                    source: base + u,
                    target: base + v,
                    weight: 1,
                });
            }
        }
    }
    edges.push(ProjectedEdge {
        source: 0,
        target: k as u32,
        weight: 1,
    });
    ProjectedGraph::new(Mode::Author, nodes, edges).unwrap()
}

/// (mean intra-clique distance, mean inter-clique distance).
pub fn barbell_separation(positions: &[[f64; 2]], k: usize) -> (f64, f64) {
    let d = |a: usize, b: usize| {
        let (p, q) = (positions[a], positions[b]);
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
    };
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0usize, 0.0, 0usize);
    for a in 0..2 * k {
        for b in a + 1..2 * k {
            if (a < k) == (b < k) {
                intra += d(a, b);
                ni += 1;
            } else {
                inter += d(a, b);
                nx += 1;
            }
        }
    }
    (intra / ni as f64, inter / nx as f64)
}

/// Random link records with injected invalid ids, alias targets and
/// duplicates. Returns the records and the raw alias pairs.
pub fn dirty_links(rng: &mut ChaCha8Rng, rows: usize) -> (Vec<LinkRecord>, Vec<(String, String)>) {
    let authors: Vec<String> = (0..60)
        .map(|i| format!("Dev{i} <dev{i}@corp{}.com>", i % 4))
        .collect();
    let invalid = ["^^ <^^>", "nobody", "x@localhost", "<@>", "root@host"];
    let mut aliases = Vec::new();
    // chains dev40 -> dev20 -> dev0 style, plus an occasional cycle
    for i in 40..60 {
        aliases.push((authors[i].clone(), authors[i - 20].clone()));
    }
    for i in 20..30 {
        aliases.push((authors[i].clone(), authors[i - 20].clone()));
    }
    aliases.push((authors[5].clone(), authors[6].clone()));
    aliases.push((authors[6].clone(), authors[5].clone()));

    let mut records = Vec::with_capacity(rows);
    for _ in 0..rows {
        let project = format!("proj{}", rng.random_range(0..25));
        let author = if rng.random::<f64>() < 0.1 {
            invalid[rng.random_range(0..invalid.len())].to_string()
        } else {
            authors[rng.random_range(0..authors.len())].clone()
        };
        records.push(LinkRecord::new(project, author));
        if rng.random::<f64>() < 0.1 {
            records.push(records.last().unwrap().clone());
        }
    }
    (records, aliases)
}
