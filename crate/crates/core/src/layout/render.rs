use crate::graph::ProjectedGraph;

pub const SIZE_MIN: f64 = 2.0;
pub const SIZE_MAX: f64 = 20.0;

/// Per-node drawing attributes, indexed like the graph's nodes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RenderAttributes {
    /// Radius, linear in weighted degree over `[SIZE_MIN, SIZE_MAX]`.
    pub sizes: Vec<f64>,
    /// Counterpart count rescaled to `[0, 1]`; higher is lighter.
    pub colors: Vec<f64>,
}

impl RenderAttributes {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }
}

fn rescale(values: &[f64], lo_out: f64, hi_out: f64, degenerate: f64) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return vec![degenerate; values.len()];
    }
    values
        .iter()
        .map(|&v| lo_out + (hi_out - lo_out) * (v - lo) / (hi - lo))
        .collect()
}

pub fn render_attributes(g: &ProjectedGraph) -> RenderAttributes {
    let wd: Vec<f64> = g.weighted_degrees().into_iter().map(|d| d as f64).collect();
    let cc: Vec<f64> = g
        .nodes()
        .iter()
        .map(|n| n.counterpart_count as f64)
        .collect();
    RenderAttributes {
        sizes: rescale(&wd, SIZE_MIN, SIZE_MAX, (SIZE_MIN + SIZE_MAX) / 2.0),
        colors: rescale(&cc, 0.0, 1.0, 0.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Mode, ProjectedEdge, ProjectedNode};

    fn graph(counts: &[u32], edges: &[(u32, u32, u32)]) -> ProjectedGraph {
        ProjectedGraph::new(
            Mode::Project,
            counts
                .iter()
                .enumerate()
                .map(|(i, &c)| ProjectedNode {
                    id: format!("p{i}"),
                    counterpart_count: c,
                })
                .collect(),
            edges
                .iter()
                .map(|&(s, t, w)| ProjectedEdge {
                    source: s,
                    target: t,
                    weight: w,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn degenerate() {
        let a = render_attributes(&graph(&[4, 4, 4], &[]));
        assert_eq!(a.sizes, vec![11.0; 3]);
        assert_eq!(a.colors, vec![0.5; 3]);
        assert!(render_attributes(&graph(&[], &[])).is_empty());
    }

    #[test]
    fn endpoints() {
        // weighted degrees 10, 10, 0
        let a = render_attributes(&graph(&[1, 3, 5], &[(0, 1, 10)]));
        assert_eq!(a.sizes, vec![20.0, 20.0, 2.0]);
        assert_eq!(a.colors, vec![0.0, 0.5, 1.0]);
    }
}
