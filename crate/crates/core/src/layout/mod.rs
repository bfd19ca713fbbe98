//! ForceAtlas2 layout with Barnes-Hut repulsion, plus render attributes.

mod quadtree;
mod render;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::ProjectedGraph;
use crate::par::Execution;

pub use quadtree::repulsion_forces;
pub use render::{render_attributes, RenderAttributes, SIZE_MAX, SIZE_MIN};

const JITTER: f64 = 1e-6;
const CONVERGENCE_FACTOR: f64 = 1e-3;

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("layout state has {state} nodes but graph has {graph}")]
    Mismatch { state: usize, graph: usize },
    #[error("invalid layout parameters: {0}")]
    InvalidParams(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutParams {
    /// Repulsion coefficient.
    pub scaling: f64,
    pub gravity: f64,
    /// Barnes-Hut opening threshold.
    pub theta: f64,
    /// Jitter tolerance for the adaptive speed.
    pub tolerance: f64,
    pub linlog: bool,
    pub seed: u64,
    pub max_iterations: u32,
}

impl Default for LayoutParams {
    fn default() -> Self {
        Self {
            scaling: 2.0,
            gravity: 1.0,
            theta: 1.2,
            tolerance: 1.0,
            linlog: false,
            seed: 0,
            max_iterations: 1000,
        }
    }
}

impl LayoutParams {
    pub fn validate(&self) -> Result<(), LayoutError> {
        if !(self.scaling > 0.0 && self.scaling.is_finite()) {
            return Err(LayoutError::InvalidParams("scaling must be positive"));
        }
        if !(self.gravity >= 0.0 && self.gravity.is_finite()) {
            return Err(LayoutError::InvalidParams("gravity must be non-negative"));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(LayoutError::InvalidParams("theta must be positive"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(LayoutError::InvalidParams("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(LayoutError::InvalidParams(
                "max_iterations must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutState {
    pub positions: Vec<[f64; 2]>,
    prev_forces: Vec<[f64; 2]>,
    speed: f64,
    speed_efficiency: f64,
    pub iteration: u64,
    seed: u64,
}

impl LayoutState {
    /// State with fixed positions, e.g. read back from a document.
    pub fn from_positions(positions: Vec<[f64; 2]>, seed: u64) -> Self {
        let n = positions.len();
        Self {
            positions,
            prev_forces: vec![[0.0; 2]; n],
            speed: 1.0,
            speed_efficiency: 1.0,
            iteration: 0,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.positions
            .iter()
            .all(|p| p[0].is_finite() && p[1].is_finite())
    }
}

/// Outcome of one [`fa2_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub mean_displacement: f64,
}

/// Uniform random positions in the disk of radius `sqrt(n)`.
pub fn init_layout(g: &ProjectedGraph, seed: u64) -> LayoutState {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = (n as f64).sqrt();
    let positions = (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let a = std::f64::consts::TAU * rng.random::<f64>();
            [r * a.cos(), r * a.sin()]
        })
        .collect();
    LayoutState::from_positions(positions, seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Moves every node that shares its position with a lower-indexed node by
/// `JITTER` in a direction derived from (seed, iteration, node).
fn separate_coincident(state: &mut LayoutState) {
    let n = state.positions.len();
    // Adding 0.0 folds -0.0 into 0.0.
    let keys: Vec<(u64, u64)> = state
        .positions
        .iter()
        .map(|p| ((p[0] + 0.0).to_bits(), (p[1] + 0.0).to_bits()))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (keys[i], i));
    for w in 1..n {
        let (a, b) = (order[w - 1], order[w]);
        if keys[a] == keys[b] {
            let h = splitmix64(state.seed ^ splitmix64(state.iteration ^ splitmix64(b as u64)));
            let angle = (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
            let p = &mut state.positions[b];
            p[0] += JITTER * angle.cos();
            p[1] += JITTER * angle.sin();
        }
    }
}

fn norm(v: [f64; 2]) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

pub fn fa2_step(
    state: &mut LayoutState,
    g: &ProjectedGraph,
    params: &LayoutParams,
) -> Result<StepReport, LayoutError> {
    fa2_step_with(state, g, params, Execution::default())
}

/// One ForceAtlas2 iteration: repulsion, attraction, gravity, then adaptive
/// per-node displacement. Per-node forces are computed independently and all
/// global sums run sequentially in node order, so the result does not depend
/// on the execution strategy.
pub fn fa2_step_with(
    state: &mut LayoutState,
    g: &ProjectedGraph,
    params: &LayoutParams,
    exec: Execution,
) -> Result<StepReport, LayoutError> {
    params.validate()?;
    let n = g.node_count();
    if state.positions.len() != n || state.prev_forces.len() != n {
        return Err(LayoutError::Mismatch {
            state: state.positions.len(),
            graph: n,
        });
    }
    if n == 0 {
        state.iteration += 1;
        return Ok(StepReport {
            mean_displacement: 0.0,
        });
    }

    separate_coincident(state);
    let masses: Vec<f64> = (0..n).map(|i| g.degree(i) as f64 + 1.0).collect();
    let repulsion = repulsion_forces(
        &state.positions,
        &masses,
        params.theta,
        params.scaling,
        exec,
    );

    let positions = &state.positions;
    let forces: Vec<[f64; 2]> = exec.map_range(n, |i| {
        let p = positions[i];
        let mut f = repulsion[i];
        for &(j, w) in g.neighbors(i) {
            let q = positions[j as usize];
            let d = [q[0] - p[0], q[1] - p[1]];
            let factor = if params.linlog {
                let dist = norm(d);
                if dist > 0.0 {
                    w as f64 * dist.ln_1p() / dist
                } else {
                    0.0
                }
            } else {
                w as f64
            };
            f[0] += factor * d[0];
            f[1] += factor * d[1];
        }
        let dist = norm(p);
        if dist > 0.0 && params.gravity > 0.0 {
            let factor = params.gravity * masses[i] / dist;
            f[0] -= factor * p[0];
            f[1] -= factor * p[1];
        }
        f
    });

    // Adaptive speed.
    let mut swings = vec![0.0; n];
    let (mut total_swing, mut total_traction) = (0.0, 0.0);
    for i in 0..n {
        let (f, old) = (forces[i], state.prev_forces[i]);
        swings[i] = masses[i] * norm([old[0] - f[0], old[1] - f[1]]);
        total_swing += swings[i];
        total_traction += masses[i] * norm([old[0] + f[0], old[1] + f[1]]) / 2.0;
    }
    let nf = n as f64;
    let estimated_jt = 0.05 * nf.sqrt();
    let min_jt = estimated_jt.sqrt();
    let max_jt: f64 = 10.0;
    let mut jt =
        params.tolerance * min_jt.max(max_jt.min(estimated_jt * total_traction / (nf * nf)));
    let min_efficiency = 0.05;
    if total_traction > 0.0 && total_swing / total_traction > 2.0 {
        if state.speed_efficiency > min_efficiency {
            state.speed_efficiency *= 0.5;
        }
        jt = jt.max(params.tolerance);
    }
    if total_swing > 0.0 && total_swing.is_finite() && total_traction.is_finite() {
        let target = jt * state.speed_efficiency * total_traction / total_swing;
        if total_swing > jt * total_traction {
            if state.speed_efficiency > min_efficiency {
                state.speed_efficiency *= 0.7;
            }
        } else if state.speed < 1000.0 {
            state.speed_efficiency *= 1.3;
        }
        let max_rise = 0.5;
        state.speed += (target - state.speed).min(max_rise * state.speed);
    }

    let mut displacement = 0.0;
    for i in 0..n {
        let f = forces[i];
        let factor = state.speed / (1.0 + (state.speed * swings[i]).sqrt());
        let step = [f[0] * factor, f[1] * factor];
        let next = [
            state.positions[i][0] + step[0],
            state.positions[i][1] + step[1],
        ];
        if next[0].is_finite() && next[1].is_finite() {
            state.positions[i] = next;
            displacement += norm(step);
        }
    }
    state.prev_forces = forces;
    state.iteration += 1;
    Ok(StepReport {
        mean_displacement: displacement / nf,
    })
}

/// Mean Euclidean length of the graph's edges under `state`.
pub fn mean_edge_length(state: &LayoutState, g: &ProjectedGraph) -> Option<f64> {
    if g.edge_count() == 0 {
        return None;
    }
    let total: f64 = g
        .edges()
        .iter()
        .map(|e| {
            let (p, q) = (
                state.positions[e.source as usize],
                state.positions[e.target as usize],
            );
            norm([p[0] - q[0], p[1] - q[1]])
        })
        .sum();
    Some(total / g.edge_count() as f64)
}

pub fn run_layout(g: &ProjectedGraph, params: &LayoutParams) -> Result<LayoutState, LayoutError> {
    run_layout_with(g, params, Execution::default())
}

/// Runs from [`init_layout`] until `max_iterations` or until the mean
/// per-node displacement drops below 1e-3 of the mean edge length.
pub fn run_layout_with(
    g: &ProjectedGraph,
    params: &LayoutParams,
    exec: Execution,
) -> Result<LayoutState, LayoutError> {
    params.validate()?;
    let mut state = init_layout(g, params.seed);
    if g.node_count() <= 1 {
        return Ok(state);
    }
    for _ in 0..params.max_iterations {
        let report = fa2_step_with(&mut state, g, params, exec)?;
        if let Some(len) = mean_edge_length(&state, g) {
            if report.mean_displacement < CONVERGENCE_FACTOR * len {
                break;
            }
        }
    }
    Ok(state)
}
