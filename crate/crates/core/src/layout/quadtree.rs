//! Barnes-Hut quadtree for degree-weighted repulsion.
//!
//! The repulsion `m_i m_j (p_i - p_j) / |p_i - p_j|^2` is, in complex
//! notation, `m_i conj(m_j / (z_i - z_j))`, so a far cell is replaced by the
//! multipole series of `sum_j m_j / (z - z_j)` about its centre of mass,
//! truncated after the octupole term (the dipole term vanishes there).

use crate::par::Execution;

const MAX_DEPTH: usize = 40;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Cell {
    // Bodies of this cell are `order[start..end]`.
    start: u32,
    end: u32,
    size: f64,
    mass: f64,
    com: [f64; 2],
    // sum m (z - com)^2 and sum m (z - com)^3 as complex numbers
    quad: [f64; 2],
    oct: [f64; 2],
    children: [u32; 4],
}

impl Cell {
    fn is_leaf(&self) -> bool {
        self.children.iter().all(|&c| c == NONE)
    }

    /// `M / w + Q2 / w^3 + Q3 / w^4` at offset `w` from the centre of mass.
    fn field_at(&self, w: [f64; 2]) -> [f64; 2] {
        let inv = cinv(w);
        let inv2 = cmul(inv, inv);
        let inv3 = cmul(inv2, inv);
        let inv4 = cmul(inv2, inv2);
        let q = cmul(self.quad, inv3);
        let o = cmul(self.oct, inv4);
        [
            self.mass * inv[0] + q[0] + o[0],
            self.mass * inv[1] + q[1] + o[1],
        ]
    }
}

#[inline]
fn cmul(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]]
}

#[inline]
fn cinv(a: [f64; 2]) -> [f64; 2] {
    let n = a[0] * a[0] + a[1] * a[1];
    [a[0] / n, -a[1] / n]
}

pub(crate) struct QuadTree<'a> {
    positions: &'a [[f64; 2]],
    masses: &'a [f64],
    cells: Vec<Cell>,
    order: Vec<u32>,
    // slot of each body inside `order`
    slot: Vec<u32>,
}

impl<'a> QuadTree<'a> {
    pub fn build(positions: &'a [[f64; 2]], masses: &'a [f64]) -> Self {
        let n = positions.len();
        let mut tree = QuadTree {
            positions,
            masses,
            cells: Vec::with_capacity(2 * n + 1),
            order: (0..n as u32).collect(),
            slot: vec![0; n],
        };
        if n == 0 {
            return tree;
        }
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in positions {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let size = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE) * (1.0 + 1e-9);
        tree.build_cell(0, n, lo, size, 0);
        for (s, &b) in tree.order.iter().enumerate() {
            tree.slot[b as usize] = s as u32;
        }
        tree
    }

    fn build_cell(
        &mut self,
        start: usize,
        end: usize,
        origin: [f64; 2],
        size: f64,
        depth: usize,
    ) -> u32 {
        let (mut mass, mut mx, mut my) = (0.0, 0.0, 0.0);
        for &b in &self.order[start..end] {
            let (p, m) = (self.positions[b as usize], self.masses[b as usize]);
            mass += m;
            mx += m * p[0];
            my += m * p[1];
        }
        let com = [mx / mass, my / mass];
        let (mut quad, mut oct) = ([0.0; 2], [0.0; 2]);
        for &b in &self.order[start..end] {
            let (p, m) = (self.positions[b as usize], self.masses[b as usize]);
            let d = [p[0] - com[0], p[1] - com[1]];
            let d2 = cmul(d, d);
            let d3 = cmul(d2, d);
            quad = [quad[0] + m * d2[0], quad[1] + m * d2[1]];
            oct = [oct[0] + m * d3[0], oct[1] + m * d3[1]];
        }
        let id = self.cells.len() as u32;
        self.cells.push(Cell {
            start: start as u32,
            end: end as u32,
            size,
            mass,
            com,
            quad,
            oct,
            children: [NONE; 4],
        });
        if end - start <= 1 || depth >= MAX_DEPTH {
            return id;
        }

        let half = size / 2.0;
        let mid = [origin[0] + half, origin[1] + half];
        let quadrant = |p: [f64; 2]| (p[0] >= mid[0]) as usize | (((p[1] >= mid[1]) as usize) << 1);
        // Stable bucket partition so the body order is deterministic.
        let mut buckets: [Vec<u32>; 4] = Default::default();
        for &b in &self.order[start..end] {
            buckets[quadrant(self.positions[b as usize])].push(b);
        }
        let mut cursor = start;
        let mut bounds = [(0usize, 0usize); 4];
        for (q, bucket) in buckets.iter().enumerate() {
            self.order[cursor..cursor + bucket.len()].copy_from_slice(bucket);
            bounds[q] = (cursor, cursor + bucket.len());
            cursor += bucket.len();
        }
        for (q, &(s, e)) in bounds.iter().enumerate() {
            if s == e {
                continue;
            }
            let child_origin = [
                origin[0] + half * (q & 1) as f64,
                origin[1] + half * (q >> 1) as f64,
            ];
            let child = self.build_cell(s, e, child_origin, half, depth + 1);
            self.cells[id as usize].children[q] = child;
        }
        id
    }

    /// Repulsive force on `body`: `scaling * m_i * m_j / d` pointing away from
    /// each other body (or from a far cell's centre of mass).
    pub fn force_on(&self, body: usize, theta: f64, scaling: f64) -> [f64; 2] {
        let mut f = [0.0, 0.0];
        if self.cells.is_empty() {
            return f;
        }
        let p = self.positions[body];
        let mi = self.masses[body];
        let slot = self.slot[body];
        let mut stack = vec![0u32];
        while let Some(c) = stack.pop() {
            let cell = &self.cells[c as usize];
            let contains = cell.start <= slot && slot < cell.end;
            if cell.is_leaf() {
                for &b in &self.order[cell.start as usize..cell.end as usize] {
                    if b as usize == body {
                        continue;
                    }
                    add_repulsion(
                        &mut f,
                        p,
                        self.positions[b as usize],
                        scaling * mi * self.masses[b as usize],
                    );
                }
                continue;
            }
            if !contains {
                let dx = p[0] - cell.com[0];
                let dy = p[1] - cell.com[1];
                let dist = (dx * dx + dy * dy).sqrt();
                if dist > 0.0 && cell.size / dist < theta {
                    let g = cell.field_at([dx, dy]);
                    // conj(g), scaled
                    f[0] += scaling * mi * g[0];
                    f[1] -= scaling * mi * g[1];
                    continue;
                }
            }
            for &child in cell.children.iter().rev() {
                if child != NONE {
                    stack.push(child);
                }
            }
        }
        f
    }
}

#[inline]
fn add_repulsion(f: &mut [f64; 2], p: [f64; 2], q: [f64; 2], coeff: f64) {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    let d2 = dx * dx + dy * dy;
    if d2 > 0.0 {
        let factor = coeff / d2;
        f[0] += dx * factor;
        f[1] += dy * factor;
    }
}

/// Barnes-Hut repulsion on every node. `theta = 0` opens every cell, which
/// makes the result exact up to summation order.
pub fn repulsion_forces(
    positions: &[[f64; 2]],
    masses: &[f64],
    theta: f64,
    scaling: f64,
    exec: Execution,
) -> Vec<[f64; 2]> {
    assert_eq!(positions.len(), masses.len());
    let tree = QuadTree::build(positions, masses);
    exec.map_range(positions.len(), |i| tree.force_on(i, theta, scaling))
}
