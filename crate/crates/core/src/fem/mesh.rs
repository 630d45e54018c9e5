//! Piecewise-linear meshes over intervals and rectangles.

use crate::model::{Domain, Grid1D, Grid2D, Location, Region, SourceSpec};

use super::geometry::{self, Moments, Point};

/// A conforming mesh of simplices with piecewise-linear hat functions.
pub trait FeMesh: Sync {
    type Nodes: AsRef<[usize]>;
    type Grads: AsRef<[[f64; 2]]>;

    fn node_count(&self) -> usize;
    fn element_count(&self) -> usize;
    fn element_nodes(&self, e: usize) -> Self::Nodes;
    fn element_measure(&self, e: usize) -> f64;
    /// Gradients of the element's hat functions, ordered as `element_nodes`.
    fn hat_gradients(&self, e: usize) -> Self::Grads;
    fn domain(&self) -> Domain;
    /// `integral f * phi_i` for every node, exact for patches and atoms.
    fn source_load(&self, f: &SourceSpec) -> Vec<f64>;

    /// `integral phi_i` for every node.
    fn node_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.node_count()];
        for e in 0..self.element_count() {
            let nodes = self.element_nodes(e);
            let nodes = nodes.as_ref();
            let share = self.element_measure(e) / nodes.len() as f64;
            for &n in nodes {
                w[n] += share;
            }
        }
        w
    }

    /// Constant gradient of the piecewise-linear interpolant on element `e`.
    fn gradient(&self, e: usize, nodal: &[f64]) -> [f64; 2] {
        let nodes = self.element_nodes(e);
        let grads = self.hat_gradients(e);
        let mut g = [0.0; 2];
        for (&n, d) in nodes.as_ref().iter().zip(grads.as_ref()) {
            g[0] += nodal[n] * d[0];
            g[1] += nodal[n] * d[1];
        }
        g
    }
}

/// P1 elements on the intervals of a uniform 1D lattice.
#[derive(Debug, Clone, Copy)]
pub struct IntervalMesh {
    pub grid: Grid1D,
}

impl IntervalMesh {
    pub fn new(grid: Grid1D) -> Self {
        IntervalMesh { grid }
    }
}

impl FeMesh for IntervalMesh {
    type Nodes = [usize; 2];
    type Grads = [[f64; 2]; 2];

    fn node_count(&self) -> usize {
        self.grid.len()
    }

    fn element_count(&self) -> usize {
        self.grid.len() - 1
    }

    fn element_nodes(&self, e: usize) -> [usize; 2] {
        [e, e + 1]
    }

    fn element_measure(&self, _e: usize) -> f64 {
        self.grid.h()
    }

    fn hat_gradients(&self, _e: usize) -> [[f64; 2]; 2] {
        let h = self.grid.h();
        [[-1.0 / h, 0.0], [1.0 / h, 0.0]]
    }

    fn domain(&self) -> Domain {
        self.grid.domain()
    }

    fn source_load(&self, f: &SourceSpec) -> Vec<f64> {
        let g = &self.grid;
        let h = g.h();
        let mut load = vec![0.0; g.len()];
        for p in &f.patches {
            let Region::Interval { a, b } = p.region else {
                continue;
            };
            let first = ((a / h).floor().max(0.0) as usize).min(g.len() - 2);
            for e in first..g.len() - 1 {
                let (xa, xb) = (g.x(e), g.x(e + 1));
                if xa > b {
                    break;
                }
                let (l, r) = geometry::interval_hats(xa, xb, a, b);
                load[e] += p.intensity * l;
                load[e + 1] += p.intensity * r;
            }
        }
        for atom in &f.atoms {
            let Location::Line(z) = atom.at else {
                continue;
            };
            let e = ((z / h).floor().max(0.0) as usize).min(g.len() - 2);
            let t = ((z - g.x(e)) / h).clamp(0.0, 1.0);
            load[e] += atom.mass * (1.0 - t);
            load[e + 1] += atom.mass * t;
        }
        load
    }
}

/// Uniform Courant triangulation: every lattice cell is split along its
/// lower-left to upper-right diagonal into a lower triangle
/// `(00, 10, 11)` and an upper triangle `(00, 11, 01)`, both counter-clockwise.
/// Element `2c` is the lower and `2c + 1` the upper triangle of cell `c`.
#[derive(Debug, Clone, Copy)]
pub struct CourantMesh {
    pub grid: Grid2D,
}

/// Hat coefficients `(a, b, c)` of `a + b*x + c*y` in cell-local coordinates
/// (origin at the cell's lower-left node), for unit spacing.
const LOWER_HATS: [[f64; 3]; 3] = [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [0.0, 0.0, 1.0]];
const UPPER_HATS: [[f64; 3]; 3] = [[1.0, 0.0, -1.0], [0.0, 1.0, 0.0], [0.0, -1.0, 1.0]];

impl CourantMesh {
    pub fn new(grid: Grid2D) -> Self {
        CourantMesh { grid }
    }

    fn cell_of(&self, e: usize) -> (usize, usize, bool) {
        let c = e / 2;
        let cx = self.grid.nx() - 1;
        (c % cx, c / cx, e % 2 == 1)
    }

    fn local_triangle(&self, upper: bool) -> [Point; 3] {
        let h = self.grid.h();
        if upper {
            [[0.0, 0.0], [h, h], [0.0, h]]
        } else {
            [[0.0, 0.0], [h, 0.0], [h, h]]
        }
    }

    fn region_moments(&self, region: &Region, i: usize, j: usize, upper: bool) -> Moments {
        let (ox, oy) = (self.grid.x(i), self.grid.y(j));
        let tri = self.local_triangle(upper);
        match *region {
            Region::Rect { x0, x1, y0, y1 } => {
                geometry::rect_triangle(tri, x0 - ox, x1 - ox, y0 - oy, y1 - oy)
            }
            Region::Disk { cx, cy, r } => geometry::disk_triangle(tri, [cx - ox, cy - oy], r),
            Region::Interval { .. } => Moments::default(),
        }
    }

    fn region_cells(&self, region: &Region) -> (usize, usize, usize, usize) {
        let (x0, x1, y0, y1) = match *region {
            Region::Rect { x0, x1, y0, y1 } => (x0, x1, y0, y1),
            Region::Disk { cx, cy, r } => (cx - r, cx + r, cy - r, cy + r),
            Region::Interval { .. } => return (0, 0, 0, 0),
        };
        let h = self.grid.h();
        let (cx, cy) = (self.grid.nx() - 1, self.grid.ny() - 1);
        let lo = |v: f64, n: usize| (((v / h).floor() - 1.0).max(0.0) as usize).min(n);
        let hi = |v: f64, n: usize| (((v / h).ceil() + 1.0).max(0.0) as usize).min(n);
        (lo(x0, cx), hi(x1, cx), lo(y0, cy), hi(y1, cy))
    }
}

impl FeMesh for CourantMesh {
    type Nodes = [usize; 3];
    type Grads = [[f64; 2]; 3];

    fn node_count(&self) -> usize {
        self.grid.len()
    }

    fn element_count(&self) -> usize {
        2 * (self.grid.nx() - 1) * (self.grid.ny() - 1)
    }

    fn element_nodes(&self, e: usize) -> [usize; 3] {
        let (i, j, upper) = self.cell_of(e);
        let g = &self.grid;
        let n00 = g.index(i, j);
        let n11 = g.index(i + 1, j + 1);
        if upper {
            [n00, n11, g.index(i, j + 1)]
        } else {
            [n00, g.index(i + 1, j), n11]
        }
    }

    fn element_measure(&self, _e: usize) -> f64 {
        let h = self.grid.h();
        0.5 * h * h
    }

    fn hat_gradients(&self, e: usize) -> [[f64; 2]; 3] {
        let h = self.grid.h();
        let hats = if e % 2 == 1 { &UPPER_HATS } else { &LOWER_HATS };
        [
            [hats[0][1] / h, hats[0][2] / h],
            [hats[1][1] / h, hats[1][2] / h],
            [hats[2][1] / h, hats[2][2] / h],
        ]
    }

    fn domain(&self) -> Domain {
        self.grid.domain()
    }

    fn source_load(&self, f: &SourceSpec) -> Vec<f64> {
        let g = &self.grid;
        let h = g.h();
        let cx = g.nx() - 1;
        let mut load = vec![0.0; g.len()];
        for p in &f.patches {
            let (i0, i1, j0, j1) = self.region_cells(&p.region);
            for j in j0..j1 {
                for i in i0..i1 {
                    for upper in [false, true] {
                        let m = self.region_moments(&p.region, i, j, upper);
                        if m.area == 0.0 {
                            continue;
                        }
                        let e = 2 * (j * cx + i) + usize::from(upper);
                        let hats = if upper { &UPPER_HATS } else { &LOWER_HATS };
                        for (&n, c) in self.element_nodes(e).iter().zip(hats) {
                            load[n] += p.intensity * m.integrate_linear(c[0], c[1] / h, c[2] / h);
                        }
                    }
                }
            }
        }
        for atom in &f.atoms {
            let Location::Plane([x, y]) = atom.at else {
                continue;
            };
            let i = ((x / h).floor().max(0.0) as usize).min(g.nx() - 2);
            let j = ((y / h).floor().max(0.0) as usize).min(g.ny() - 2);
            let xi = ((x - g.x(i)) / h).clamp(0.0, 1.0);
            let eta = ((y - g.y(j)) / h).clamp(0.0, 1.0);
            let upper = eta > xi;
            let hats = if upper { &UPPER_HATS } else { &LOWER_HATS };
            let e = 2 * (j * cx + i) + usize::from(upper);
            for (&n, c) in self.element_nodes(e).iter().zip(hats) {
                load[n] += atom.mass * (c[0] + c[1] * xi + c[2] * eta);
            }
        }
        load
    }
}
