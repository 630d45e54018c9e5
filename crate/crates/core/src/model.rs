//! Shared domain types: material parameters, lattices, sources and layer fields.
//!
//! Sources are restricted to piecewise-constant patches plus point atoms so
//! that every integral the solvers need (total mass, cumulative mass, load
//! vectors) is available in closed form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Material constants of the two-layer model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    /// Critical slope.
    pub alpha: f64,
    /// Mobility of the rolling layer.
    pub beta: f64,
    /// Collision rate between the layers.
    pub gamma: f64,
}

impl Parameters {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Parameters { alpha, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn unit() -> Self {
        Parameters {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {value}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters::unit()
    }
}

/// Silo cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Domain {
    Interval { length: f64 },
    Rectangle { lx: f64, ly: f64 },
}

impl Domain {
    pub fn measure(&self) -> f64 {
        match *self {
            Domain::Interval { length } => length,
            Domain::Rectangle { lx, ly } => lx * ly,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Rectangle { .. } => 2,
        }
    }
}

/// Uniform lattice on `[0, length]` with nodes `x_i = i*h`, `i = 0..nodes`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    length: f64,
    nodes: usize,
}

impl Grid1D {
    pub fn new(length: f64, nodes: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be > 0, got {length}")));
        }
        if nodes < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {nodes}")));
        }
        Ok(Grid1D { length, nodes })
    }

    /// Lattice whose spacing is `h`; `length / h` must be an integer up to rounding.
    pub fn with_spacing(length: f64, h: f64) -> Result<Self> {
        let cells = spacing_to_cells(length, h)?;
        Grid1D::new(length, cells + 1)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.length / (self.nodes - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nodes {
            self.length
        } else {
            i as f64 * self.h()
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nodes).map(|i| self.x(i)).collect()
    }

    pub fn domain(&self) -> Domain {
        Domain::Interval {
            length: self.length,
        }
    }
}

/// Uniform lattice on `[0, lx] x [0, ly]` with a common spacing in both
/// directions. Node `(i, j)` sits at `(i*h, j*h)`; flat storage is row-major
/// with `i` running fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    lx: f64,
    ly: f64,
    nx: usize,
    ny: usize,
}

impl Grid2D {
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        for (name, l) in [("lx", lx), ("ly", ly)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} must be > 0, got {l}")));
            }
        }
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes per direction, got {nx}x{ny}"
            )));
        }
        let hx = lx / (nx - 1) as f64;
        let hy = ly / (ny - 1) as f64;
        if (hx - hy).abs() > 1e-12 * hx.max(hy) {
            return Err(Error::InvalidGrid(format!(
                "spacing differs between directions: {hx} vs {hy}"
            )));
        }
        Ok(Grid2D { lx, ly, nx, ny })
    }

    pub fn with_spacing(lx: f64, ly: f64, h: f64) -> Result<Self> {
        let cx = spacing_to_cells(lx, h)?;
        let cy = spacing_to_cells(ly, h)?;
        Grid2D::new(lx, ly, cx + 1, cy + 1)
    }

    pub fn square(length: f64, nodes: usize) -> Result<Self> {
        Grid2D::new(length, length, nodes, nodes)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.lx / (self.nx - 1) as f64
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.lx
        } else {
            i as f64 * self.h()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            self.ly
        } else {
            j as f64 * self.h()
        }
    }

    pub fn domain(&self) -> Domain {
        Domain::Rectangle {
            lx: self.lx,
            ly: self.ly,
        }
    }
}

fn spacing_to_cells(length: f64, h: f64) -> Result<usize> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidGrid(format!("spacing must be > 0, got {h}")));
    }
    let ratio = length / h;
    let cells = ratio.round();
    if cells < 2.0 || (ratio - cells).abs() > 1e-9 * ratio {
        return Err(Error::InvalidGrid(format!(
            "length {length} is not an integer multiple (>= 2) of spacing {h}"
        )));
    }
    Ok(cells as usize)
}

/// Support of a constant-intensity patch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Region {
    Interval { a: f64, b: f64 },
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
    Disk { cx: f64, cy: f64, r: f64 },
}

impl Region {
    pub fn measure(&self) -> f64 {
        match *self {
            Region::Interval { a, b } => b - a,
            Region::Rect { x0, x1, y0, y1 } => (x1 - x0) * (y1 - y0),
            Region::Disk { r, .. } => PI * r * r,
        }
    }

    fn dim(&self) -> usize {
        match self {
            Region::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// Closed-set membership with an absolute slack `tol`.
    pub fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        match *self {
            Region::Interval { a, b } => x >= a - tol && x <= b + tol,
            Region::Rect { x0, x1, y0, y1 } => {
                x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol
            }
            Region::Disk { cx, cy, r } => {
                let (dx, dy) = (x - cx, y - cy);
                (dx * dx + dy * dy).sqrt() <= r + tol
            }
        }
    }

    fn check(&self, domain: &Domain) -> Result<()> {
        let slack = 1e-12;
        let bad = |msg: String| Err(Error::InvalidSource(msg));
        match (*self, *domain) {
            (Region::Interval { a, b }, Domain::Interval { length }) => {
                if !(a.is_finite() && b.is_finite()) || a > b {
                    return bad(format!("interval [{a}, {b}] is malformed"));
                }
                if a < -slack || b > length + slack {
                    return bad(format!("interval [{a}, {b}] extends outside [0, {length}]"));
                }
            }
            (Region::Rect { x0, x1, y0, y1 }, Domain::Rectangle { lx, ly }) => {
                if ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) || x0 > x1 || y0 > y1 {
                    return bad(format!("rectangle [{x0},{x1}]x[{y0},{y1}] is malformed"));
                }
                if x0 < -slack || y0 < -slack || x1 > lx + slack || y1 > ly + slack {
                    return bad(format!(
                        "rectangle [{x0},{x1}]x[{y0},{y1}] extends outside the domain"
                    ));
                }
            }
            (Region::Disk { cx, cy, r }, Domain::Rectangle { lx, ly }) => {
                if ![cx, cy, r].iter().all(|v| v.is_finite()) || r < 0.0 {
                    return bad(format!("disk ({cx},{cy}; {r}) is malformed"));
                }
                if cx - r < -slack || cy - r < -slack || cx + r > lx + slack || cy + r > ly + slack
                {
                    return bad(format!("disk ({cx},{cy}; {r}) extends outside the domain"));
                }
            }
            (region, domain) => {
                return bad(format!(
                    "{}D region {region:?} used on a {}D domain",
                    region.dim(),
                    domain.dim()
                ))
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    pub region: Region,
    pub intensity: f64,
}

/// Position of a point atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Location {
    Line(f64),
    Plane([f64; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub at: Location,
    pub mass: f64,
}

/// Vertical source `f`: a sum of constant patches and point atoms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    #[serde(default)]
    pub patches: Vec<Patch>,
    #[serde(default)]
    pub atoms: Vec<Atom>,
}

impl SourceSpec {
    pub fn new() -> Self {
        SourceSpec::default()
    }

    /// `f = k` on the whole domain.
    pub fn uniform(domain: &Domain, k: f64) -> Self {
        let region = match *domain {
            Domain::Interval { length } => Region::Interval { a: 0.0, b: length },
            Domain::Rectangle { lx, ly } => Region::Rect {
                x0: 0.0,
                x1: lx,
                y0: 0.0,
                y1: ly,
            },
        };
        SourceSpec::new().with_patch(region, k)
    }

    pub fn with_patch(mut self, region: Region, intensity: f64) -> Self {
        self.patches.push(Patch { region, intensity });
        self
    }

    pub fn with_atom(mut self, at: Location, mass: f64) -> Self {
        self.atoms.push(Atom { at, mass });
        self
    }

    /// `a * self`.
    pub fn scaled(&self, a: f64) -> Self {
        SourceSpec {
            patches: self
                .patches
                .iter()
                .map(|p| Patch {
                    region: p.region,
                    intensity: a * p.intensity,
                })
                .collect(),
            atoms: self
                .atoms
                .iter()
                .map(|at| Atom {
                    at: at.at,
                    mass: a * at.mass,
                })
                .collect(),
        }
    }

    /// `self + other`.
    pub fn plus(&self, other: &SourceSpec) -> Self {
        let mut out = self.clone();
        out.patches.extend_from_slice(&other.patches);
        out.atoms.extend_from_slice(&other.atoms);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.patches
            .iter()
            .all(|p| p.intensity == 0.0 || p.region.measure() == 0.0)
            && self.atoms.iter().all(|a| a.mass == 0.0)
    }

    pub fn validate(&self, domain: &Domain) -> Result<()> {
        for p in &self.patches {
            if !(p.intensity.is_finite() && p.intensity >= 0.0) {
                return Err(Error::InvalidSource(format!(
                    "patch intensity must be finite and >= 0, got {}",
                    p.intensity
                )));
            }
            p.region.check(domain)?;
        }
        for a in &self.atoms {
            if !(a.mass.is_finite() && a.mass >= 0.0) {
                return Err(Error::InvalidSource(format!(
                    "atom mass must be finite and >= 0, got {}",
                    a.mass
                )));
            }
            let inside = match (a.at, *domain) {
                (Location::Line(x), Domain::Interval { length }) => (0.0..=length).contains(&x),
                (Location::Plane([x, y]), Domain::Rectangle { lx, ly }) => {
                    (0.0..=lx).contains(&x) && (0.0..=ly).contains(&y)
                }
                _ => {
                    return Err(Error::InvalidSource(format!(
                        "atom location {:?} does not match a {}D domain",
                        a.at,
                        domain.dim()
                    )))
                }
            };
            if !inside {
                return Err(Error::InvalidSource(format!(
                    "atom at {:?} lies outside the domain",
                    a.at
                )));
            }
        }
        Ok(())
    }

    /// Exact integral of `f` over the domain.
    pub fn total_mass(&self) -> f64 {
        let patches: f64 = self
            .patches
            .iter()
            .map(|p| p.intensity * p.region.measure())
            .sum();
        let atoms: f64 = self.atoms.iter().map(|a| a.mass).sum();
        patches + atoms
    }

    /// Nodal samples on a 1D lattice: patch intensity at every node inside the
    /// closed support, atom mass divided by `h` on the nearest node (ties go
    /// to the lower index).
    pub fn sample_1d(&self, grid: &Grid1D) -> Vec<f64> {
        let h = grid.h();
        let tol = 1e-9 * h;
        let mut out = vec![0.0; grid.len()];
        for p in &self.patches {
            for (i, f) in out.iter_mut().enumerate() {
                if p.region.contains(grid.x(i), 0.0, tol) {
                    *f += p.intensity;
                }
            }
        }
        for a in &self.atoms {
            if let Location::Line(x) = a.at {
                out[nearest_node(x, h, grid.len())] += a.mass / h;
            }
        }
        out
    }

    /// Nodal samples on a 2D lattice; atoms deposit `mass / h^2`.
    pub fn sample_2d(&self, grid: &Grid2D) -> Vec<f64> {
        let h = grid.h();
        let tol = 1e-9 * h;
        let mut out = vec![0.0; grid.len()];
        for p in &self.patches {
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    if p.region.contains(grid.x(i), grid.y(j), tol) {
                        out[grid.index(i, j)] += p.intensity;
                    }
                }
            }
        }
        for a in &self.atoms {
            if let Location::Plane([x, y]) = a.at {
                let i = nearest_node(x, h, grid.nx());
                let j = nearest_node(y, h, grid.ny());
                out[grid.index(i, j)] += a.mass / (h * h);
            }
        }
        out
    }
}

fn nearest_node(x: f64, h: f64, n: usize) -> usize {
    let lo = ((x / h).floor().max(0.0) as usize).min(n - 1);
    if lo + 1 >= n {
        return lo;
    }
    let below = x - lo as f64 * h;
    let above = (lo + 1) as f64 * h - x;
    if above < below {
        lo + 1
    } else {
        lo
    }
}

/// Growth velocity `c = (1/|Omega|) * integral of f`, exact for this source class.
pub fn source_mean(f: &SourceSpec, domain: &Domain) -> Result<f64> {
    let measure = domain.measure();
    if !(measure.is_finite() && measure > 0.0) {
        return Err(Error::InvalidGrid(format!("domain measure must be > 0, got {measure}")));
    }
    f.validate(domain)?;
    Ok(f.total_mass() / measure)
}

/// Nodal standing and rolling layers at time `t`. The standing layer is
/// stored relative to `base`: the height at node `i` is `base + u[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
    pub base: f64,
}

impl LayerState {
    pub fn zeros(n: usize) -> Self {
        LayerState {
            u: vec![0.0; n],
            v: vec![0.0; n],
            t: 0.0,
            base: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Absolute standing-layer heights `base + u`.
    pub fn heights(&self) -> Vec<f64> {
        self.u.iter().map(|u| self.base + u).collect()
    }

    /// Move the whole minimum of `u` into `base`. Differences of `u` are
    /// unchanged, only their rounding improves.
    pub fn rebase(&mut self) {
        let m = self.u.iter().copied().fold(f64::INFINITY, f64::min);
        if m.is_finite() && m != 0.0 {
            self.u.iter_mut().for_each(|x| *x -= m);
            self.base += m;
        }
    }
}

/// Similarity profile `(U, V)` with growth velocity `c`; `U` has minimum 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityPair {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub c: f64,
}

/// Subtract the minimum so the field's smallest value is exactly 0.
pub fn min_shift(field: &mut [f64]) {
    let m = field.iter().copied().fold(f64::INFINITY, f64::min);
    if m.is_finite() {
        field.iter_mut().for_each(|x| *x -= m);
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
