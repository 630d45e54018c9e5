use crate::error::{Error, Result};
use crate::model::{LayerState, Parameters};

use super::config::{FluxRule, SchemeConfig, SlopeRule};

/// `(u_i - u_{i-1})/h`; zero at the left wall (ghost equal to `u_0`).
pub fn backward_difference(u: &[f64], i: usize, h: f64) -> f64 {
    if i == 0 {
        0.0
    } else {
        (u[i] - u[i - 1]) / h
    }
}

/// `(u_{i+1} - u_i)/h`; zero at the right wall.
pub fn forward_difference(u: &[f64], i: usize, h: f64) -> f64 {
    if i + 1 >= u.len() {
        0.0
    } else {
        (u[i + 1] - u[i]) / h
    }
}

/// One-sided difference of larger magnitude; the backward one on exact ties.
pub fn du_upwind(u: &[f64], i: usize, h: f64) -> f64 {
    pick_max_abs(backward_difference(u, i, h), forward_difference(u, i, h))
}

/// Largest downhill one-sided slope, `max(b^+, (-f)^+)`; zero at a local
/// minimum.
pub fn du_godunov(u: &[f64], i: usize, h: f64) -> f64 {
    godunov(backward_difference(u, i, h), forward_difference(u, i, h))
}

fn pick_max_abs(b: f64, f: f64) -> f64 {
    if f.abs() > b.abs() {
        f
    } else {
        b
    }
}

fn godunov(b: f64, f: f64) -> f64 {
    b.max(0.0).max(-f.min(0.0))
}

/// Discrete `(v u_x)_x` at node `i` of a 1D field.
pub fn flux_g(u: &[f64], v: &[f64], i: usize, h: f64, rule: FluxRule) -> f64 {
    Line::new(u, v, 0, 1, u.len(), h).g(i, rule)
}

/// One grid line of a 1D or 2D field: entries `start + k*stride`.
#[derive(Clone, Copy)]
pub(crate) struct Line<'a> {
    u: &'a [f64],
    v: &'a [f64],
    start: usize,
    stride: usize,
    len: usize,
    h: f64,
}

impl<'a> Line<'a> {
    pub(crate) fn new(u: &'a [f64], v: &'a [f64], start: usize, stride: usize, len: usize, h: f64) -> Self {
        Line {
            u,
            v,
            start,
            stride,
            len,
            h,
        }
    }

    fn u(&self, k: usize) -> f64 {
        self.u[self.start + k * self.stride]
    }

    fn v(&self, k: usize) -> f64 {
        self.v[self.start + k * self.stride]
    }

    fn back(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            (self.u(k) - self.u(k - 1)) / self.h
        }
    }

    fn fwd(&self, k: usize) -> f64 {
        if k + 1 >= self.len {
            0.0
        } else {
            (self.u(k + 1) - self.u(k)) / self.h
        }
    }

    pub(crate) fn du(&self, k: usize) -> f64 {
        pick_max_abs(self.back(k), self.fwd(k))
    }

    /// Slope component entering `|grad u|` in the exchange term.
    pub(crate) fn slope(&self, k: usize, rule: SlopeRule) -> f64 {
        match rule {
            SlopeRule::Godunov => godunov(self.back(k), self.fwd(k)),
            SlopeRule::MaxAbs => self.du(k),
        }
    }

    /// Flux `v u_x` through the face between `k-1` and `k`, taken from the
    /// uphill node. Walls carry no flux.
    fn face_flux(&self, k: usize) -> f64 {
        if k == 0 || k >= self.len {
            return 0.0;
        }
        let d = (self.u(k) - self.u(k - 1)) / self.h;
        if d > 0.0 {
            self.v(k) * d
        } else if d < 0.0 {
            self.v(k - 1) * d
        } else {
            0.0
        }
    }

    fn node_flux(&self, k: usize) -> f64 {
        self.v(k) * self.du(k)
    }

    pub(crate) fn g(&self, k: usize, rule: FluxRule) -> f64 {
        match rule {
            FluxRule::Interface => (self.face_flux(k + 1) - self.face_flux(k)) / self.h,
            FluxRule::Nodal => {
                let last = self.len - 1;
                let own = self.node_flux(k);
                let right = if k < last { self.node_flux(k + 1) } else { 0.0 };
                let left = if k > 0 { self.node_flux(k - 1) } else { 0.0 };
                // own flux leaves through the face on the downhill side;
                // a wall there absorbs nothing
                let towards_left = (right - if k > 0 { own } else { 0.0 }) / self.h;
                let towards_right = (if k < last { own } else { 0.0 } - left) / self.h;
                let du = self.du(k);
                if du > 0.0 {
                    towards_left
                } else if du < 0.0 {
                    towards_right
                } else {
                    0.5 * (towards_left + towards_right)
                }
            }
        }
    }
}

/// Time step bound from the largest slope magnitude and rolling layer:
///
/// ```text
/// min( cfl*h/(beta*(alpha+S)) / max(1, V),  cap/(gamma*(alpha+S)),  cfl*h/(gamma*V) )
/// ```
///
/// The last term (absent when `V = 0`) limits the transport speed `gamma*v`
/// of the standing-layer update.
pub fn stable_dt(max_slope: f64, max_v: f64, p: &Parameters, cfg: &SchemeConfig, h: f64) -> f64 {
    let s = p.alpha + max_slope;
    let advective = cfg.cfl_safety * h / (p.beta * s) / max_v.max(1.0);
    let exchange = cfg.exchange_cap_safety / (p.gamma * s);
    let standing = if max_v > 0.0 {
        cfg.cfl_safety * h / (p.gamma * max_v)
    } else {
        f64::INFINITY
    };
    advective.min(exchange).min(standing)
}

/// Largest `|Du_i|` of a 1D field, with `Du` from [`du_upwind`].
pub fn max_du_1d(u: &[f64], h: f64) -> f64 {
    (0..u.len()).map(|i| du_upwind(u, i, h).abs()).fold(0.0, f64::max)
}

/// Node-wise growth statistics of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRates {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    pub rates: StepRates,
    /// Total amount added to `v` by clipping at 0 (sum over nodes).
    pub clipped: f64,
    /// `sum_i (u_i + v_i)` after minus before.
    pub content_change: f64,
}

/// Explicit update of every node given per-node `(G_i, |grad u|_i^2)`.
fn advance(
    state: &LayerState,
    f: &[f64],
    p: &Parameters,
    dt: f64,
    local: impl Fn(usize) -> (f64, f64),
) -> Result<(LayerState, StepDiagnostics)> {
    let n = state.len();
    if f.len() != n || state.v.len() != n {
        return Err(Error::InvalidSource(format!(
            "field sizes differ: u {}, v {}, f {}",
            n,
            state.v.len(),
            f.len()
        )));
    }
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let (mut rmin, mut rmax, mut rsum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    let (mut clipped, mut change) = (0.0, 0.0);
    for i in 0..n {
        let (g, slope_sq) = local(i);
        let vi = state.v[i];
        // growth rate of u at node i
        let rate = p.gamma * (p.alpha - slope_sq.sqrt()) * vi;
        let mut vn = vi + dt * (p.beta * g - rate + f[i]);
        let un = state.u[i] + dt * rate;
        if !(vn.is_finite() && un.is_finite()) {
            return Err(Error::NonFinite { step: 0, node: i });
        }
        if vn < 0.0 {
            clipped -= vn;
            vn = 0.0;
        }
        change += dt * rate + (vn - vi);
        rmin = rmin.min(rate);
        rmax = rmax.max(rate);
        rsum += rate;
        u.push(un);
        v.push(vn);
    }
    Ok((
        LayerState {
            u,
            v,
            t: state.t + dt,
            base: state.base,
        },
        StepDiagnostics {
            rates: StepRates {
                min: rmin,
                max: rmax,
                mean: rsum / n as f64,
                dt,
            },
            clipped,
            content_change: change,
        },
    ))
}

/// One explicit step on a 1D lattice with spacing `h`.
pub fn step_1d(
    state: &LayerState,
    f: &[f64],
    p: &Parameters,
    dt: f64,
    h: f64,
    cfg: &SchemeConfig,
) -> Result<(LayerState, StepDiagnostics)> {
    let line = Line::new(&state.u, &state.v, 0, 1, state.len(), h);
    advance(state, f, p, dt, |i| {
        let s = line.slope(i, cfg.slope);
        (line.g(i, cfg.flux), s * s)
    })
}

/// One explicit step on an `nx * ny` lattice (row-major, `x` fastest),
/// splitting the transport term by axis.
pub fn step_2d(
    state: &LayerState,
    f: &[f64],
    p: &Parameters,
    dt: f64,
    h: f64,
    nx: usize,
    cfg: &SchemeConfig,
) -> Result<(LayerState, StepDiagnostics)> {
    let ny = state.len() / nx.max(1);
    if nx * ny != state.len() {
        return Err(Error::InvalidGrid(format!(
            "{} nodes do not fill rows of {nx}",
            state.len()
        )));
    }
    let (u, v) = (&state.u[..], &state.v[..]);
    advance(state, f, p, dt, |n| {
        let (i, j) = (n % nx, n / nx);
        let row = Line::new(u, v, j * nx, 1, nx, h);
        let col = Line::new(u, v, i, nx, ny, h);
        let (sx, sy) = (row.slope(i, cfg.slope), col.slope(j, cfg.slope));
        (row.g(i, cfg.flux) + col.g(j, cfg.flux), sx * sx + sy * sy)
    })
}

/// Largest `sqrt(Dx^2 + Dy^2)` over an `nx * ny` lattice with axis-wise
/// [`du_upwind`].
pub fn max_du_2d(u: &[f64], h: f64, nx: usize) -> f64 {
    let ny = u.len() / nx;
    let mut m: f64 = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let dx = Line::new(u, u, j * nx, 1, nx, h).du(i);
            let dy = Line::new(u, u, i, nx, ny, h).du(j);
            m = m.max(dx.hypot(dy));
        }
    }
    m
}
