//! Closed-form similarity solutions.
//!
//! On an interval `(0, L)` the similarity profile is explicit in terms of
//!
//! ```text
//! G(x) = (x/L) * M - integral_0^x f,      M = integral_0^L f
//! V(x) = M/(gamma*alpha*L) + |G(x)|/(alpha*beta)
//! U'(x) = alpha * G(x) / (beta*M/(gamma*L) + |G(x)|)
//! ```
//!
//! The central point-source profiles on an interval and on a disk are also
//! provided; both serve as oracles for the numerical solvers.

use crate::error::{Error, Result};
use crate::model::{min_shift, Grid1D, Location, Parameters, Region, SimilarityPair, SourceSpec};

/// Pointwise evaluator of the 1D closed forms for a fixed source.
#[derive(Debug, Clone)]
pub struct ExactProfile1D<'a> {
    source: &'a SourceSpec,
    length: f64,
    params: Parameters,
    mass: f64,
}

impl<'a> ExactProfile1D<'a> {
    pub fn new(source: &'a SourceSpec, length: f64, params: Parameters) -> Result<Self> {
        params.validate()?;
        source.validate(&crate::model::Domain::Interval { length })?;
        let mut profile = ExactProfile1D {
            source,
            length,
            params,
            mass: 0.0,
        };
        profile.mass = profile.mass_up_to(length, true);
        Ok(profile)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `integral_0^x f`. Atoms strictly left of `x` are counted; an atom at
    /// `x` itself only when `closed` (right limit). The right wall always
    /// takes the whole mass.
    fn mass_up_to(&self, x: f64, closed: bool) -> f64 {
        let at_wall = x >= self.length;
        let patches: f64 = self
            .source
            .patches
            .iter()
            .map(|p| match p.region {
                Region::Interval { a, b } => p.intensity * (b.min(x) - a).max(0.0),
                _ => 0.0,
            })
            .sum();
        let atoms: f64 = self
            .source
            .atoms
            .iter()
            .map(|atom| match atom.at {
                Location::Line(z) if z < x || (closed && z == x) || at_wall => atom.mass,
                _ => 0.0,
            })
            .sum();
        patches + atoms
    }

    fn check(&self, x: f64) -> Result<()> {
        if (0.0..=self.length).contains(&x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                length: self.length,
            })
        }
    }

    /// `G(x)`, left limit at atom locations.
    pub fn g(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(x / self.length * self.mass - self.mass_up_to(x, false))
    }

    fn g_right(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(x / self.length * self.mass - self.mass_up_to(x, true))
    }

    fn slope_from_g(&self, g: f64) -> f64 {
        let Parameters { alpha, beta, gamma } = self.params;
        alpha * g / (beta / (gamma * self.length) * self.mass + g.abs())
    }

    pub fn rolling(&self, x: f64) -> Result<f64> {
        let Parameters { alpha, beta, gamma } = self.params;
        let g = self.g(x)?;
        Ok(self.mass / (gamma * alpha * self.length) + g.abs() / (alpha * beta))
    }

    pub fn slope(&self, x: f64) -> Result<f64> {
        if self.mass <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok(self.slope_from_g(self.g(x)?))
    }

    /// `U(x_i)` by the trapezoidal rule from 0 with one-sided slopes at the
    /// ends of every interval, so atoms on nodes do not smear.
    fn integrate_standing(&self, xs: &[f64]) -> Result<Vec<f64>> {
        if self.mass <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let mut u = Vec::with_capacity(xs.len());
        let mut acc = 0.0;
        u.push(acc);
        for w in xs.windows(2) {
            let left = self.slope_from_g(self.g_right(w[0])?);
            let right = self.slope_from_g(self.g(w[1])?);
            acc += 0.5 * (w[1] - w[0]) * (left + right);
            u.push(acc);
        }
        Ok(u)
    }
}

/// `G(x)` for a 1D source on `(0, length)`.
pub fn g_function(source: &SourceSpec, length: f64, x: f64) -> Result<f64> {
    ExactProfile1D::new(source, length, Parameters::unit())?.g(x)
}

/// Exact similarity pair sampled at the grid nodes. `U` is the trapezoidal
/// integral of the exact slope from 0, shifted to minimum 0; `V` takes the
/// left limit at atom locations.
pub fn similarity_1d_exact(
    source: &SourceSpec,
    grid: &Grid1D,
    params: &Parameters,
) -> Result<SimilarityPair> {
    let profile = ExactProfile1D::new(source, grid.length(), *params)?;
    if profile.mass() <= 0.0 {
        return Err(Error::ZeroMass);
    }
    let xs = grid.xs();
    let v = xs
        .iter()
        .map(|&x| profile.rolling(x))
        .collect::<Result<Vec<_>>>()?;
    let mut u = profile.integrate_standing(&xs)?;
    min_shift(&mut u);
    Ok(SimilarityPair {
        u,
        v,
        c: profile.mass() / grid.length(),
    })
}

/// Nodal exact slope `U'(x_i)`.
pub fn exact_slope_1d(source: &SourceSpec, grid: &Grid1D, params: &Parameters) -> Result<Vec<f64>> {
    let profile = ExactProfile1D::new(source, grid.length(), *params)?;
    grid.xs().iter().map(|&x| profile.slope(x)).collect()
}

/// Unit point source at the midpoint of `(0, L)`: logarithmic standing layer
/// and tent-shaped rolling layer, evaluated exactly as the printed closed
/// forms (only unambiguous for unit parameters).
pub fn example1_exact(grid: &Grid1D, params: &Parameters) -> SimilarityPair {
    let Parameters { alpha, beta, gamma } = *params;
    let l = grid.length();
    let scale = alpha * gamma / beta;
    let (u, v) = grid
        .xs()
        .into_iter()
        .map(|x| {
            let d = x.min(l - x);
            let v = 1.0 / (gamma * alpha * l) + d / (alpha * beta * l);
            let s = if x <= l / 2.0 { x } else { l - x };
            (scale * (s - s.ln_1p()), v)
        })
        .unzip();
    SimilarityPair { u, v, c: 1.0 / l }
}

/// Radial similarity profile for a central point source in a disk of radius `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub radius: f64,
    pub c: f64,
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    pub u_r: Vec<f64>,
    pub u: Vec<f64>,
}

/// Evaluate the disk profile at strictly increasing radii in `(0, R]`. `U` is
/// integrated inward from the wall with `U(R) = 0`, then min-shifted.
pub fn example2_radial(
    radius: f64,
    params: &Parameters,
    c: f64,
    radii: &[f64],
) -> Result<RadialProfile> {
    params.validate()?;
    let Parameters { alpha, beta, gamma } = *params;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be > 0, got {radius}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("growth velocity must be > 0, got {c}")));
    }
    if radii.is_empty() {
        return Err(Error::InvalidParameter("no sample radii".into()));
    }
    for (k, &r) in radii.iter().enumerate() {
        if !(r > 0.0 && r <= radius) {
            return Err(Error::InvalidParameter(format!(
                "radius {r} outside (0, {radius}]; the rolling layer is singular at 0"
            )));
        }
        if k > 0 && r <= radii[k - 1] {
            return Err(Error::InvalidParameter("radii must be strictly increasing".into()));
        }
    }
    let r2 = radius * radius;
    let v: Vec<f64> = radii
        .iter()
        .map(|&r| c / (gamma * alpha) * (1.0 + gamma / (2.0 * beta * r) * (r2 - r * r)))
        .collect();
    let u_r: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let q = r2 - r * r;
            -alpha * q / (q + 2.0 * beta * r / gamma)
        })
        .collect();

    let n = radii.len();
    let mut u = vec![0.0; n];
    let last = radii[n - 1];
    // Slope at the wall is exactly zero.
    u[n - 1] = -0.5 * (radius - last) * u_r[n - 1];
    for k in (0..n - 1).rev() {
        u[k] = u[k + 1] - 0.5 * (radii[k + 1] - radii[k]) * (u_r[k] + u_r[k + 1]);
    }
    min_shift(&mut u);
    Ok(RadialProfile {
        radius,
        c,
        r: radii.to_vec(),
        v,
        u_r,
        u,
    })
}
