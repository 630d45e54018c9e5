use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the nodal slope `|Du_i|` in the exchange term is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeRule {
    /// Largest of the downhill one-sided slopes; zero at a local minimum.
    #[default]
    Godunov,
    /// Larger in magnitude of the backward and forward differences
    /// (see [`du_upwind`](super::du_upwind)).
    MaxAbs,
}

/// How the transport term `(v u_x)_x` is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FluxRule {
    /// Flux through each cell face carried by the uphill node of that face;
    /// sums of `G` telescope exactly.
    #[default]
    Interface,
    /// Node-centred fluxes `v_i Du_i` differenced in the direction of
    /// `sign(Du_i)` (see [`flux_g`](super::flux_g)). Not conservative at
    /// slope sign changes.
    Nodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeConfig {
    pub cfl_safety: f64,
    pub exchange_cap_safety: f64,
    /// Allowed relative spread of the nodal growth rates.
    pub stop_epsilon: f64,
    /// Consecutive steps the stopping test must hold.
    pub stop_window: usize,
    /// Allowed drift of the mean growth rate per unit time over the window,
    /// relative to it.
    pub steady_epsilon: f64,
    pub max_steps: usize,
    pub slope: SlopeRule,
    pub flux: FluxRule,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            cfl_safety: 0.4,
            exchange_cap_safety: 0.5,
            stop_epsilon: 1e-3,
            stop_window: 50,
            steady_epsilon: 1e-11,
            max_steps: 5_000_000,
            slope: SlopeRule::default(),
            flux: FluxRule::default(),
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, x: f64| {
            if x > 0.0 && x <= 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be in (0, 1], got {x}")))
            }
        };
        unit("cfl_safety", self.cfl_safety)?;
        unit("exchange_cap_safety", self.exchange_cap_safety)?;
        if !(self.stop_epsilon > 0.0 && self.stop_epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "stop_epsilon must be in (0, 1), got {}",
                self.stop_epsilon
            )));
        }
        if !(self.steady_epsilon > 0.0 && self.steady_epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "steady_epsilon must be > 0, got {}",
                self.steady_epsilon
            )));
        }
        if self.stop_window == 0 {
            return Err(Error::InvalidParameter("stop_window must be >= 1".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be >= 1".into()));
        }
        Ok(())
    }
}
