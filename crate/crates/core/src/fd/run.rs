use crate::error::{Error, Result};
use crate::model::{min_shift, Domain, Grid1D, Grid2D, LayerState, Parameters, SourceSpec};

use super::config::SchemeConfig;
use super::detect::Detector;
use super::ops::{max_du_1d, max_du_2d, stable_dt, step_1d, step_2d, StepDiagnostics};

/// Clipped mass above this fraction of the injected mass raises an alarm.
pub const CLIP_ALARM_FRACTION: f64 = 1e-8;
/// Mass-balance defect per unit time above `h` times the injection rate
/// raises an alarm.
pub const MASS_ALARM_FACTOR: f64 = 1.0;

/// `u` is moved into `LayerState::base` once its minimum exceeds this.
const REBASE_ABOVE: f64 = 1.0;

/// Node lattice the explicit scheme runs on.
pub trait Lattice {
    fn node_count(&self) -> usize;
    fn spacing(&self) -> f64;
    /// `h^d`: the measure attached to one node.
    fn cell_measure(&self) -> f64;
    fn domain(&self) -> Domain;
    fn sample(&self, f: &SourceSpec) -> Vec<f64>;
    /// Largest `|Du|` with `Du` from [`du_upwind`](super::du_upwind).
    fn max_du(&self, u: &[f64]) -> f64;
    fn step(
        &self,
        state: &LayerState,
        f: &[f64],
        p: &Parameters,
        dt: f64,
        cfg: &SchemeConfig,
    ) -> Result<(LayerState, StepDiagnostics)>;
}

impl Lattice for Grid1D {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn spacing(&self) -> f64 {
        self.h()
    }

    fn cell_measure(&self) -> f64 {
        self.h()
    }

    fn domain(&self) -> Domain {
        Grid1D::domain(self)
    }

    fn sample(&self, f: &SourceSpec) -> Vec<f64> {
        f.sample_1d(self)
    }

    fn max_du(&self, u: &[f64]) -> f64 {
        max_du_1d(u, self.h())
    }

    fn step(
        &self,
        state: &LayerState,
        f: &[f64],
        p: &Parameters,
        dt: f64,
        cfg: &SchemeConfig,
    ) -> Result<(LayerState, StepDiagnostics)> {
        step_1d(state, f, p, dt, self.h(), cfg)
    }
}

impl Lattice for Grid2D {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn spacing(&self) -> f64 {
        self.h()
    }

    fn cell_measure(&self) -> f64 {
        self.h() * self.h()
    }

    fn domain(&self) -> Domain {
        Grid2D::domain(self)
    }

    fn sample(&self, f: &SourceSpec) -> Vec<f64> {
        f.sample_2d(self)
    }

    fn max_du(&self, u: &[f64]) -> f64 {
        max_du_2d(u, self.h(), self.nx())
    }

    fn step(
        &self,
        state: &LayerState,
        f: &[f64],
        p: &Parameters,
        dt: f64,
        cfg: &SchemeConfig,
    ) -> Result<(LayerState, StepDiagnostics)> {
        step_2d(state, f, p, dt, self.h(), self.nx(), cfg)
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub state: LayerState,
    /// Standing layer shifted to minimum 0.
    pub u_d: Vec<f64>,
    pub v_d: Vec<f64>,
    pub steps: usize,
    pub converged: bool,
    pub c_obs: f64,
    /// Per step `|change of h^d sum(u+v) - dt h^d sum f|`.
    pub mass_defect: Vec<f64>,
    pub injected: f64,
    pub clipped: f64,
    /// Largest `|Du|` of the final state.
    pub max_du: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Alarms {
    pub clipping: bool,
    pub mass_balance: bool,
}

impl Alarms {
    pub fn any(&self) -> bool {
        self.clipping || self.mass_balance
    }
}

impl RunReport {
    pub fn total_defect(&self) -> f64 {
        self.mass_defect.iter().sum()
    }

    /// Accumulated mass-balance defect per unit time.
    pub fn defect_rate(&self) -> f64 {
        if self.state.t > 0.0 {
            self.total_defect() / self.state.t
        } else {
            0.0
        }
    }

    pub fn clipped_fraction(&self) -> f64 {
        if self.injected > 0.0 {
            self.clipped / self.injected
        } else {
            0.0
        }
    }

    pub fn alarms(&self) -> Alarms {
        let rate = if self.state.t > 0.0 {
            self.injected / self.state.t
        } else {
            0.0
        };
        Alarms {
            clipping: self.clipped_fraction() > CLIP_ALARM_FRACTION,
            mass_balance: self.defect_rate() > MASS_ALARM_FACTOR * self.h * rate,
        }
    }
}

/// Evolve from zero data until a similarity profile is detected or
/// `max_steps` is reached.
pub fn run<L: Lattice>(f: &SourceSpec, lattice: &L, p: &Parameters, cfg: &SchemeConfig) -> Result<RunReport> {
    run_with(f, lattice, p, cfg, None, |_, _| {})
}

/// As [`run`], from an optional initial state, calling `observer` after every
/// step with the step count and the new state.
pub fn run_with<L: Lattice>(
    f: &SourceSpec,
    lattice: &L,
    p: &Parameters,
    cfg: &SchemeConfig,
    initial: Option<LayerState>,
    mut observer: impl FnMut(usize, &LayerState),
) -> Result<RunReport> {
    p.validate()?;
    cfg.validate()?;
    f.validate(&lattice.domain())?;
    let n = lattice.node_count();
    let mut state = match initial {
        Some(s) => {
            if s.u.len() != n || s.v.len() != n {
                return Err(Error::InvalidGrid(format!(
                    "initial state has {}/{} values for {n} nodes",
                    s.u.len(),
                    s.v.len()
                )));
            }
            if s.v.iter().any(|&v| !(v >= 0.0)) || s.u.iter().any(|u| !u.is_finite()) {
                return Err(Error::InvalidParameter("initial data must be finite with v >= 0".into()));
            }
            s
        }
        None => LayerState::zeros(n),
    };
    let fs = lattice.sample(f);
    let h = lattice.spacing();
    let cell = lattice.cell_measure();
    let inflow: f64 = fs.iter().sum::<f64>();

    let mut detector = Detector::new(cfg);
    let mut mass_defect = Vec::new();
    let (mut injected, mut clipped) = (0.0, 0.0);
    let mut detection = None;
    let mut steps = 0;
    while steps < cfg.max_steps {
        let max_v = state.v.iter().copied().fold(0.0, f64::max);
        let dt = stable_dt(lattice.max_du(&state.u), max_v, p, cfg, h);
        let (mut next, diag) = lattice.step(&state, &fs, p, dt, cfg).map_err(|e| match e {
            Error::NonFinite { node, .. } => Error::NonFinite { step: steps, node },
            other => other,
        })?;
        steps += 1;
        mass_defect.push((cell * (diag.content_change - dt * inflow)).abs());
        injected += cell * dt * inflow;
        clipped += cell * diag.clipped;
        if next.u.iter().copied().fold(f64::INFINITY, f64::min) > REBASE_ABOVE {
            next.rebase();
        }
        state = next;
        observer(steps, &state);
        let d = detector.push(diag.rates);
        if d.converged {
            detection = Some(d);
            break;
        }
        detection = Some(d);
    }
    let d = detection.unwrap_or(super::Detection {
        converged: false,
        c_obs: 0.0,
    });
    let mut u_d = state.u.clone();
    min_shift(&mut u_d);
    Ok(RunReport {
        v_d: state.v.clone(),
        max_du: lattice.max_du(&state.u),
        u_d,
        state,
        steps,
        converged: d.converged,
        c_obs: d.c_obs,
        mass_defect,
        injected,
        clipped,
        h,
    })
}
