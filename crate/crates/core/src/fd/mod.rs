//! Explicit upwind finite differences for the evolution problem
//!
//! ```text
//! v_t = beta div(v grad u) - gamma (alpha - |grad u|) v + f
//! u_t = gamma (alpha - |grad u|) v
//! ```
//!
//! on node lattices over an interval or a rectangle, started from zero data
//! and stopped once every node grows at the same rate.

mod config;
mod detect;
mod ops;
mod run;

pub use config::{FluxRule, SchemeConfig, SlopeRule};
pub use detect::{detect_similarity, Detection, Detector};
pub use ops::{
    backward_difference, du_godunov, du_upwind, flux_g, forward_difference, max_du_1d, max_du_2d,
    stable_dt, step_1d, step_2d, StepDiagnostics, StepRates,
};
pub use run::{run, run_with, Alarms, Lattice, RunReport, CLIP_ALARM_FRACTION, MASS_ALARM_FACTOR};
