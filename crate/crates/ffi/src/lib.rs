//! C ABI over the silofill solvers.
//!
//! Every function returns an [`SfStatus`]; on failure the message is
//! available from [`sf_last_error_message`] on the same thread. Sources and
//! results are opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use silofill::exact::similarity_1d_exact;
use silofill::fd::{run, FluxRule, RunReport, SchemeConfig, SlopeRule};
use silofill::fem::{similarity_1d, similarity_2d};
use silofill::harness::{run_experiment, ExperimentConfig, Mode};
use silofill::{source_mean, Domain, Error, Grid1D, Grid2D, Location, Parameters, Region, SimilarityPair, SourceSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidGrid = 3,
    InvalidSource = 4,
    ZeroMass = 5,
    NotConverged = 6,
    Numerical = 7,
    Config = 8,
    Io = 9,
    Panic = 10,
}

impl From<&Error> for SfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter(_) => SfStatus::InvalidParameter,
            Error::InvalidGrid(_) => SfStatus::InvalidGrid,
            Error::InvalidSource(_) | Error::OutOfDomain { .. } => SfStatus::InvalidSource,
            Error::ZeroMass => SfStatus::ZeroMass,
            Error::NotConverged { .. } | Error::Undetected { .. } => SfStatus::NotConverged,
            Error::InconsistentRhs { .. } | Error::NonPositiveRolling { .. } | Error::NonFinite { .. } => {
                SfStatus::Numerical
            }
            Error::Config(_) => SfStatus::Config,
            Error::Io { .. } => SfStatus::Io,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfParameters {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfSlopeRule {
    Godunov = 0,
    MaxAbs = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfFluxRule {
    Interface = 0,
    Nodal = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfScheme {
    pub cfl_safety: f64,
    pub exchange_cap_safety: f64,
    pub stop_epsilon: f64,
    pub stop_window: usize,
    pub steady_epsilon: f64,
    pub max_steps: usize,
    pub slope: SfSlopeRule,
    pub flux: SfFluxRule,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfMode {
    Similarity = 0,
    Evolve = 1,
    Compare = 2,
}

/// Opaque source handle.
pub struct SfSource {
    spec: SourceSpec,
}

/// Opaque result handle: nodal `u`, `v`, the growth velocity and, for
/// evolutions, run diagnostics.
pub struct SfProfile {
    u: Vec<f64>,
    v: Vec<f64>,
    c: f64,
    steps: usize,
    converged: bool,
    alarm: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), (SfStatus, String)>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside silofill");
            SfStatus::Panic
        }
    }
}

fn fail(e: Error) -> (SfStatus, String) {
    (SfStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (SfStatus, String) {
    (SfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn source_ref<'a>(src: *const SfSource) -> Result<&'a SourceSpec, (SfStatus, String)> {
    src.as_ref().map(|s| &s.spec).ok_or_else(|| null("source"))
}

unsafe fn params_ref(p: *const SfParameters) -> Result<Parameters, (SfStatus, String)> {
    let p = p.as_ref().ok_or_else(|| null("parameters"))?;
    Parameters::new(p.alpha, p.beta, p.gamma).map_err(fail)
}

unsafe fn scheme_ref(s: *const SfScheme) -> Result<SchemeConfig, (SfStatus, String)> {
    let Some(s) = s.as_ref() else {
        return Ok(SchemeConfig::default());
    };
    let cfg = SchemeConfig {
        cfl_safety: s.cfl_safety,
        exchange_cap_safety: s.exchange_cap_safety,
        stop_epsilon: s.stop_epsilon,
        stop_window: s.stop_window,
        steady_epsilon: s.steady_epsilon,
        max_steps: s.max_steps,
        slope: match s.slope {
            SfSlopeRule::Godunov => SlopeRule::Godunov,
            SfSlopeRule::MaxAbs => SlopeRule::MaxAbs,
        },
        flux: match s.flux {
            SfFluxRule::Interface => FluxRule::Interface,
            SfFluxRule::Nodal => FluxRule::Nodal,
        },
    };
    cfg.validate().map_err(fail)?;
    Ok(cfg)
}

unsafe fn emit(out: *mut *mut SfProfile, p: SfProfile) -> Result<(), (SfStatus, String)> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(p));
    Ok(())
}

fn from_pair(p: SimilarityPair) -> SfProfile {
    SfProfile {
        u: p.u,
        v: p.v,
        c: p.c,
        steps: 0,
        converged: true,
        alarm: false,
    }
}

fn from_run(r: RunReport) -> SfProfile {
    SfProfile {
        alarm: r.alarms().any(),
        u: r.u_d,
        v: r.v_d,
        c: r.c_obs,
        steps: r.steps,
        converged: r.converged,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn sf_parameters_unit() -> SfParameters {
    SfParameters {
        alpha: 1.0,
        beta: 1.0,
        gamma: 1.0,
    }
}

#[no_mangle]
pub extern "C" fn sf_scheme_default() -> SfScheme {
    let d = SchemeConfig::default();
    SfScheme {
        cfl_safety: d.cfl_safety,
        exchange_cap_safety: d.exchange_cap_safety,
        stop_epsilon: d.stop_epsilon,
        stop_window: d.stop_window,
        steady_epsilon: d.steady_epsilon,
        max_steps: d.max_steps,
        slope: SfSlopeRule::Godunov,
        flux: SfFluxRule::Interface,
    }
}

/// New empty source; release with [`sf_source_free`].
#[no_mangle]
pub extern "C" fn sf_source_new() -> *mut SfSource {
    Box::into_raw(Box::new(SfSource {
        spec: SourceSpec::new(),
    }))
}

/// # Safety
/// `src` must come from [`sf_source_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_source_free(src: *mut SfSource) {
    if !src.is_null() {
        drop(Box::from_raw(src));
    }
}

unsafe fn add_patch(src: *mut SfSource, region: Region, intensity: f64) -> SfStatus {
    guard(|| {
        let s = src.as_mut().ok_or_else(|| null("source"))?;
        if !(intensity.is_finite() && intensity >= 0.0) {
            return Err((SfStatus::InvalidSource, format!("intensity must be >= 0, got {intensity}")));
        }
        s.spec.patches.push(silofill::Patch { region, intensity });
        Ok(())
    })
}

unsafe fn add_atom(src: *mut SfSource, at: Location, mass: f64) -> SfStatus {
    guard(|| {
        let s = src.as_mut().ok_or_else(|| null("source"))?;
        if !(mass.is_finite() && mass >= 0.0) {
            return Err((SfStatus::InvalidSource, format!("mass must be >= 0, got {mass}")));
        }
        s.spec.atoms.push(silofill::Atom { at, mass });
        Ok(())
    })
}

/// # Safety
/// `src` must be a live source handle.
#[no_mangle]
pub unsafe extern "C" fn sf_source_add_interval(src: *mut SfSource, a: f64, b: f64, intensity: f64) -> SfStatus {
    add_patch(src, Region::Interval { a, b }, intensity)
}

/// # Safety
/// `src` must be a live source handle.
#[no_mangle]
pub unsafe extern "C" fn sf_source_add_rect(
    src: *mut SfSource,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    intensity: f64,
) -> SfStatus {
    add_patch(src, Region::Rect { x0, x1, y0, y1 }, intensity)
}

/// # Safety
/// `src` must be a live source handle.
#[no_mangle]
pub unsafe extern "C" fn sf_source_add_disk(src: *mut SfSource, cx: f64, cy: f64, r: f64, intensity: f64) -> SfStatus {
    add_patch(src, Region::Disk { cx, cy, r }, intensity)
}

/// # Safety
/// `src` must be a live source handle.
#[no_mangle]
pub unsafe extern "C" fn sf_source_add_atom_1d(src: *mut SfSource, x: f64, mass: f64) -> SfStatus {
    add_atom(src, Location::Line(x), mass)
}

/// # Safety
/// `src` must be a live source handle.
#[no_mangle]
pub unsafe extern "C" fn sf_source_add_atom_2d(src: *mut SfSource, x: f64, y: f64, mass: f64) -> SfStatus {
    add_atom(src, Location::Plane([x, y]), mass)
}

/// Mean of the source over `[0, length]` (`ly <= 0`) or `[0, lx] x [0, ly]`.
///
/// # Safety
/// `src` must be a live source handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_source_mean(src: *const SfSource, lx: f64, ly: f64, out: *mut f64) -> SfStatus {
    guard(|| {
        let spec = source_ref(src)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let domain = if ly > 0.0 {
            Domain::Rectangle { lx, ly }
        } else {
            Domain::Interval { length: lx }
        };
        *out = source_mean(spec, &domain).map_err(fail)?;
        Ok(())
    })
}

/// Exact 1D similarity profile at `nodes` equispaced nodes of `[0, length]`.
///
/// # Safety
/// Pointers must be valid; `*out` receives a handle for [`sf_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn sf_exact_1d(
    src: *const SfSource,
    length: f64,
    nodes: usize,
    params: *const SfParameters,
    out: *mut *mut SfProfile,
) -> SfStatus {
    guard(|| {
        let (spec, p) = (source_ref(src)?, params_ref(params)?);
        let g = Grid1D::new(length, nodes).map_err(fail)?;
        emit(out, from_pair(similarity_1d_exact(spec, &g, &p).map_err(fail)?))
    })
}

/// Discrete (finite-element) 1D similarity profile.
///
/// # Safety
/// As [`sf_exact_1d`].
#[no_mangle]
pub unsafe extern "C" fn sf_similarity_1d(
    src: *const SfSource,
    length: f64,
    nodes: usize,
    params: *const SfParameters,
    out: *mut *mut SfProfile,
) -> SfStatus {
    guard(|| {
        let (spec, p) = (source_ref(src)?, params_ref(params)?);
        let g = Grid1D::new(length, nodes).map_err(fail)?;
        emit(out, from_pair(similarity_1d(spec, &g, &p).map_err(fail)?.pair))
    })
}

/// Discrete similarity profile on an `nx` x `ny` node lattice, `x` fastest.
///
/// # Safety
/// As [`sf_exact_1d`].
#[no_mangle]
pub unsafe extern "C" fn sf_similarity_2d(
    src: *const SfSource,
    lx: f64,
    ly: f64,
    nx: usize,
    ny: usize,
    params: *const SfParameters,
    out: *mut *mut SfProfile,
) -> SfStatus {
    guard(|| {
        let (spec, p) = (source_ref(src)?, params_ref(params)?);
        let g = Grid2D::new(lx, ly, nx, ny).map_err(fail)?;
        emit(out, from_pair(similarity_2d(spec, &g, &p).map_err(fail)?.pair))
    })
}

/// Evolve from rest until a similarity profile is detected. A run that
/// stops at `max_steps` still yields a profile; check
/// [`sf_profile_converged`]. `scheme` may be null for defaults.
///
/// # Safety
/// As [`sf_exact_1d`]; `scheme` is null or valid.
#[no_mangle]
pub unsafe extern "C" fn sf_evolve_1d(
    src: *const SfSource,
    length: f64,
    nodes: usize,
    params: *const SfParameters,
    scheme: *const SfScheme,
    out: *mut *mut SfProfile,
) -> SfStatus {
    guard(|| {
        let (spec, p, cfg) = (source_ref(src)?, params_ref(params)?, scheme_ref(scheme)?);
        let g = Grid1D::new(length, nodes).map_err(fail)?;
        emit(out, from_run(run(spec, &g, &p, &cfg).map_err(fail)?))
    })
}

/// # Safety
/// As [`sf_evolve_1d`].
#[no_mangle]
pub unsafe extern "C" fn sf_evolve_2d(
    src: *const SfSource,
    lx: f64,
    ly: f64,
    nx: usize,
    ny: usize,
    params: *const SfParameters,
    scheme: *const SfScheme,
    out: *mut *mut SfProfile,
) -> SfStatus {
    guard(|| {
        let (spec, p, cfg) = (source_ref(src)?, params_ref(params)?, scheme_ref(scheme)?);
        let g = Grid2D::new(lx, ly, nx, ny).map_err(fail)?;
        emit(out, from_run(run(spec, &g, &p, &cfg).map_err(fail)?))
    })
}

/// # Safety
/// `p` must come from one of the solver calls and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_free(p: *mut SfProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of nodes; 0 for a null handle.
///
/// # Safety
/// `p` is null or a live profile.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_len(p: *const SfProfile) -> usize {
    p.as_ref().map_or(0, |p| p.u.len())
}

/// Standing layer, minimum 0. Borrowed; valid while the handle lives.
///
/// # Safety
/// `p` is null or a live profile.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_u(p: *const SfProfile) -> *const f64 {
    p.as_ref().map_or(ptr::null(), |p| p.u.as_ptr())
}

/// Rolling layer. Borrowed; valid while the handle lives.
///
/// # Safety
/// `p` is null or a live profile.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_v(p: *const SfProfile) -> *const f64 {
    p.as_ref().map_or(ptr::null(), |p| p.v.as_ptr())
}

/// Growth velocity; NaN for a null handle.
///
/// # Safety
/// `p` is null or a live profile.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_c(p: *const SfProfile) -> f64 {
    p.as_ref().map_or(f64::NAN, |p| p.c)
}

/// Time steps taken (0 for similarity profiles).
///
/// # Safety
/// `p` is null or a live profile.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_steps(p: *const SfProfile) -> usize {
    p.as_ref().map_or(0, |p| p.steps)
}

/// # Safety
/// `p` is null or a live profile.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_converged(p: *const SfProfile) -> bool {
    p.as_ref().is_some_and(|p| p.converged)
}

/// True if the evolution tripped the clipping or mass-balance alarm.
///
/// # Safety
/// `p` is null or a live profile.
#[no_mangle]
pub unsafe extern "C" fn sf_profile_alarm(p: *const SfProfile) -> bool {
    p.as_ref().is_some_and(|p| p.alarm)
}

/// Run an experiment config file; `out_dir` (nullable) overrides its output
/// directory. `*success` is set as the CLI's exit status would be.
///
/// # Safety
/// `config_path` is a NUL-terminated path, `out_dir` null or one, `success` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_run_config(
    config_path: *const c_char,
    out_dir: *const c_char,
    mode: SfMode,
    success: *mut bool,
) -> SfStatus {
    guard(|| {
        if config_path.is_null() {
            return Err(null("config_path"));
        }
        let success = success.as_mut().ok_or_else(|| null("success"))?;
        let utf8 = |p: *const c_char| {
            CStr::from_ptr(p)
                .to_str()
                .map_err(|_| (SfStatus::InvalidParameter, "path is not UTF-8".to_string()))
        };
        let mut cfg = ExperimentConfig::load(Path::new(utf8(config_path)?)).map_err(fail)?;
        if !out_dir.is_null() {
            cfg = cfg.with_directory(utf8(out_dir)?);
        }
        let mode = match mode {
            SfMode::Similarity => Mode::Similarity,
            SfMode::Evolve => Mode::Evolve,
            SfMode::Compare => Mode::Compare,
        };
        *success = run_experiment(&cfg, mode).map_err(fail)?.success();
        Ok(())
    })
}
