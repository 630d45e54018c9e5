use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::similarity_1d_exact;
use crate::fd::{run_with, Alarms, RunReport};
use crate::fem::{similarity_1d, similarity_2d};
use crate::model::{max_abs_diff, source_mean, Grid1D, Grid2D, SimilarityPair};

use super::config::{ExperimentConfig, RowGrid};
use super::export::{write_profile_1d, write_profile_2d, write_string, SnapshotSeries};
use super::table::{fmt_value, ErrorRow, ErrorTable, COLUMNS_1D, COLUMNS_2D};

/// Which solvers an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Discrete similarity profiles only.
    Similarity,
    /// Evolution from zero data only.
    Evolve,
    /// Both, plus the exact profile in 1D.
    Compare,
}

impl Mode {
    fn fe(self) -> bool {
        self != Mode::Evolve
    }

    fn fd(self) -> bool {
        self != Mode::Similarity
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdSummary {
    pub steps: usize,
    pub converged: bool,
    pub c_obs: f64,
    pub max_du: f64,
    pub defect_rate: f64,
    pub clipped_fraction: f64,
    pub alarms: Alarms,
    pub snapshots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowReport {
    pub h: f64,
    pub nodes: usize,
    pub source_mean: f64,
    /// `c_h` of the discrete similarity profile.
    pub c_fe: Option<f64>,
    pub fd: Option<FdSummary>,
    /// Aligned with the table columns.
    pub errors: Vec<Option<f64>>,
    pub failure: Option<String>,
}

impl RowReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none() && self.fd.as_ref().is_none_or(|s| s.converged && !s.alarms.any())
    }

    fn status(&self) -> String {
        if let Some(msg) = &self.failure {
            return format!("failed: {}", msg.replace([',', '\n'], ";"));
        }
        match &self.fd {
            Some(s) if s.alarms.clipping && s.alarms.mass_balance => "alarm: clipping+mass".into(),
            Some(s) if s.alarms.clipping => "alarm: clipping".into(),
            Some(s) if s.alarms.mass_balance => "alarm: mass".into(),
            _ => "ok".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub mode: Mode,
    pub table: ErrorTable,
    pub rows: Vec<RowReport>,
    pub directory: PathBuf,
}

impl ExperimentReport {
    /// Every row completed and no evolution raised an alarm.
    pub fn success(&self) -> bool {
        self.rows.iter().all(RowReport::ok)
    }

    /// Per-row diagnostics as CSV.
    pub fn runs_csv(&self) -> String {
        let mut out = String::from(
            "h,nodes,source_mean,c_fe,c_fd,steps,converged,max_du,defect_rate,clipped_fraction,status\n",
        );
        let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), fmt_value);
        for r in &self.rows {
            let fd = r.fd.as_ref();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                fmt_value(r.h),
                r.nodes,
                fmt_value(r.source_mean),
                opt(r.c_fe),
                opt(fd.map(|s| s.c_obs)),
                fd.map_or_else(|| "NA".into(), |s| s.steps.to_string()),
                fd.map_or_else(|| "NA".into(), |s| s.converged.to_string()),
                opt(fd.map(|s| s.max_du)),
                opt(fd.map(|s| s.defect_rate)),
                opt(fd.map(|s| s.clipped_fraction)),
                r.status()
            ));
        }
        out
    }
}

/// Run every row of the sweep (concurrently) and write the requested files
/// under `cfg.output.directory`. Solver failures mark their row; only
/// configuration and I/O problems abort the whole experiment.
pub fn run_experiment(cfg: &ExperimentConfig, mode: Mode) -> Result<ExperimentReport> {
    cfg.validate()?;
    let dir = cfg.output.directory.clone();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let columns: &[&'static str] = match cfg.domain.dim() {
        1 => &COLUMNS_1D,
        _ => &COLUMNS_2D,
    };
    let rows: Vec<Result<RowReport>> = cfg
        .grid
        .h
        .par_iter()
        .enumerate()
        .map(|(k, &h)| run_row(cfg, mode, &row_dir(&dir, k), h, columns.len()))
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut table = ErrorTable::new(columns);
    table.rows = rows
        .iter()
        .map(|r| ErrorRow {
            h: r.h,
            errors: r.errors.clone(),
        })
        .collect();
    let report = ExperimentReport {
        mode,
        table,
        rows,
        directory: dir.clone(),
    };
    if cfg.output.table {
        write_string(&dir.join("table.csv"), &report.table.to_csv())?;
        write_string(&dir.join("runs.csv"), &report.runs_csv())?;
    }
    Ok(report)
}

pub fn row_dir(dir: &Path, k: usize) -> PathBuf {
    dir.join(format!("row{k:02}"))
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect()
}

fn summarize(r: &RunReport, snapshots: usize) -> FdSummary {
    FdSummary {
        steps: r.steps,
        converged: r.converged,
        c_obs: r.c_obs,
        max_du: r.max_du,
        defect_rate: r.defect_rate(),
        clipped_fraction: r.clipped_fraction(),
        alarms: r.alarms(),
        snapshots,
    }
}

/// Outcome of the solvers on one row, before errors are formed.
struct Solved {
    fe: Option<SimilarityPair>,
    fd: Option<RunReport>,
    snapshots: usize,
    failure: Option<String>,
}

fn solve<G, S, F>(
    cfg: &ExperimentConfig,
    mode: Mode,
    dir: &Path,
    grid: &G,
    fe_solver: S,
    write_snapshot: F,
) -> Result<Solved>
where
    G: crate::fd::Lattice,
    S: FnOnce() -> Result<SimilarityPair>,
    F: Fn(&mut SnapshotSeries, &[f64]) -> Result<()>,
{
    let mut failure = None;
    let fe = if mode.fe() {
        match fe_solver() {
            Ok(p) => Some(p),
            Err(e) => {
                failure = Some(format!("similarity: {e}"));
                None
            }
        }
    } else {
        None
    };
    let mut snapshots = 0;
    let fd = if mode.fd() {
        let every = cfg.output.snapshot_every;
        let mut series = SnapshotSeries::new(dir.join("snapshots"), "u");
        let mut io_error = None;
        if every > 0 {
            write_snapshot(&mut series, &vec![0.0; grid.node_count()])?;
        }
        let run = run_with(&cfg.source, grid, &cfg.parameters, &cfg.scheme, None, |k, s| {
            if every > 0 && k % every == 0 && io_error.is_none() {
                if let Err(e) = write_snapshot(&mut series, &s.heights()) {
                    io_error = Some(e);
                }
            }
        });
        if let Some(e) = io_error {
            return Err(e);
        }
        snapshots = series.written();
        match run {
            Ok(r) => {
                if !r.converged && failure.is_none() {
                    failure = Some(format!("evolution: {}", Error::Undetected { steps: r.steps }));
                }
                Some(r)
            }
            Err(e) => {
                failure.get_or_insert(format!("evolution: {e}"));
                None
            }
        }
    } else {
        None
    };
    Ok(Solved {
        fe,
        fd,
        snapshots,
        failure,
    })
}

fn run_row(cfg: &ExperimentConfig, mode: Mode, dir: &Path, h: f64, ncol: usize) -> Result<RowReport> {
    let mean = source_mean(&cfg.source, &cfg.domain)?;
    match cfg.grid_for(h)? {
        RowGrid::Line(g) => run_row_1d(cfg, mode, dir, &g, mean),
        RowGrid::Plane(g) => run_row_2d(cfg, mode, dir, &g, mean),
    }
    .inspect(|r| debug_assert_eq!(r.errors.len(), ncol))
}

fn run_row_1d(cfg: &ExperimentConfig, mode: Mode, dir: &Path, g: &Grid1D, mean: f64) -> Result<RowReport> {
    let out = &cfg.output;
    let p = &cfg.parameters;
    let solved = solve(
        cfg,
        mode,
        dir,
        g,
        || similarity_1d(&cfg.source, g, p).map(|d| d.pair),
        |s, u| s.push_1d(g, u),
    )?;
    let exact = similarity_1d_exact(&cfg.source, g, p)?;
    // FD results only count once a profile was detected.
    let fd = solved.fd.as_ref().filter(|r| r.converged);
    let fe = solved.fe.as_ref();
    let errors = vec![
        fe.map(|s| max_abs_diff(&s.u, &exact.u)),
        fd.map(|r| max_abs_diff(&r.u_d, &exact.u)),
        fe.map(|s| max_abs_diff(&s.v, &exact.v)),
        fd.map(|r| max_abs_diff(&r.v_d, &exact.v)),
    ];
    let write = |name: &str, v: &[f64]| write_profile_1d(&dir.join(name), g, v);
    if out.profiles {
        write("u_exact.csv", &exact.u)?;
        write("v_exact.csv", &exact.v)?;
        if let Some(s) = fe {
            write("u_fe.csv", &s.u)?;
            write("v_fe.csv", &s.v)?;
        }
        if let Some(r) = &solved.fd {
            write("u_fd.csv", &r.u_d)?;
            write("v_fd.csv", &r.v_d)?;
        }
    }
    if out.errors {
        if let Some(s) = fe {
            write("err_u_fe.csv", &diff(&s.u, &exact.u))?;
            write("err_v_fe.csv", &diff(&s.v, &exact.v))?;
        }
        if let Some(r) = fd {
            write("err_u_fd.csv", &diff(&r.u_d, &exact.u))?;
            write("err_v_fd.csv", &diff(&r.v_d, &exact.v))?;
        }
    }
    Ok(RowReport {
        h: g.h(),
        nodes: g.len(),
        source_mean: mean,
        c_fe: fe.map(|s| s.c),
        fd: solved.fd.as_ref().map(|r| summarize(r, solved.snapshots)),
        errors,
        failure: solved.failure,
    })
}

fn run_row_2d(cfg: &ExperimentConfig, mode: Mode, dir: &Path, g: &Grid2D, mean: f64) -> Result<RowReport> {
    let out = &cfg.output;
    let p = &cfg.parameters;
    let solved = solve(
        cfg,
        mode,
        dir,
        g,
        || similarity_2d(&cfg.source, g, p).map(|d| d.pair),
        |s, u| s.push_2d(g, u),
    )?;
    let fd = solved.fd.as_ref().filter(|r| r.converged);
    let fe = solved.fe.as_ref();
    let both = fe.zip(fd);
    let errors = vec![
        both.map(|(s, r)| max_abs_diff(&s.u, &r.u_d)),
        both.map(|(s, r)| max_abs_diff(&s.v, &r.v_d)),
    ];
    let write = |name: &str, v: &[f64]| write_profile_2d(&dir.join(name), g, v);
    if out.profiles {
        if let Some(s) = fe {
            write("u_fe.csv", &s.u)?;
            write("v_fe.csv", &s.v)?;
        }
        if let Some(r) = &solved.fd {
            write("u_fd.csv", &r.u_d)?;
            write("v_fd.csv", &r.v_d)?;
        }
    }
    if out.errors {
        if let Some((s, r)) = both {
            write("err_u.csv", &diff(&s.u, &r.u_d))?;
            write("err_v.csv", &diff(&s.v, &r.v_d))?;
        }
    }
    Ok(RowReport {
        h: g.h(),
        nodes: g.len(),
        source_mean: mean,
        c_fe: fe.map(|s| s.c),
        fd: solved.fd.as_ref().map(|r| summarize(r, solved.snapshots)),
        errors,
        failure: solved.failure,
    })
}
