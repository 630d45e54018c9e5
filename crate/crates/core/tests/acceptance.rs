//! Acceptance checks, one `PASS`/`FAIL` line per criterion.
//!
//! Exits 0 after printing unless `ACCEPTANCE_STRICT=1` is set, in which case
//! any failing criterion makes the target fail.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Mutex;

use silofill::exact::example1_exact;
use silofill::fd::{run, run_with, Lattice, RunReport, SchemeConfig};
use silofill::fem::similarity_1d;
use silofill::harness::{find_example, row_dir, run_experiment, ExperimentReport, Mode, Order};
use silofill::model::max_abs_diff;
use silofill::{source_mean, Grid1D, Grid2D, Location, Parameters, Region, SourceSpec};

const FLAT_SLOPE_TOL: f64 = 1e-12;
const FLAT_V_TOL: f64 = 1e-6;
const FLAT_C_TOL: f64 = 1e-10;
const VELOCITY_REL_TOL: f64 = 0.01;
const ORDER_RANGE: (f64, f64) = (0.7, 1.4);
const RATIO_RANGE: (f64, f64) = (1.6, 2.4);
const SYMMETRY_TOL: f64 = 1e-8;
/// `C_{j+1} <= CONSTANT_GROWTH * C_j` counts as a stable constant.
const CONSTANT_GROWTH: f64 = 1.25;

/// Evolution record used by the slope and mass-balance criteria.
#[derive(Debug, Clone)]
struct Record {
    family: String,
    h: f64,
    max_du: f64,
    alpha: f64,
    defect_rate: f64,
    inflow: f64,
    alarm: bool,
}

static RECORDS: Mutex<Vec<Record>> = Mutex::new(Vec::new());

fn record(family: &str, r: &RunReport, p: &Parameters) {
    if !r.converged {
        return;
    }
    RECORDS.lock().unwrap().push(Record {
        family: family.to_string(),
        h: r.h,
        max_du: r.max_du,
        alpha: p.alpha,
        defect_rate: r.defect_rate(),
        inflow: r.injected / r.state.t,
        alarm: r.alarms().any(),
    });
}

fn record_rows(family: &str, rep: &ExperimentReport, mass: f64, p: &Parameters) {
    for row in &rep.rows {
        if let Some(s) = row.fd.as_ref().filter(|s| s.converged) {
            RECORDS.lock().unwrap().push(Record {
                family: family.to_string(),
                h: row.h,
                max_du: s.max_du,
                alpha: p.alpha,
                defect_rate: s.defect_rate,
                inflow: mass,
                alarm: s.alarms.any(),
            });
        }
    }
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn in_range(x: f64, (lo, hi): (f64, f64)) -> bool {
    x >= lo && x <= hi
}

fn stable(cs: &[f64]) -> bool {
    cs.windows(2).all(|w| w[1] <= CONSTANT_GROWTH * w[0])
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
}

fn criterion_1() -> Verdict {
    let p = Parameters::unit();
    let cfg = SchemeConfig::default();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut ok = true;
    for k in [0.5, 1.0, 2.0] {
        let g1 = Grid1D::with_spacing(1.0, 0.02).unwrap();
        let g2 = Grid2D::with_spacing(1.0, 1.0, 0.0625).unwrap();
        let mut check = |r: RunReport, slope: f64| {
            let dv = r.v_d.iter().map(|v| (v - k).abs()).fold(0.0, f64::max);
            let dc = (r.c_obs - k).abs();
            ok &= r.converged && slope <= FLAT_SLOPE_TOL && dv <= FLAT_V_TOL && dc <= FLAT_C_TOL;
            worst = (worst.0.max(slope), worst.1.max(dv), worst.2.max(dc));
        };
        let mut slope = 0.0f64;
        let r = run_with(&SourceSpec::uniform(&g1.domain(), k), &g1, &p, &cfg, None, |_, s| {
            slope = slope.max(g1.max_du(&s.u));
        })
        .unwrap();
        check(r, slope);
        let mut slope = 0.0f64;
        let r = run_with(&SourceSpec::uniform(&g2.domain(), k), &g2, &p, &cfg, None, |_, s| {
            slope = slope.max(g2.max_du(&s.u));
        })
        .unwrap();
        check(r, slope);
    }
    verdict(
        ok,
        format!(
            "1D+2D, k in {{0.5,1,2}}: max|Du| {:.1e}, max|v-k| {:.1e}, max|c_obs-k| {:.1e}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn criterion_2() -> Verdict {
    let cases: Vec<(&str, SourceSpec, bool)> = vec![
        ("1D centred", SourceSpec::new().with_patch(Region::Interval { a: 0.45, b: 0.55 }, 1.0), false),
        ("1D off-centre", SourceSpec::new().with_patch(Region::Interval { a: 0.2, b: 0.3 }, 1.0), false),
        (
            "2D central ball",
            SourceSpec::new().with_patch(Region::Disk { cx: 0.5, cy: 0.5, r: 0.1 }, 1.0),
            true,
        ),
    ];
    let pairs = [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)];
    let jobs: Vec<(usize, usize)> = (0..cases.len()).flat_map(|c| (0..3).map(move |k| (c, k))).collect();
    let results: Vec<(usize, usize, f64, f64)> = {
        use rayon::prelude::*;
        jobs.par_iter()
            .map(|&(case, k)| {
                let (name, f, plane) = &cases[case];
                let p = Parameters::new(1.0, pairs[k].0, pairs[k].1).unwrap();
                let cfg = SchemeConfig::default();
                let (r, mean) = if *plane {
                    let g = Grid2D::with_spacing(1.0, 1.0, 1.0 / 64.0).unwrap();
                    (run(f, &g, &p, &cfg).unwrap(), source_mean(f, &g.domain()).unwrap())
                } else {
                    let g = Grid1D::with_spacing(1.0, 0.001).unwrap();
                    (run(f, &g, &p, &cfg).unwrap(), source_mean(f, &g.domain()).unwrap())
                };
                record(&format!("velocity {name} beta={} gamma={}", pairs[k].0, pairs[k].1), &r, &p);
                let c = if r.converged { r.c_obs } else { f64::NAN };
                (case, k, c, mean)
            })
            .collect()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (ci, (name, _, _)) in cases.iter().enumerate() {
        let rows: Vec<&(usize, usize, f64, f64)> = results.iter().filter(|r| r.0 == ci).collect();
        let mean = rows[0].3;
        let cs: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let worst = cs.iter().map(|c| ((c - mean) / mean).abs()).fold(0.0, f64::max);
        let cmax = cs.iter().cloned().fold(f64::MIN, f64::max);
        let cmin = cs.iter().cloned().fold(f64::MAX, f64::min);
        let spread = (cmax - cmin) / mean;
        let case_ok = worst <= VELOCITY_REL_TOL && spread <= VELOCITY_REL_TOL;
        ok &= case_ok;
        parts.push(format!(
            "{name}: c_obs/mean-1 up to {:.2}%, (beta,gamma) spread {:.1e}%{}",
            100.0 * worst,
            100.0 * spread,
            if case_ok { "" } else { " [off]" }
        ));
    }
    verdict(ok, parts.join("; "))
}

fn orders_of(rep: &ExperimentReport, col: &str) -> Vec<Order> {
    rep.table.orders(col).unwrap()
}

fn order_check(rep: &ExperimentReport, cols: &[&str]) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for col in cols {
        let errs: Vec<f64> = rep.table.column(col).unwrap().iter().map(|e| e.unwrap_or(f64::NAN)).collect();
        let orders = orders_of(rep, col);
        let vals: Vec<f64> = orders.iter().map(|o| o.value().unwrap_or(f64::NAN)).collect();
        let col_ok = vals.iter().all(|&p| in_range(p, ORDER_RANGE));
        ok &= col_ok;
        parts.push(format!(
            "{col} [{}] orders [{}]{}",
            fmt_list(&errs),
            vals.iter().map(|p| format!("{p:.2}")).collect::<Vec<_>>().join(" "),
            if col_ok { "" } else { " [out of range]" }
        ));
    }
    verdict(ok, parts.join("; "))
}

fn table_sweep(dir: &Path) -> ExperimentReport {
    let ex = find_example("centred-patch-1d").unwrap();
    let cfg = ex.config().unwrap().with_directory(dir);
    let rep = run_experiment(&cfg, Mode::Compare).unwrap();
    record_rows("centred patch sweep", &rep, cfg.source.total_mass(), &cfg.parameters);
    rep
}

fn criterion_5() -> Verdict {
    let p = Parameters::unit();
    let f = SourceSpec::new().with_atom(Location::Line(0.5), 1.0);
    let hs = [0.02, 0.01, 0.005];
    let mut cu_fe = Vec::new();
    let mut cu_fd = Vec::new();
    let mut cv_fe = Vec::new();
    let mut cv_fd = Vec::new();
    let mut ok = true;
    for &h in &hs {
        let g = Grid1D::with_spacing(1.0, h).unwrap();
        let oracle = example1_exact(&g, &p);
        let mid = g.len() / 2;
        ok &= (oracle.u[mid] - (0.5 - 1.5f64.ln())).abs() < 1e-12;
        let fe = similarity_1d(&f, &g, &p).unwrap().pair;
        let fd = run(&f, &g, &p, &SchemeConfig::default()).unwrap();
        record("point source", &fd, &p);
        ok &= fd.converged;
        let off = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .enumerate()
                .filter(|(i, _)| *i != mid)
                .map(|(_, (x, y))| (x - y).abs())
                .fold(0.0, f64::max)
        };
        cu_fe.push(max_abs_diff(&fe.u, &oracle.u) / h);
        cu_fd.push(max_abs_diff(&fd.u_d, &oracle.u) / h);
        cv_fe.push(off(&fe.v, &oracle.v) / h);
        cv_fd.push(off(&fd.v_d, &oracle.v) / h);
    }
    for cs in [&cu_fe, &cu_fd, &cv_fe, &cv_fd] {
        ok &= stable(cs);
    }
    verdict(
        ok,
        format!(
            "h 0.02/0.01/0.005, C=err/h: u_fe [{}] u_fd [{}] v_fe [{}] v_fd [{}]",
            fmt_list(&cu_fe),
            fmt_list(&cu_fd),
            fmt_list(&cv_fe),
            fmt_list(&cv_fd)
        ),
    )
}

fn families() -> BTreeMap<String, Vec<Record>> {
    let mut out: BTreeMap<String, Vec<Record>> = BTreeMap::new();
    for r in RECORDS.lock().unwrap().iter() {
        out.entry(r.family.clone()).or_default().push(r.clone());
    }
    for v in out.values_mut() {
        v.sort_by(|a, b| b.h.partial_cmp(&a.h).unwrap());
    }
    out
}

fn criterion_6() -> Verdict {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for recs in families().values() {
        let cs: Vec<f64> = recs.iter().map(|r| ((r.max_du - r.alpha) / r.h).max(0.0)).collect();
        worst = recs.iter().map(|r| r.max_du / r.alpha).fold(worst, f64::max);
        runs += recs.len();
        ok &= cs.iter().all(|&c| c == 0.0) || stable(&cs);
    }
    ok &= runs > 0;
    verdict(ok, format!("{runs} accepted runs, max |Du|/alpha = {worst:.4}"))
}

fn criterion_7() -> Verdict {
    let recs = RECORDS.lock().unwrap().clone();
    let worst = recs
        .iter()
        .map(|r| r.defect_rate / (r.h * r.inflow))
        .fold(0.0, f64::max);
    let alarms = recs.iter().filter(|r| r.alarm).count();
    let ok = !recs.is_empty() && alarms == 0 && worst <= silofill::fd::MASS_ALARM_FACTOR;
    verdict(
        ok,
        format!(
            "{} runs, max defect/(h * inflow) = {worst:.2e} (bound {}), alarms {alarms}",
            recs.len(),
            silofill::fd::MASS_ALARM_FACTOR
        ),
    )
}

fn read_field(path: &Path) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}

/// Largest deviation under transpose, half turn and anti-transpose.
fn asymmetry(u: &[f64], n: usize) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            let a = u[j * n + i];
            for b in [u[i * n + j], u[(n - 1 - j) * n + (n - 1 - i)], u[(n - 1 - i) * n + (n - 1 - j)]] {
                m = m.max((a - b).abs());
            }
        }
    }
    m
}

fn criterion_8(dir: &Path) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["central-ball-2d", "two-balls-2d"] {
        let ex = find_example(name).unwrap();
        let cfg = ex.config().unwrap().with_directory(dir.join(name));
        let rep = run_experiment(&cfg, Mode::Compare).unwrap();
        record_rows(name, &rep, cfg.source.total_mass(), &cfg.parameters);
        let mut ratios = Vec::new();
        for col in ["err_u", "err_v"] {
            let e = rep.table.column(col).unwrap();
            let r = match (e[0], e[1]) {
                (Some(a), Some(b)) if b > 0.0 => a / b,
                _ => f64::NAN,
            };
            ok &= in_range(r, RATIO_RANGE);
            ratios.push(r);
        }
        let mut asym: f64 = 0.0;
        for (k, row) in rep.rows.iter().enumerate() {
            let n = (row.nodes as f64).sqrt().round() as usize;
            for f in ["u_fe.csv", "v_fe.csv", "u_fd.csv", "v_fd.csv"] {
                let p = row_dir(&cfg.output.directory, k).join(f);
                if p.is_file() {
                    asym = asym.max(asymmetry(&read_field(&p), n));
                } else {
                    asym = f64::INFINITY;
                }
            }
        }
        ok &= asym <= SYMMETRY_TOL && rep.success();
        parts.push(format!(
            "{name}: ratios u {:.2} v {:.2}, asymmetry {asym:.1e}{}",
            ratios[0],
            ratios[1],
            if rep.success() { "" } else { " [row failed]" }
        ));
    }
    verdict(ok, parts.join("; "))
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn criterion_9(dir: &Path) -> Verdict {
    let mut ok = true;
    let mut files = 0;
    for (name, hs) in [("centred-patch-1d", vec![0.02, 0.01, 0.005]), ("two-balls-2d", vec![0.0625, 0.03125])] {
        let base = find_example(name).unwrap().config().unwrap().with_h_list(hs).unwrap();
        let mut trees = Vec::new();
        for run in ["a", "b"] {
            let mut cfg = base.clone().with_directory(dir.join(name).join(run));
            cfg.output.snapshot_every = 500;
            run_experiment(&cfg, Mode::Compare).unwrap();
            trees.push(tree(&cfg.output.directory));
        }
        files += trees[0].len();
        ok &= !trees[0].is_empty() && trees[0] == trees[1];
    }
    verdict(ok, format!("two compare runs each of a 1D and a 2D sweep, {files} files byte-identical"))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let (c34, (c5, (c8, (c2, (c1, c9))))) = rayon::join(
        || {
            let rep = table_sweep(&dir.path().join("table"));
            (order_check(&rep, &["err_u_fe", "err_v_fe"]), order_check(&rep, &["err_u_fd", "err_v_fd"]))
        },
        || {
            rayon::join(criterion_5, || {
                rayon::join(
                    || criterion_8(&dir.path().join("plane")),
                    || rayon::join(criterion_2, || rayon::join(criterion_1, || criterion_9(&dir.path().join("det")))),
                )
            })
        },
    );
    let c6 = criterion_6();
    let c7 = criterion_7();
    let all = [
        ("1 flat-fill exactness", c1),
        ("2 growth velocity law", c2),
        ("3 FE similarity convergence", c34.0),
        ("4 FD asymptotic convergence", c34.1),
        ("5 point-source oracle", c5),
        ("6 slope bound", c6),
        ("7 mass balance", c7),
        ("8 2D cross-validation", c8),
        ("9 determinism", c9),
    ];
    let mut failed = 0;
    for (name, v) in &all {
        println!("{} criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
