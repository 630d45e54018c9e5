//! Compressed sparse rows and conjugate gradient restricted to the
//! complement of the constant vector.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Square matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().expect("entry exists") += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let (s, e) = (self.row_ptr[r], self.row_ptr[r + 1]);
            *out = self.cols[s..e]
                .iter()
                .zip(&self.vals[s..e])
                .map(|(&c, &v)| v * x[c])
                .sum();
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_into(x, &mut y);
        y
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (s, e) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[s..e]
            .iter()
            .position(|&cc| cc == c)
            .map_or(0.0, |k| self.vals[s + k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOptions {
    /// Relative residual `||b - A x|| / ||b||` at which to stop.
    pub tolerance: f64,
    /// Iteration cap as a multiple of the system size.
    pub max_iter_factor: usize,
}

impl Default for CgOptions {
    fn default() -> Self {
        CgOptions {
            tolerance: 1e-10,
            max_iter_factor: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn remove_mean(x: &mut [f64]) {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= m);
}

/// Solve `A x = b` for symmetric positive semidefinite `A` whose kernel is
/// the constant vector. `b` and every iterate are projected onto the
/// orthogonal complement of the constants, so the returned `x` has zero sum.
pub fn projected_cg(
    a: &CsrMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &CgOptions,
) -> Result<CgOutcome> {
    let n = a.dim();
    let mut rhs = b.to_vec();
    remove_mean(&mut rhs);
    let bnorm = dot(&rhs, &rhs).sqrt();
    let mut x = x0.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    remove_mean(&mut x);
    if bnorm == 0.0 {
        return Ok(CgOutcome {
            x: vec![0.0; n],
            residual: 0.0,
            iterations: 0,
        });
    }

    let max_iter = opts.max_iter_factor * n;
    let mut ap = vec![0.0; n];
    let mut iterations = 0;
    let true_residual = |x: &[f64], ap: &mut Vec<f64>| {
        a.mul_into(x, ap);
        let r: Vec<f64> = rhs.iter().zip(ap.iter()).map(|(b, ax)| b - ax).collect();
        let rel = dot(&r, &r).sqrt() / bnorm;
        (r, rel)
    };

    // Restart from the true residual whenever the recursive one claims
    // convergence but the true one disagrees.
    loop {
        let (mut r, rel) = true_residual(&x, &mut ap);
        remove_mean(&mut r);
        if rel <= opts.tolerance {
            return Ok(CgOutcome {
                x,
                residual: rel,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Err(Error::NotConverged {
                iterations,
                residual: rel,
            });
        }
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        while iterations < max_iter {
            a.mul_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                break;
            }
            let step = rr / pap;
            for k in 0..n {
                x[k] += step * p[k];
                r[k] -= step * ap[k];
            }
            remove_mean(&mut x);
            remove_mean(&mut r);
            iterations += 1;
            let rr_new = dot(&r, &r);
            if rr_new.sqrt() / bnorm <= opts.tolerance {
                break;
            }
            let beta = rr_new / rr;
            rr = rr_new;
            for k in 0..n {
                p[k] = r[k] + beta * p[k];
            }
        }
    }
}
