//! Discrete similarity solutions from the flux potential.
//!
//! The flux `w = v grad u` of a similarity pair is the gradient of a
//! potential solving the pure Neumann problem `-lap psi = (f - c)/beta`.
//! Once `psi` is known the pair follows pointwise:
//!
//! ```text
//! V = c/(gamma*alpha) + |w|/alpha,    grad U = w / V
//! ```
//!
//! In 1D `U` is a running sum of the element slopes; in 2D it solves the
//! weighted Neumann problem `integral V grad U . grad phi = integral g phi`.

use crate::error::{Error, Result};
use crate::model::{min_shift, Grid1D, Grid2D, Parameters, SimilarityPair, SourceSpec};

use super::linalg::{projected_cg, CgOptions, CsrMatrix};
use super::mesh::{CourantMesh, FeMesh, IntervalMesh};

/// One value per element (per interval in 1D).
#[derive(Debug, Clone, PartialEq)]
pub struct ElementField<T> {
    pub values: Vec<T>,
}

impl<T> ElementField<T> {
    pub fn new(values: Vec<T>) -> Self {
        ElementField { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PotentialSolution {
    /// Nodal potential with zero (lumped-mass) mean.
    pub psi: Vec<f64>,
    /// Relative residual of the final iterate.
    pub residual_norm: f64,
    pub iterations: usize,
}

/// `c_h`: the source mean over the meshed domain (equal to the exact mean on
/// intervals and rectangles).
pub fn discrete_mean_rate<M: FeMesh>(f: &SourceSpec, mesh: &M) -> Result<f64> {
    let domain = mesh.domain();
    f.validate(&domain)?;
    let measure: f64 = (0..mesh.element_count())
        .map(|e| mesh.element_measure(e))
        .sum();
    Ok(f.total_mass() / measure)
}

/// Stiffness matrix `integral k grad phi_i . grad phi_j` with element-constant
/// weights `k` (unit weights when `None`).
pub fn assemble_stiffness<M: FeMesh>(mesh: &M, weights: Option<&[f64]>) -> CsrMatrix {
    let mut triplets = Vec::with_capacity(9 * mesh.element_count());
    for e in 0..mesh.element_count() {
        let k = weights.map_or(1.0, |w| w[e]) * mesh.element_measure(e);
        let nodes = mesh.element_nodes(e);
        let grads = mesh.hat_gradients(e);
        let (nodes, grads) = (nodes.as_ref(), grads.as_ref());
        for (a, &na) in nodes.iter().enumerate() {
            for (b, &nb) in nodes.iter().enumerate() {
                let d = grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1];
                triplets.push((na, nb, k * d));
            }
        }
    }
    CsrMatrix::from_triplets(mesh.node_count(), triplets)
}

/// Load vector of `g_h = (f - c_h)/beta` against the hat functions.
pub fn assemble_rhs<M: FeMesh>(f: &SourceSpec, mesh: &M, c_h: f64, beta: f64) -> Vec<f64> {
    let load = mesh.source_load(f);
    let weights = mesh.node_weights();
    load.iter()
        .zip(&weights)
        .map(|(l, w)| (l - c_h * w) / beta)
        .collect()
}

fn check_compatible(rhs: &[f64]) -> Result<()> {
    let sum: f64 = rhs.iter().sum();
    let scale: f64 = rhs.iter().map(|v| v.abs()).sum();
    if sum.abs() > 1e-12 * scale.max(1.0) {
        return Err(Error::InconsistentRhs { sum });
    }
    Ok(())
}

fn pin_mean<M: FeMesh>(field: &mut [f64], mesh: &M) {
    let w = mesh.node_weights();
    let mean = field.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / w.iter().sum::<f64>();
    field.iter_mut().for_each(|v| *v -= mean);
}

fn weighted_neumann<M: FeMesh>(
    f: &SourceSpec,
    mesh: &M,
    params: &Parameters,
    weights: Option<&[f64]>,
    cg: &CgOptions,
    guess: Option<&[f64]>,
) -> Result<PotentialSolution> {
    params.validate()?;
    let c_h = discrete_mean_rate(f, mesh)?;
    let rhs = assemble_rhs(f, mesh, c_h, params.beta);
    check_compatible(&rhs)?;
    let k = assemble_stiffness(mesh, weights);
    let out = projected_cg(&k, &rhs, guess, cg)?;
    let mut psi = out.x;
    pin_mean(&mut psi, mesh);
    Ok(PotentialSolution {
        psi,
        residual_norm: out.residual,
        iterations: out.iterations,
    })
}

/// Solve `-lap psi = (f - c_h)/beta` with natural Neumann conditions.
pub fn solve_potential<M: FeMesh>(
    f: &SourceSpec,
    mesh: &M,
    params: &Parameters,
) -> Result<PotentialSolution> {
    solve_potential_with(f, mesh, params, &CgOptions::default(), None)
}

pub fn solve_potential_with<M: FeMesh>(
    f: &SourceSpec,
    mesh: &M,
    params: &Parameters,
    cg: &CgOptions,
    guess: Option<&[f64]>,
) -> Result<PotentialSolution> {
    if f.total_mass() <= 0.0 {
        return Err(Error::ZeroMass);
    }
    weighted_neumann(f, mesh, params, None, cg, guess)
}

/// `w_h = grad psi_h` on every element.
pub fn flux_from_potential<M: FeMesh>(psi: &[f64], mesh: &M) -> ElementField<[f64; 2]> {
    ElementField::new(
        (0..mesh.element_count())
            .map(|e| mesh.gradient(e, psi))
            .collect(),
    )
}

fn norm(w: [f64; 2]) -> f64 {
    w[0].hypot(w[1])
}

/// Element-wise rolling layer `c_h/(gamma*alpha) + |w|/alpha`.
pub fn rolling_from_flux(w: &ElementField<[f64; 2]>, c_h: f64, params: &Parameters) -> ElementField<f64> {
    let base = c_h / (params.gamma * params.alpha);
    ElementField::new(
        w.values
            .iter()
            .map(|&wk| base + norm(wk) / params.alpha)
            .collect(),
    )
}

/// Element-wise standing-layer gradient `z = w / V`.
pub fn standing_gradient(
    w: &ElementField<[f64; 2]>,
    v: &ElementField<f64>,
) -> Result<ElementField<[f64; 2]>> {
    w.values
        .iter()
        .zip(&v.values)
        .enumerate()
        .map(|(e, (wk, &vk))| {
            if vk > 0.0 {
                Ok([wk[0] / vk, wk[1] / vk])
            } else {
                Err(Error::NonPositiveRolling {
                    element: e,
                    value: vk,
                })
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(ElementField::new)
}

/// Integrate interval slopes from the left wall: `u_0 = 0`,
/// `u_i = h * sum_{k < i} z_k`, then shift to minimum 0.
pub fn reconstruct_u_1d(z: &ElementField<[f64; 2]>, grid: &Grid1D) -> Vec<f64> {
    let h = grid.h();
    let mut u = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    u.push(acc);
    for zk in z.values.iter().take(grid.len() - 1) {
        acc += h * zk[0];
        u.push(acc);
    }
    min_shift(&mut u);
    u
}

/// Standing layer from the weighted Neumann problem with element weights
/// `v`; zero-mean pinned, then shifted to minimum 0.
pub fn reconstruct_u_2d<M: FeMesh>(
    v: &ElementField<f64>,
    f: &SourceSpec,
    mesh: &M,
    params: &Parameters,
) -> Result<Vec<f64>> {
    if let Some((e, &value)) = v.values.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::NonPositiveRolling { element: e, value });
    }
    let sol = weighted_neumann(f, mesh, params, Some(&v.values), &CgOptions::default(), None)?;
    let mut u = sol.psi;
    min_shift(&mut u);
    Ok(u)
}

/// Nodal average of an element field over the incident elements.
pub fn element_to_node<M: FeMesh>(field: &ElementField<f64>, mesh: &M) -> Vec<f64> {
    let mut sum = vec![0.0; mesh.node_count()];
    let mut count = vec![0usize; mesh.node_count()];
    for (e, &val) in field.values.iter().enumerate() {
        for &n in mesh.element_nodes(e).as_ref() {
            sum[n] += val;
            count[n] += 1;
        }
    }
    sum.iter()
        .zip(&count)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect()
}

/// Full discrete characterization on one mesh.
#[derive(Debug, Clone)]
pub struct DiscreteSimilarity {
    /// Nodal `u^e` (min 0), nodal `v^e` (element average), and `c_h`.
    pub pair: SimilarityPair,
    pub potential: PotentialSolution,
    pub flux: ElementField<[f64; 2]>,
    pub rolling: ElementField<f64>,
    pub gradient: ElementField<[f64; 2]>,
}

pub fn similarity_1d(f: &SourceSpec, grid: &Grid1D, params: &Parameters) -> Result<DiscreteSimilarity> {
    let mesh = IntervalMesh::new(*grid);
    let c_h = discrete_mean_rate(f, &mesh)?;
    let potential = solve_potential(f, &mesh, params)?;
    let flux = flux_from_potential(&potential.psi, &mesh);
    let rolling = rolling_from_flux(&flux, c_h, params);
    let gradient = standing_gradient(&flux, &rolling)?;
    let u = reconstruct_u_1d(&gradient, grid);
    let v = element_to_node(&rolling, &mesh);
    Ok(DiscreteSimilarity {
        pair: SimilarityPair { u, v, c: c_h },
        potential,
        flux,
        rolling,
        gradient,
    })
}

pub fn similarity_2d(f: &SourceSpec, grid: &Grid2D, params: &Parameters) -> Result<DiscreteSimilarity> {
    let mesh = CourantMesh::new(*grid);
    let c_h = discrete_mean_rate(f, &mesh)?;
    let potential = solve_potential(f, &mesh, params)?;
    let flux = flux_from_potential(&potential.psi, &mesh);
    let rolling = rolling_from_flux(&flux, c_h, params);
    let gradient = standing_gradient(&flux, &rolling)?;
    let u = reconstruct_u_2d(&rolling, f, &mesh, params)?;
    let v = element_to_node(&rolling, &mesh);
    Ok(DiscreteSimilarity {
        pair: SimilarityPair { u, v, c: c_h },
        potential,
        flux,
        rolling,
        gradient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::g_function;
    use crate::model::{Domain, Region};

    fn patch_1d(a: f64, b: f64) -> SourceSpec {
        SourceSpec::new().with_patch(Region::Interval { a, b }, 1.0)
    }

    #[test]
    fn flat_source_gives_flat_pair() {
        let g = Grid1D::with_spacing(1.0, 0.1).unwrap();
        let f = SourceSpec::uniform(&g.domain(), 2.0);
        let p = Parameters::new(1.0, 1.0, 4.0).unwrap();
        let d = similarity_1d(&f, &g, &p).unwrap();
        assert!((d.pair.c - 2.0).abs() < 1e-14);
        assert!(d.pair.u.iter().all(|&u| u.abs() < 1e-12));
        assert!(d.pair.v.iter().all(|&v| (v - 0.5).abs() < 1e-12));

        let g2 = Grid2D::square(1.0, 6).unwrap();
        let f2 = SourceSpec::uniform(&g2.domain(), 2.0);
        let d2 = similarity_2d(&f2, &g2, &p).unwrap();
        assert!(d2.pair.u.iter().all(|&u| u.abs() < 1e-12));
        assert!(d2.pair.v.iter().all(|&v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn stiffness_is_symmetric_with_zero_row_sums() {
        let mesh = CourantMesh::new(Grid2D::square(1.0, 5).unwrap());
        let k = assemble_stiffness(&mesh, None);
        let ones = vec![1.0; k.dim()];
        assert!(k.mul(&ones).iter().all(|r| r.abs() < 1e-12));
        for r in 0..k.dim() {
            for c in 0..k.dim() {
                assert!((k.get(r, c) - k.get(c, r)).abs() < 1e-14);
            }
        }
        assert!((k.get(6, 6) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rhs_is_compatible() {
        let mesh = CourantMesh::new(Grid2D::square(1.0, 17).unwrap());
        let f = SourceSpec::new().with_patch(Region::Disk { cx: 0.3, cy: 0.6, r: 0.17 }, 3.0);
        let c = discrete_mean_rate(&f, &mesh).unwrap();
        assert!((c - 3.0 * std::f64::consts::PI * 0.17 * 0.17).abs() < 1e-14);
        let rhs = assemble_rhs(&f, &mesh, c, 2.0);
        assert!(check_compatible(&rhs).is_ok());
        assert!(check_compatible(&[1.0, 0.5]).is_err());
    }

    #[test]
    fn interval_flux_matches_closed_form() {
        // Patch edges on nodes: G is linear on every element, so the element
        // gradient of the potential equals G/beta at the midpoint.
        let g = Grid1D::with_spacing(1.0, 0.05).unwrap();
        let f = patch_1d(0.4, 0.6);
        let p = Parameters::new(1.0, 2.0, 1.0).unwrap();
        let d = similarity_1d(&f, &g, &p).unwrap();
        for (e, w) in d.flux.values.iter().enumerate() {
            let mid = (e as f64 + 0.5) * g.h();
            let expect = g_function(&f, 1.0, mid).unwrap() / p.beta;
            assert!((w[0] - expect).abs() < 1e-11, "element {e}: {} vs {expect}", w[0]);
            assert_eq!(w[1], 0.0);
        }
    }

    #[test]
    fn zero_mass_and_bad_rolling_are_rejected() {
        let g = Grid1D::with_spacing(1.0, 0.1).unwrap();
        assert!(matches!(
            similarity_1d(&SourceSpec::new(), &g, &Parameters::unit()),
            Err(Error::ZeroMass)
        ));
        let w = ElementField::new(vec![[1.0, 0.0], [1.0, 0.0]]);
        let v = ElementField::new(vec![1.0, 0.0]);
        assert!(matches!(
            standing_gradient(&w, &v),
            Err(Error::NonPositiveRolling { element: 1, .. })
        ));
    }

    #[test]
    fn running_sum_and_min_shift() {
        let g = Grid1D::new(1.0, 5).unwrap();
        let z = ElementField::new(vec![[-1.0, 0.0], [-1.0, 0.0], [2.0, 0.0], [0.0, 0.0]]);
        assert_eq!(reconstruct_u_1d(&z, &g), vec![0.5, 0.25, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn node_average_of_elements() {
        let mesh = IntervalMesh::new(Grid1D::new(1.0, 4).unwrap());
        let field = ElementField::new(vec![1.0, 3.0, 5.0]);
        assert_eq!(element_to_node(&field, &mesh), vec![1.0, 2.0, 4.0, 5.0]);
    }

    #[test]
    fn centred_disk_is_transpose_symmetric() {
        let g = Grid2D::square(1.0, 17).unwrap();
        let f = SourceSpec::new().with_patch(Region::Disk { cx: 0.5, cy: 0.5, r: 0.2 }, 1.0);
        let d = similarity_2d(&f, &g, &Parameters::unit()).unwrap();
        let n = g.nx();
        for j in 0..n {
            for i in 0..n {
                let (a, b) = (g.index(i, j), g.index(j, i));
                assert!((d.pair.u[a] - d.pair.u[b]).abs() < 1e-8);
                assert!((d.pair.v[a] - d.pair.v[b]).abs() < 1e-8);
                let r = g.index(n - 1 - i, n - 1 - j);
                assert!((d.pair.u[a] - d.pair.u[r]).abs() < 1e-8);
            }
        }
        assert_eq!(d.pair.u.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
        assert!(d.potential.residual_norm < 1e-10);
        assert_eq!(d.pair.c, discrete_mean_rate(&f, &CourantMesh::new(g)).unwrap());
        assert!(matches!(mesh_domain(&g), Domain::Rectangle { .. }));
    }

    fn mesh_domain(g: &Grid2D) -> Domain {
        CourantMesh::new(*g).domain()
    }
}
