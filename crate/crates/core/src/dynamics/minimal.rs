use alloc::vec;
use alloc::vec::Vec;

use super::mesh::{dot, CurvatureResidual, SurfaceMesh};
use crate::{Error, Result};

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-30;
/// Faces shrinking below this fraction of the mean face area count as
/// degenerate.
const DEGENERATE_FRACTION: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DescentMethod {
    /// Dual-area preconditioned steepest descent.
    Steepest,
    /// Polak-Ribière conjugate gradients with the same preconditioner,
    /// restarted whenever the direction is not a descent direction.
    #[default]
    ConjugateGradient,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxOptions {
    pub tension: f64,
    /// Stop once every free vertex has `|∂A/∂q_i| < tol`.
    pub tol: f64,
    pub max_iters: usize,
    pub method: DescentMethod,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self {
            tension: 1.0,
            tol: 1e-8,
            max_iters: 100_000,
            method: DescentMethod::ConjugateGradient,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxReport {
    pub iterations: usize,
    pub initial_area: f64,
    pub final_area: f64,
    /// Nambu-Goto action `Λ · area`.
    pub action: f64,
    pub max_gradient: f64,
    /// Initial area plus the accumulated per-step changes after every
    /// accepted step.
    pub area_history: Vec<f64>,
    pub curvature: CurvatureResidual,
}

impl RelaxReport {
    /// Whether the recorded areas never increase.
    pub fn monotone(&self) -> bool {
        self.area_history.windows(2).all(|w| w[1] <= w[0])
    }
}

fn max_vertex_norm(g: &[f64], dim: usize) -> f64 {
    g.chunks_exact(dim).map(|c| libm::sqrt(dot(c, c))).fold(0.0, f64::max)
}

/// Change of total area under `x → x + t d`, evaluated per face from the
/// edge increments so that tiny changes do not cancel against the total.
/// `None` if some face falls below `min_area`.
fn area_change(dim: usize, coords: &[f64], dir: &[f64], t: f64, faces: &[[usize; 3]], min_area: f64) -> Option<f64> {
    let mut total = 0.0;
    let mut u = vec![0.0; dim];
    let mut w = vec![0.0; dim];
    let mut du = vec![0.0; dim];
    let mut dw = vec![0.0; dim];
    for &[a, b, c] in faces {
        for k in 0..dim {
            u[k] = coords[b * dim + k] - coords[a * dim + k];
            w[k] = coords[c * dim + k] - coords[a * dim + k];
            du[k] = t * (dir[b * dim + k] - dir[a * dim + k]);
            dw[k] = t * (dir[c * dim + k] - dir[a * dim + k]);
        }
        let (uu, ww, uw) = (dot(&u, &u), dot(&w, &w), dot(&u, &w));
        if du.iter().chain(&dw).all(|x| *x == 0.0) {
            continue;
        }
        let d_uu = 2.0 * dot(&u, &du) + dot(&du, &du);
        let d_ww = 2.0 * dot(&w, &dw) + dot(&dw, &dw);
        let d_uw = dot(&u, &dw) + dot(&du, &w) + dot(&du, &dw);
        let (uu1, uw1) = (uu + d_uu, uw + d_uw);
        // Δ(uu ww − uw²) without forming either product difference
        let d_gram = d_uu * (ww + d_ww) + uu * d_ww - d_uw * (uw + uw1);
        let old = 0.5 * libm::sqrt((uu * ww - uw * uw).max(0.0));
        let new_sq = 0.25 * (uu1 * (ww + d_ww) - uw1 * uw1);
        if !(new_sq > min_area * min_area) {
            return None;
        }
        let new = libm::sqrt(new_sq);
        total += 0.25 * d_gram / (old + new);
    }
    total.is_finite().then_some(total)
}

/// Minimizes total triangle area over the free vertices by preconditioned
/// descent with Armijo backtracking. The mesh is updated in place, also
/// when an error is returned.
pub fn relax_minimal_surface(mesh: &mut SurfaceMesh, opts: &RelaxOptions) -> Result<RelaxReport> {
    if !(opts.tension > 0.0 && opts.tol > 0.0) {
        return Err(Error::Invalid("tension and tolerance must be positive"));
    }
    let (face, area) = mesh.min_face_area();
    if !(area > 0.0) {
        return Err(Error::DegenerateFace { face, area });
    }
    let dim = mesh.dim();
    let faces = mesh.faces().to_vec();
    let fixed = mesh.fixed_flags().to_vec();
    let n = mesh.coords().len();
    let initial_area = mesh.total_area();
    let min_area = DEGENERATE_FRACTION * initial_area / faces.len().max(1) as f64;

    let mut g = vec![0.0; n];
    let mut g_prev = vec![0.0; n];
    let mut z_prev = vec![0.0; n];
    let mut dir = vec![0.0; n];
    let mut history = vec![initial_area];
    let mut area = initial_area;
    let mut step = 1.0;
    let mut have_prev = false;
    let mut iterations = 0;

    loop {
        SurfaceMesh::gradient_into(dim, mesh.coords(), &faces, &fixed, &mut g)?;
        let gmax = max_vertex_norm(&g, dim);
        if gmax < opts.tol {
            let curvature = mesh.mean_curvature_residual()?;
            let final_area = mesh.total_area();
            return Ok(RelaxReport {
                iterations,
                initial_area,
                final_area,
                action: opts.tension * final_area,
                max_gradient: gmax,
                area_history: history,
                curvature,
            });
        }
        if iterations >= opts.max_iters {
            return Err(Error::NoConvergence {
                what: "minimal-surface relaxation",
                iterations,
                residual: gmax,
            });
        }
        let dual = mesh.dual_areas();
        let z: Vec<f64> = g.iter().enumerate().map(|(k, gk)| gk / dual[k / dim]).collect();
        let mut beta = 0.0;
        if have_prev && opts.method == DescentMethod::ConjugateGradient {
            let num: f64 = z.iter().zip(g.iter().zip(&g_prev)).map(|(zk, (a, b))| zk * (a - b)).sum();
            let den = dot(&z_prev, &g_prev);
            if den > 0.0 {
                beta = (num / den).max(0.0);
            }
        }
        for k in 0..n {
            dir[k] = -z[k] + beta * dir[k];
        }
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            for k in 0..n {
                dir[k] = -z[k];
            }
            slope = dot(&g, &dir);
        }

        // backtracking from a grown copy of the last accepted step
        let mut t = step * 2.0;
        let accepted = loop {
            match area_change(dim, mesh.coords(), &dir, t, &faces, min_area) {
                Some(da) if da <= ARMIJO * t * slope => break Some(area + da),
                _ => {}
            }
            t *= 0.5;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some(new_area) = accepted else {
            if beta != 0.0 {
                // retry from steepest descent
                have_prev = false;
                continue;
            }
            return Err(Error::NoConvergence {
                what: "minimal-surface line search",
                iterations,
                residual: gmax,
            });
        };
        for (x, d) in mesh.coords_mut().iter_mut().zip(&dir) {
            *x += t * d;
        }
        area = new_area;
        history.push(area);
        step = t;
        core::mem::swap(&mut g_prev, &mut g);
        z_prev = z;
        have_prev = true;
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::mesh::{catenoid_area, project_to_circle};

    #[test]
    fn flat_boundary_is_a_fixed_point() {
        let mut m = SurfaceMesh::flat_disk(3, 1.0, 5).unwrap();
        let before = m.clone();
        let r = relax_minimal_surface(&mut m, &RelaxOptions { tol: 1e-12, ..Default::default() }).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.max_gradient < 1e-12);
        assert_eq!(m, before);
    }

    #[test]
    fn bumped_flat_boundary_relaxes_to_flat() {
        let mut m = SurfaceMesh::grid_patch(6, 6, |x, y| vec![x, y, 0.0]).unwrap();
        m.map_free_vertices(|p| vec![p[0], p[1], 0.3 * libm::sin(3.0 * p[0]) * p[1]]);
        let r = relax_minimal_surface(&mut m, &RelaxOptions { tol: 1e-10, ..Default::default() }).unwrap();
        assert!(r.monotone());
        assert!((r.final_area - 1.0).abs() < 1e-12);
        assert!(m.vertices().all(|v| v[2].abs() < 1e-9));
    }

    #[test]
    fn skew_quadrilateral_area_decreases() {
        let c = [vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0]];
        let lifted = [c[0].clone(), c[1].clone(), vec![1.0, 1.0, 1.0], c[3].clone()];
        let mut m = SurfaceMesh::bilinear_patch([&lifted[0], &lifted[1], &lifted[2], &lifted[3]], 8).unwrap();
        let a0 = m.total_area();
        let r = relax_minimal_surface(&mut m, &RelaxOptions { tol: 1e-7, ..Default::default() }).unwrap();
        assert!(r.final_area <= a0);
        assert!(r.monotone());
    }

    #[test]
    fn coarse_catenoid_area() {
        let proj = project_to_circle(libm::cosh(0.5));
        let mut m = SurfaceMesh::catenoid_initial(0.5, 6, 1).unwrap();
        for _ in 0..3 {
            m = m.refine(Some(&proj));
        }
        for method in [DescentMethod::Steepest, DescentMethod::ConjugateGradient] {
            let mut mm = m.clone();
            let opts = RelaxOptions { tol: 1e-7, method, ..Default::default() };
            let r = relax_minimal_surface(&mut mm, &opts).unwrap();
            assert!(r.monotone());
            assert!((r.final_area / catenoid_area(0.5) - 1.0).abs() < 0.02, "{}", r.final_area);
        }
    }

    #[test]
    fn iteration_cap_is_an_error() {
        let proj = project_to_circle(libm::cosh(0.5));
        let mut m = SurfaceMesh::catenoid_initial(0.5, 6, 1).unwrap().refine(Some(&proj)).refine(Some(&proj));
        let r = relax_minimal_surface(&mut m, &RelaxOptions { tol: 1e-12, max_iters: 3, ..Default::default() });
        assert!(matches!(r, Err(Error::NoConvergence { iterations: 3, .. })));
    }
}
