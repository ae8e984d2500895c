use alloc::vec;
use alloc::vec::Vec;

use super::grid::FieldGrid;
use crate::ga::Multivector;
use crate::hamiltonian::{eval_action, HamiltonianModel, ScalarFieldModel, SurfaceElement};
use crate::{Error, Result};

/// Consecutive residual increases treated as divergence.
pub const DIVERGENCE_WINDOW: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Stop once the max nodal residual of the discrete equation is below.
    pub tol: f64,
    pub max_iters: usize,
    /// Relaxation factor; `None` picks the optimal SOR factor for the
    /// Laplacian on this grid, `Some(1.0)` is plain Gauss-Seidel.
    pub omega: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 100_000,
            omega: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub sweeps: usize,
    pub residual: f64,
    pub omega: f64,
    /// Largest `|H_SF(q, 𝖯)|` over the recovered momenta.
    pub max_constraint: f64,
}

/// SOR factor `2 / (1 + √(1 − ρ²))` with `ρ` the Jacobi spectral radius of
/// the Dirichlet Laplacian.
pub fn optimal_omega(grid: &FieldGrid) -> f64 {
    let d = grid.spacetime_dim();
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..d {
        let w = 1.0 / (grid.spacing(k) * grid.spacing(k));
        num += w * libm::cos(core::f64::consts::PI / grid.cells()[k] as f64);
        den += w;
    }
    let rho = num / den;
    2.0 / (1.0 + libm::sqrt(1.0 - rho * rho))
}

fn check_split(grid: &FieldGrid, model: &ScalarFieldModel) -> Result<()> {
    if grid.split() != model.split() {
        return Err(Error::Invalid("grid and model use different spacetime splits"));
    }
    Ok(())
}

/// Residual `Δ_h φ_a + ∂V/∂φ_a` of the discrete field equation at an
/// interior node, for every component.
fn nodal_residual(grid: &FieldGrid, model: &ScalarFieldModel, node: usize, out: &mut [f64]) {
    let n = grid.field_dim();
    let phi = grid.phi_raw();
    let here = &phi[node * n..(node + 1) * n];
    let dv = model.potential().gradient(here);
    for a in 0..n {
        let mut lap = 0.0;
        for k in 0..grid.spacetime_dim() {
            let s = grid.stride(k);
            let h2 = grid.spacing(k) * grid.spacing(k);
            lap += (phi[(node + s) * n + a] + phi[(node - s) * n + a] - 2.0 * here[a]) / h2;
        }
        out[a] = lap + dv[a];
    }
}

/// Max nodal residual over interior nodes.
pub fn field_residual(grid: &FieldGrid, model: &ScalarFieldModel) -> Result<f64> {
    check_split(grid, model)?;
    let mut r = vec![0.0; grid.field_dim()];
    let mut max = 0.0f64;
    for node in grid.interior_nodes() {
        nodal_residual(grid, model, node, &mut r);
        for x in &r {
            max = max.max(x.abs());
        }
    }
    Ok(max)
}

/// Solves `Δφ_a = −∂V/∂φ_a` with the boundary values held fixed by
/// lexicographic nonlinear SOR (one Newton step per node and component),
/// then recovers the momenta. The grid is updated in place.
pub fn solve_scalar_field(grid: &mut FieldGrid, model: &ScalarFieldModel, opts: &SolveOptions) -> Result<SolveReport> {
    check_split(grid, model)?;
    if model.split().spacetime_dim() < 2 {
        return Err(Error::Invalid("field solver needs D >= 2"));
    }
    let omega = opts.omega.unwrap_or_else(|| optimal_omega(grid));
    if !(omega > 0.0 && omega < 2.0) {
        return Err(Error::Invalid("relaxation factor must lie in (0, 2)"));
    }
    let n = grid.field_dim();
    let d = grid.spacetime_dim();
    let diag_lap: f64 = (0..d).map(|k| -2.0 / (grid.spacing(k) * grid.spacing(k))).sum();
    let interior: Vec<usize> = grid.interior_nodes().collect();
    let mut r = vec![0.0; n];
    let mut previous = f64::INFINITY;
    let mut rising = 0;
    let mut sweeps = 0;
    let residual = loop {
        let mut sweep_max = 0.0f64;
        for &node in &interior {
            nodal_residual(grid, model, node, &mut r);
            let curv = model.potential().curvature(&grid.phi_raw()[node * n..(node + 1) * n]);
            for a in 0..n {
                sweep_max = sweep_max.max(r[a].abs());
                let diag = diag_lap + curv[a];
                if diag != 0.0 {
                    grid.phi_raw_mut()[node * n + a] -= omega * r[a] / diag;
                }
            }
        }
        if !sweep_max.is_finite() {
            return Err(Error::NonFinite("field solver residual"));
        }
        if sweep_max < opts.tol {
            // residuals seen mid-sweep lag behind; confirm on the final state
            let exact = field_residual(grid, model)?;
            if exact < opts.tol {
                break exact;
            }
        }
        rising = if sweep_max > previous { rising + 1 } else { 0 };
        previous = sweep_max;
        sweeps += 1;
        if rising >= DIVERGENCE_WINDOW {
            return Err(Error::Diverged {
                what: "field solver",
                iterations: sweeps,
                residual: sweep_max,
            });
        }
        if sweeps >= opts.max_iters {
            return Err(Error::NoConvergence {
                what: "field solver",
                iterations: sweeps,
                residual: sweep_max,
            });
        }
    };
    let max_constraint = recover_momentum(grid, model)?;
    Ok(SolveReport {
        sweeps,
        residual,
        omega,
        max_constraint,
    })
}

/// Sets the mixed components of `𝖯` from `∂_x φ_a`, fixes `𝖯·I_x` by the
/// constraint and leaves field bivectors at zero. Returns the largest
/// `|H_SF(q, 𝖯)|` over the nodes.
pub fn recover_momentum(grid: &mut FieldGrid, model: &ScalarFieldModel) -> Result<f64> {
    check_split(grid, model)?;
    let split = *model.split();
    let ix = split.ix();
    let mut momenta = Vec::with_capacity(grid.node_count());
    let mut worst = 0.0f64;
    for node in 0..grid.node_count() {
        let grads = grid.gradient(node);
        let mixed = split.mixed_momentum(&grads);
        let q = grid.point(node);
        let kinetic: f64 = grads.iter().flatten().map(|g| g * g).sum();
        let target = -0.5 * kinetic - model.potential().value(grid.phi(node));
        // P·I_x = c I_x·I_x for P = mixed + c I_x
        let p = &mixed + &(&ix * (target / split.ix_square()));
        if !p.is_finite() {
            return Err(Error::NonFinite("recovered momentum"));
        }
        worst = worst.max(model.eval(&q, &p).abs());
        momenta.push(p);
    }
    grid.set_momenta(momenta);
    Ok(worst)
}

/// Actions of a solved grid by the two routes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionComparison {
    /// Augmented action `Σ [𝖯·dΓ − λ H_SF]` over cells.
    pub hamiltonian: f64,
    /// `∫ (½ Σ |∂_x φ_a|² − V) |dX|`.
    pub lagrangian: f64,
}

impl ActionComparison {
    pub fn difference(&self) -> f64 {
        (self.hamiltonian - self.lagrangian).abs()
    }
}

/// Hamiltonian route per cell: averaged `𝖯` and `φ`, cell-centred gradients,
/// `dΓ = |dX| (I_x + Σ_a (I_x·∂_x φ_a) ∧ e_a)` and `λ = |dX|`. Lagrangian
/// route: nodal trapezoid rule with the grid gradients. Both agree to
/// `O(h²)`.
pub fn lagrangian_action_check(grid: &FieldGrid, model: &ScalarFieldModel) -> Result<ActionComparison> {
    check_split(grid, model)?;
    let momenta = grid.momenta().ok_or(Error::Invalid("momenta not recovered"))?;
    let split = *model.split();
    let d = grid.spacetime_dim();
    let n = grid.field_dim();
    let vol = grid.cell_volume();
    let ix = split.ix();

    let mut elements = Vec::new();
    let mut ps = Vec::new();
    for origin in grid.cell_origins() {
        let corners = grid.cell_corners(origin);
        let w = 1.0 / corners.len() as f64;
        let mut p = Multivector::zero(split.algebra());
        let mut phi = vec![0.0; n];
        let mut centre = vec![0.0; d];
        for &c in &corners {
            p += &(&momenta[c] * w);
            for (acc, v) in phi.iter_mut().zip(grid.phi(c)) {
                *acc += w * v;
            }
            for (acc, v) in centre.iter_mut().zip(grid.coords(c)) {
                *acc += w * v;
            }
        }
        // gradient along k: mean of the forward differences on the cell's k-edges
        let mut grads = vec![vec![0.0; d]; n];
        for (k, _) in centre.iter().enumerate() {
            let s = grid.stride(k);
            let h = grid.spacing(k);
            let edges: Vec<usize> = corners.iter().copied().filter(|c| grid.axis_index(*c, k) == grid.axis_index(origin, k)).collect();
            for (a, g) in grads.iter_mut().enumerate() {
                g[k] = edges.iter().map(|&c| (grid.phi(c + s)[a] - grid.phi(c)[a]) / h).sum::<f64>() / edges.len() as f64;
            }
        }
        elements.push(SurfaceElement {
            midpoint: split.point(&centre, &phi),
            d_gamma: &(&ix + &split.surface_tilt(&grads)) * vol,
        });
        ps.push(p);
    }
    let lambdas = vec![vol; elements.len()];
    let hamiltonian = eval_action(&elements, &ps, &lambdas, model)?;

    let mut lagrangian = 0.0;
    for node in 0..grid.node_count() {
        let weight: f64 = (0..d)
            .map(|k| {
                let i = grid.axis_index(node, k);
                let h = grid.spacing(k);
                if i == 0 || i == grid.cells()[k] {
                    0.5 * h
                } else {
                    h
                }
            })
            .product();
        let kinetic: f64 = grid.gradient(node).iter().flatten().map(|g| g * g).sum();
        lagrangian += weight * (0.5 * kinetic - model.potential().value(grid.phi(node)));
    }
    Ok(ActionComparison { hamiltonian, lagrangian })
}
