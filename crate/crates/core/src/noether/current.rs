use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::FieldGrid;
use crate::ga::Multivector;
use crate::hamiltonian::ScalarFieldModel;
use crate::transforms::{Affine, VectorField};
use crate::{Error, Result};

/// Generator behind a spacetime current.
#[derive(Clone, Debug, PartialEq)]
pub enum CurrentGenerator {
    Translation { v: Vec<f64> },
    /// `v(x) = (x − x₀)·B_x` with `B_x` given by its blade coefficients.
    SpacetimeRotation { bivector: Multivector, center: Vec<f64> },
    /// Rotation of field space by `B_y`.
    FieldRotation { bivector: Multivector },
    Other(String),
}

/// A spacetime vector per grid node.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeCurrent {
    /// `values[node][k]`, the `e_k` component.
    pub values: Vec<Vec<f64>>,
    pub generator: CurrentGenerator,
    /// Largest field-space component dropped when the current was formed;
    /// zero up to roundoff for the `P·v` route.
    pub field_leak: f64,
}

impl SpacetimeCurrent {
    pub fn max_difference(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }
}

fn lagrangian_density(model: &ScalarFieldModel, phi: &[f64], grads: &[Vec<f64>]) -> f64 {
    let kinetic: f64 = grads.iter().flatten().map(|g| g * g).sum();
    0.5 * kinetic - model.potential().value(phi)
}

fn check_grid(grid: &FieldGrid, model: &ScalarFieldModel) -> Result<()> {
    if grid.split() != model.split() {
        return Err(Error::Invalid("grid and model use different spacetime splits"));
    }
    Ok(())
}

/// `j = −v L + Σ_a (v·∂_x φ_a) ∂_x φ_a` with `v = v(x)` a spacetime vector
/// per node.
pub fn translation_current(
    grid: &FieldGrid,
    model: &ScalarFieldModel,
    v: impl Fn(&[f64]) -> Vec<f64>,
    generator: CurrentGenerator,
) -> Result<SpacetimeCurrent> {
    check_grid(grid, model)?;
    let d = grid.spacetime_dim();
    let values = (0..grid.node_count())
        .map(|node| {
            let grads = grid.gradient(node);
            let vx = v(&grid.coords(node));
            let l = lagrangian_density(model, grid.phi(node), &grads);
            let mut j: Vec<f64> = vx.iter().take(d).map(|c| -c * l).collect();
            for g in &grads {
                let vg: f64 = vx.iter().zip(g).map(|(a, b)| a * b).sum();
                for (jk, gk) in j.iter_mut().zip(g) {
                    *jk += vg * gk;
                }
            }
            j
        })
        .collect();
    Ok(SpacetimeCurrent {
        values,
        generator,
        field_leak: 0.0,
    })
}

/// Energy-momentum current for a constant spacetime translation `v_x`.
pub fn energy_momentum_current(grid: &FieldGrid, model: &ScalarFieldModel, v_x: &[f64]) -> Result<SpacetimeCurrent> {
    if v_x.len() != grid.spacetime_dim() {
        return Err(Error::LengthMismatch {
            expected: grid.spacetime_dim(),
            got: v_x.len(),
        });
    }
    translation_current(grid, model, |_| v_x.to_vec(), CurrentGenerator::Translation { v: v_x.to_vec() })
}

/// Current from the charge `𝖯·v` of an arbitrary generator:
/// `j = −I_x·[𝖯·v + Σ_i e_i ((∂_i y)·(𝖯·v))]`, where the bracket is the
/// charge contracted with the lifted boundary element of the graph.
pub fn noether_current<V: VectorField + ?Sized>(
    grid: &FieldGrid,
    model: &ScalarFieldModel,
    v: &V,
    generator: CurrentGenerator,
) -> Result<SpacetimeCurrent> {
    check_grid(grid, model)?;
    let momenta = grid.momenta().ok_or(Error::Invalid("momenta not recovered"))?;
    let split = *model.split();
    let alg = split.algebra();
    let d = split.spacetime_dim();
    let ix = split.ix();
    let mut values = Vec::with_capacity(grid.node_count());
    let mut leak = 0.0f64;
    for node in 0..grid.node_count() {
        let q = grid.point(node);
        let charge = momenta[node].inner(&v.eval(&q));
        let grads = grid.gradient(node);
        let mut k = charge.clone();
        for i in 0..d {
            let mut dy = Multivector::zero(alg);
            for (a, g) in grads.iter().enumerate() {
                dy += &(&split.field_basis(a) * g[i]);
            }
            k += &split.spacetime_basis(i).outer(&dy.inner(&charge));
        }
        let j = -&ix.inner(&k);
        if !j.is_finite() {
            return Err(Error::NonFinite("Noether current"));
        }
        leak = leak.max(split.field_component_norm(&j));
        values.push(split.spacetime_part(&j));
    }
    Ok(SpacetimeCurrent {
        values,
        generator,
        field_leak: leak,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotationCurrents {
    /// `j_tr(x; (x − x₀)·B_x)`.
    pub spacetime: SpacetimeCurrent,
    /// `Σ_{a,b} ((e_a∧e_b)·B_y) φ_a ∂_x φ_b`.
    pub field: SpacetimeCurrent,
}

/// Currents of spacetime rotations about `x0` and of field rotations.
pub fn rotation_currents(
    grid: &FieldGrid,
    model: &ScalarFieldModel,
    b_x: &Multivector,
    x0: &[f64],
    b_y: &Multivector,
) -> Result<RotationCurrents> {
    let split = *model.split();
    let centre = split.spacetime_vector(x0);
    let rot = Affine::rotation_about(b_x.clone(), &centre);
    let spacetime = translation_current(
        grid,
        model,
        |x| split.spacetime_part(&rot.eval(&split.spacetime_vector(x))),
        CurrentGenerator::SpacetimeRotation {
            bivector: b_x.clone(),
            center: x0.to_vec(),
        },
    )?;
    let field = field_rotation_current(grid, model, b_y)?;
    Ok(RotationCurrents { spacetime, field })
}

pub fn field_rotation_current(grid: &FieldGrid, model: &ScalarFieldModel, b_y: &Multivector) -> Result<SpacetimeCurrent> {
    check_grid(grid, model)?;
    let split = *model.split();
    let n = split.field_dim();
    let d = split.spacetime_dim();
    let mut weights = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                weights[a * n + b] = split.field_basis(a).outer(&split.field_basis(b)).inner(b_y).scalar_part();
            }
        }
    }
    let values = (0..grid.node_count())
        .map(|node| {
            let phi = grid.phi(node);
            let grads = grid.gradient(node);
            let mut j = vec![0.0; d];
            for a in 0..n {
                for b in 0..n {
                    let w = weights[a * n + b] * phi[a];
                    if w != 0.0 {
                        for (jk, gk) in j.iter_mut().zip(&grads[b]) {
                            *jk += w * gk;
                        }
                    }
                }
            }
            j
        })
        .collect();
    Ok(SpacetimeCurrent {
        values,
        generator: CurrentGenerator::FieldRotation { bivector: b_y.clone() },
        field_leak: 0.0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport {
    /// Central-difference `∂_x·j` per node. Only nodes whose neighbours
    /// all carry centred gradients are evaluated; the rest hold 0.
    pub per_node: Vec<f64>,
    pub max: f64,
    /// `(Σ r² |dX|)^{1/2}` over the evaluated nodes.
    pub l2: f64,
}

pub fn continuity_residual(grid: &FieldGrid, current: &SpacetimeCurrent) -> Result<ContinuityReport> {
    if current.values.len() != grid.node_count() {
        return Err(Error::LengthMismatch {
            expected: grid.node_count(),
            got: current.values.len(),
        });
    }
    let d = grid.spacetime_dim();
    let mut per_node = vec![0.0; grid.node_count()];
    let (mut max, mut sum) = (0.0f64, 0.0);
    let cells = grid.cells();
    // the first interior layer would difference one-sided boundary gradients
    let deep = |node: usize| (0..d).all(|k| {
        let i = grid.axis_index(node, k);
        i >= 2 && i + 2 <= cells[k]
    });
    for node in (0..grid.node_count()).filter(|&n| deep(n)) {
        let mut div = 0.0;
        for k in 0..d {
            let s = grid.stride(k);
            div += (current.values[node + s][k] - current.values[node - s][k]) / (2.0 * grid.spacing(k));
        }
        per_node[node] = div;
        max = max.max(div.abs());
        sum += div * div;
    }
    Ok(ContinuityReport {
        per_node,
        max,
        l2: libm::sqrt(sum * grid.cell_volume()),
    })
}

/// Outward flux `∮ j·n dS` through the boundary of the node box
/// `[from[k], to[k]]`, by the trapezoid rule on each face.
pub fn patch_flux(grid: &FieldGrid, current: &SpacetimeCurrent, from: &[usize], to: &[usize]) -> Result<f64> {
    if !grid.contains_index_box(from, to) {
        return Err(Error::Invalid("patch must be a non-empty box inside the grid"));
    }
    let d = grid.spacetime_dim();
    let mut flux = 0.0;
    for k in 0..d {
        for (side, sign) in [(from[k], -1.0), (to[k], 1.0)] {
            let mut idx = from.to_vec();
            idx[k] = side;
            loop {
                let node = grid.index(&idx);
                let w: f64 = (0..d)
                    .filter(|&m| m != k)
                    .map(|m| {
                        let h = grid.spacing(m);
                        if idx[m] == from[m] || idx[m] == to[m] {
                            0.5 * h
                        } else {
                            h
                        }
                    })
                    .product();
                flux += sign * w * current.values[node][k];
                // advance the face multi-index, skipping axis k
                let mut m = 0;
                loop {
                    if m == d {
                        break;
                    }
                    if m != k {
                        if idx[m] < to[m] {
                            idx[m] += 1;
                            break;
                        }
                        idx[m] = from[m];
                    }
                    m += 1;
                }
                if m == d {
                    break;
                }
            }
        }
    }
    Ok(flux)
}

/// Outward flux through the circle of `radius` about `center` for `D = 2`,
/// with `samples` midpoint nodes and bilinear interpolation of `j`.
pub fn circle_flux(
    grid: &FieldGrid,
    current: &SpacetimeCurrent,
    center: &[f64],
    radius: f64,
    samples: usize,
) -> Result<f64> {
    if grid.spacetime_dim() != 2 {
        return Err(Error::Invalid("circle flux needs D = 2"));
    }
    let (lo, hi) = (grid.lo(), grid.hi());
    if center[0] - radius < lo[0] || center[0] + radius > hi[0] || center[1] - radius < lo[1] || center[1] + radius > hi[1] {
        return Err(Error::OutOfDomain("circle leaves the grid"));
    }
    let (hx, hy) = (grid.spacing(0), grid.spacing(1));
    let (nx, ny) = (grid.cells()[0], grid.cells()[1]);
    let ds = 2.0 * core::f64::consts::PI * radius / samples as f64;
    let mut flux = 0.0;
    for s in 0..samples {
        let t = 2.0 * core::f64::consts::PI * (s as f64 + 0.5) / samples as f64;
        let (c, sn) = (libm::cos(t), libm::sin(t));
        let (x, y) = (center[0] + radius * c, center[1] + radius * sn);
        let fx = ((x - lo[0]) / hx).clamp(0.0, nx as f64);
        let fy = ((y - lo[1]) / hy).clamp(0.0, ny as f64);
        let (i, j) = ((fx as usize).min(nx - 1), (fy as usize).min(ny - 1));
        let (u, w) = (fx - i as f64, fy - j as f64);
        let at = |a: usize, b: usize| &current.values[grid.index(&[a, b])];
        let mut jv = [0.0; 2];
        for (k, jk) in jv.iter_mut().enumerate() {
            *jk = (1.0 - u) * (1.0 - w) * at(i, j)[k]
                + u * (1.0 - w) * at(i + 1, j)[k]
                + u * w * at(i + 1, j + 1)[k]
                + (1.0 - u) * w * at(i, j + 1)[k];
        }
        flux += (jv[0] * c + jv[1] * sn) * ds;
    }
    Ok(flux)
}
