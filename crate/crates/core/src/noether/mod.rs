//! Symmetry criteria and conserved quantities.
//!
//! A vector field `v` generates a symmetry of `H` when
//! `v·∂̇_q H − (∂̇_q ∧ (v̇·P))·∂_P H = 0`; the charge `P·v` is then conserved
//! along motions.

mod current;

use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::{SurfaceMesh, Worldline};
use crate::ga::{Algebra, Multivector};
use crate::hamiltonian::HamiltonianModel;
use crate::transforms::{adjoint_inverse, field_jacobian, Diffeo, VectorField};
use crate::{Error, Result};

pub use current::{
    circle_flux, continuity_residual, energy_momentum_current, field_rotation_current, noether_current, patch_flux,
    rotation_currents, translation_current, ContinuityReport, CurrentGenerator, RotationCurrents, SpacetimeCurrent,
};

/// Infinitesimal symmetry defect of `v` at `(q, P)`.
pub fn symmetry_defect<M, V>(model: &M, v: &V, q: &Multivector, p: &Multivector) -> Result<f64>
where
    M: HamiltonianModel + ?Sized,
    V: VectorField + ?Sized,
{
    let vq = v.eval(q);
    let explicit = vq.dot(&model.grad_q_explicit(q, p));
    let transported = field_jacobian(v, q)?.overdot_wedge(p);
    let defect = explicit - transported.inner(&model.grad_p(q, p)).scalar_part();
    if !defect.is_finite() {
        return Err(Error::NonFinite("symmetry defect"));
    }
    Ok(defect)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub samples: usize,
    /// `max |H(f(q), f̄⁻¹(P)) − H(q, P)|`.
    pub max_defect: f64,
    pub worst_sample: usize,
}

/// Finite symmetry test `H(f(q), f̄⁻¹(P; q)) = H(q, P)` over sample points.
pub fn finite_symmetry_check<M, F>(model: &M, f: &F, samples: &[(Multivector, Multivector)]) -> Result<SymmetryReport>
where
    M: HamiltonianModel + ?Sized,
    F: Diffeo + ?Sized,
{
    let mut report = SymmetryReport {
        samples: samples.len(),
        max_defect: 0.0,
        worst_sample: 0,
    };
    for (k, (q, p)) in samples.iter().enumerate() {
        let moved = adjoint_inverse(f, p, q)?;
        let d = (model.eval(&f.apply(q), &moved) - model.eval(q, p)).abs();
        if !d.is_finite() {
            return Err(Error::NonFinite("finite symmetry defect"));
        }
        if d > report.max_defect {
            report.max_defect = d;
            report.worst_sample = k;
        }
    }
    Ok(report)
}

/// Charge `P·v` at a point of a motion.
#[derive(Clone, Debug, PartialEq)]
pub struct NoetherCharge {
    /// Grade `D − 1`; a scalar for worldlines.
    pub value: Multivector,
    pub location: Multivector,
    pub generator: String,
}

impl NoetherCharge {
    pub fn new<V: VectorField + ?Sized>(p: &Multivector, v: &V, q: &Multivector) -> Self {
        let vq = v.eval(q);
        // the Hestenes product drops scalars, so D = 1 goes through the scalar product
        let value = if p.homogeneous_grade() == Some(1) {
            Multivector::scalar(p.algebra(), p.dot(&vq))
        } else {
            p.inner(&vq)
        };
        Self {
            value,
            location: q.clone(),
            generator: v.label().into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChargeSeries {
    pub charges: Vec<NoetherCharge>,
    /// `max_k |Q_k − Q_0|` over coefficients.
    pub spread: f64,
}

/// `P·v` at every worldline sample.
pub fn charge_along_worldline<V: VectorField + ?Sized>(w: &Worldline, v: &V) -> ChargeSeries {
    let charges: Vec<NoetherCharge> = w.samples.iter().map(|s| NoetherCharge::new(&s.p, v, &s.q)).collect();
    let spread = charges
        .first()
        .map(|c0| charges.iter().map(|c| (&c.value - &c0.value).max_abs()).fold(0.0, f64::max))
        .unwrap_or(0.0);
    ChargeSeries { charges, spread }
}

/// `Σ dΣ·(P_f·v)` over the boundary edges of a face patch, with `dΣ` the
/// edge vector oriented by its face and `v` evaluated at the edge midpoint.
/// `momenta` holds one grade-2 momentum per face of `patch`.
pub fn mesh_patch_flux<V: VectorField + ?Sized>(
    mesh: &SurfaceMesh,
    patch: &[usize],
    momenta: &[Multivector],
    v: &V,
) -> Result<f64> {
    if patch.len() != momenta.len() {
        return Err(Error::LengthMismatch {
            expected: patch.len(),
            got: momenta.len(),
        });
    }
    let alg = Algebra::new(mesh.dim())?;
    let mut uses = alloc::collections::BTreeMap::new();
    for &f in patch {
        let face = mesh.faces().get(f).ok_or(Error::Invalid("face index out of range"))?;
        for k in 0..3 {
            let (a, b) = (face[k], face[(k + 1) % 3]);
            *uses.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
        }
    }
    let mut flux = 0.0;
    for (&f, p) in patch.iter().zip(momenta) {
        let face = mesh.faces()[f];
        for k in 0..3 {
            let (a, b) = (face[k], face[(k + 1) % 3]);
            if uses[&(a.min(b), a.max(b))] != 1 {
                continue;
            }
            let pa = mesh.vertex_vector(alg, a);
            let pb = mesh.vertex_vector(alg, b);
            let mid = &(&pa + &pb) * 0.5;
            flux += (&pb - &pa).dot(&p.inner(&v.eval(&mid)));
        }
    }
    Ok(flux)
}

#[cfg(test)]
mod tests;
