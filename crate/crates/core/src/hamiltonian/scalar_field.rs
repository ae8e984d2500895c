use alloc::vec::Vec;

use super::potential::Potential;
use super::HamiltonianModel;
use crate::ga::{blade_grade, reverse_sign, Algebra, Multivector};
use crate::{Error, Result};

/// Sign of the spacetime pseudoscalar relative to `e1 ∧ … ∧ e_D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

/// Split of configuration space `C = spacetime ⊕ field space`: the first
/// `D` generators span spacetime, the next `N` are the field basis `e_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimeSplit {
    alg: Algebra,
    spacetime_dim: usize,
    field_dim: usize,
    orientation: Orientation,
}

impl SpacetimeSplit {
    pub fn new(spacetime_dim: usize, field_dim: usize, orientation: Orientation) -> Result<Self> {
        if spacetime_dim == 0 || field_dim == 0 {
            return Err(Error::Invalid("spacetime and field dimensions must be positive"));
        }
        let alg = Algebra::new(spacetime_dim + field_dim)?;
        Ok(Self {
            alg,
            spacetime_dim,
            field_dim,
            orientation,
        })
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn spacetime_dim(&self) -> usize {
        self.spacetime_dim
    }

    pub fn field_dim(&self) -> usize {
        self.field_dim
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn ix_blade(&self) -> usize {
        (1 << self.spacetime_dim) - 1
    }

    /// Unit spacetime pseudoscalar `I_x`.
    pub fn ix(&self) -> Multivector {
        Multivector::blade(self.alg, self.ix_blade(), self.orientation.sign())
    }

    /// `I_x · I_x = ±1`.
    pub fn ix_square(&self) -> f64 {
        reverse_sign(self.spacetime_dim)
    }

    /// Field basis vector `e_a`, zero-based `a`.
    pub fn field_basis(&self, a: usize) -> Multivector {
        Multivector::basis(self.alg, self.spacetime_dim + a)
    }

    pub fn spacetime_basis(&self, i: usize) -> Multivector {
        Multivector::basis(self.alg, i)
    }

    /// `q = x + Σ φ_a e_a`.
    pub fn point(&self, x: &[f64], phi: &[f64]) -> Multivector {
        let mut coords = Vec::with_capacity(self.alg.dim());
        coords.extend_from_slice(&x[..self.spacetime_dim]);
        coords.extend_from_slice(&phi[..self.field_dim]);
        Multivector::vector(self.alg, &coords).expect("split dimensions match algebra")
    }

    pub fn spacetime_part(&self, q: &Multivector) -> Vec<f64> {
        (0..self.spacetime_dim).map(|i| q.coeff(1 << i)).collect()
    }

    pub fn field_part(&self, q: &Multivector) -> Vec<f64> {
        (0..self.field_dim)
            .map(|a| q.coeff(1 << (self.spacetime_dim + a)))
            .collect()
    }

    /// Spacetime vector from components.
    pub fn spacetime_vector(&self, x: &[f64]) -> Multivector {
        let mut v = alloc::vec![0.0; self.alg.dim()];
        v[..self.spacetime_dim].copy_from_slice(&x[..self.spacetime_dim]);
        Multivector::vector(self.alg, &v).expect("split dimensions match algebra")
    }

    /// Whether every grade-1 component of `v` lies in spacetime.
    pub fn field_component_norm(&self, v: &Multivector) -> f64 {
        libm::sqrt(self.field_part(v).iter().map(|x| x * x).sum())
    }

    /// Mixed momentum components from the field gradients `∂_x φ_a`:
    /// inverts `∂_x φ_a = I_x (P·e_a)` as `P_a = (I_x⁻¹ g_a) ∧ e_a`.
    pub fn mixed_momentum(&self, gradients: &[Vec<f64>]) -> Multivector {
        let ix_inv = self.ix().reverse();
        let mut p = Multivector::zero(self.alg);
        for (a, g) in gradients.iter().enumerate() {
            let g = self.spacetime_vector(g);
            p += &ix_inv.gp(&g).grade(self.spacetime_dim - 1).outer(&self.field_basis(a));
        }
        p
    }

    /// `(I_x·∂_x) ∧ y` assembled from the field gradients: the first-order
    /// tilt of a graph's surface element.
    pub fn surface_tilt(&self, gradients: &[Vec<f64>]) -> Multivector {
        let ix = self.ix();
        let mut t = Multivector::zero(self.alg);
        for (a, g) in gradients.iter().enumerate() {
            t += &ix.inner(&self.spacetime_vector(g)).outer(&self.field_basis(a));
        }
        t
    }
}

/// `H_SF = P·I_x + ½ Σ_a (I_x·(P·e_a))² + V(y)`.
///
/// `I_x·(P·e_a)` is a spacetime vector, linear in the mixed components of
/// `P`; its images on the grade-`D` basis blades are tabulated once.
#[derive(Clone, Debug)]
pub struct ScalarFieldModel {
    split: SpacetimeSplit,
    potential: Potential,
    /// Per field `a`: `(blade J, I_x·(e_J·e_a))` for blades with nonzero image.
    tilt_images: Vec<Vec<(usize, Multivector)>>,
}

impl ScalarFieldModel {
    pub fn new(split: SpacetimeSplit, potential: Potential) -> Result<Self> {
        if split.spacetime_dim < 2 {
            return Err(Error::Invalid("scalar-field model needs spacetime dimension D >= 2"));
        }
        if let Potential::Anisotropic { masses } = &potential {
            if masses.len() != split.field_dim {
                return Err(Error::LengthMismatch {
                    expected: split.field_dim,
                    got: masses.len(),
                });
            }
        }
        let alg = split.alg;
        let ix = split.ix();
        let tilt_images = (0..split.field_dim)
            .map(|a| {
                let ea = split.field_basis(a);
                alg.blades_of_grade(split.spacetime_dim)
                    .filter_map(|j| {
                        let img = ix.inner(&Multivector::blade(alg, j, 1.0).inner(&ea));
                        (img.max_abs() > 0.0).then_some((j, img))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            split,
            potential,
            tilt_images,
        })
    }

    pub fn split(&self) -> &SpacetimeSplit {
        &self.split
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    /// `I_x·(P·e_a)`.
    pub fn tilt(&self, a: usize, p: &Multivector) -> Multivector {
        let mut t = Multivector::zero(self.split.alg);
        for (j, img) in &self.tilt_images[a] {
            let c = p.coeff(*j);
            if c != 0.0 {
                t += &(img * c);
            }
        }
        t
    }

    /// `H_DW = ½ Σ_a (I_x·(P·e_a))² + V(y)`.
    pub fn eval_dw(&self, q: &Multivector, p: &Multivector) -> f64 {
        let kinetic: f64 = (0..self.split.field_dim)
            .map(|a| self.tilt(a, p).norm_sq())
            .sum();
        0.5 * kinetic + self.potential.value(&self.split.field_part(q))
    }

    /// `∂_P H_DW`.
    pub fn grad_p_dw(&self, p: &Multivector) -> Multivector {
        let alg = self.split.alg;
        let mut g = Multivector::zero(alg);
        for a in 0..self.split.field_dim {
            let t = self.tilt(a, p);
            for (j, img) in &self.tilt_images[a] {
                let d = t.dot(img);
                if d != 0.0 {
                    g += &Multivector::blade(alg, *j, reverse_sign(blade_grade(*j)) * d);
                }
            }
        }
        g
    }
}

impl HamiltonianModel for ScalarFieldModel {
    fn algebra(&self) -> Algebra {
        self.split.alg
    }

    fn motion_dim(&self) -> usize {
        self.split.spacetime_dim
    }

    fn eval(&self, q: &Multivector, p: &Multivector) -> f64 {
        p.inner(&self.split.ix()).scalar_part() + self.eval_dw(q, p)
    }

    fn grad_q_explicit(&self, q: &Multivector, _p: &Multivector) -> Multivector {
        let grad = self.potential.gradient(&self.split.field_part(q));
        let mut out = Multivector::zero(self.split.alg);
        for (a, g) in grad.iter().enumerate() {
            out += &(&self.split.field_basis(a) * *g);
        }
        out
    }

    fn grad_p(&self, _q: &Multivector, p: &Multivector) -> Multivector {
        &self.split.ix() + &self.grad_p_dw(p)
    }

    /// `H_SF` is affine in the `I_x` component of `P`, so projection only
    /// moves that component.
    fn constraint_direction(&self, _q: &Multivector, _p: &Multivector) -> Multivector {
        self.split.ix().reverse()
    }

    fn label(&self) -> &str {
        "scalar_field"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn model(d: usize, n: usize, v: Potential) -> ScalarFieldModel {
        ScalarFieldModel::new(SpacetimeSplit::new(d, n, Orientation::Positive).unwrap(), v).unwrap()
    }

    #[test]
    fn rejects_one_dimensional_spacetime() {
        let split = SpacetimeSplit::new(1, 2, Orientation::Positive).unwrap();
        assert!(ScalarFieldModel::new(split, Potential::Zero).is_err());
    }

    #[test]
    fn two_dimensional_components() {
        // P = p0 e12 + p1 e13 + p2 e23: H = -p0 + ½(p1² + p2²) + V
        let m = model(2, 1, Potential::Mass { m: 2.0 });
        let a = m.algebra();
        let p = Multivector::from_terms(a, &[(0b011, 0.5), (0b101, 0.3), (0b110, -0.7)]);
        let q = Multivector::vector(a, &[0.1, 0.2, 0.4]).unwrap();
        let expected = -0.5 + 0.5 * (0.09 + 0.49) + 0.5 * 4.0 * 0.16;
        assert!((m.eval(&q, &p) - expected).abs() < 1e-14);
        let g = m.grad_p(&q, &p);
        let expected_g = Multivector::from_terms(a, &[(0b011, 1.0), (0b101, -0.3), (0b110, 0.7)]);
        assert!((&g - &expected_g).max_abs() < 1e-14);
    }

    #[test]
    fn mixed_momentum_reproduces_gradients() {
        let m = model(3, 2, Potential::Zero);
        let split = *m.split();
        let grads = vec![vec![0.3, -1.0, 0.5], vec![2.0, 0.1, -0.4]];
        let p = split.mixed_momentum(&grads);
        for (a, g) in grads.iter().enumerate() {
            // ∂_x φ_a = I_x (P·e_a)
            let back = split.ix().gp(&p.inner(&split.field_basis(a)));
            assert!((&back - &split.spacetime_vector(g)).max_abs() < 1e-14);
            // and the tilt equals the gradient
            assert!((&m.tilt(a, &p) - &split.spacetime_vector(g)).max_abs() < 1e-14);
        }
    }

    #[test]
    fn no_explicit_spacetime_dependence() {
        let m = model(2, 2, Potential::Quartic { m: 1.0, g: 0.5 });
        let a = m.algebra();
        let p = Multivector::from_terms(a, &[(0b0011, 0.2), (0b0101, 0.3), (0b1010, -0.6)]);
        let q = Multivector::vector(a, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        let shifted = &q + &m.split().spacetime_vector(&[5.0, -3.0]);
        assert_eq!(m.eval(&q, &p), m.eval(&shifted, &p));
    }
}
