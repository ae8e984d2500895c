use alloc::vec::Vec;

use super::algebra::{blade_grade, reverse_sign, GradeSet};
use super::multivector::Multivector;
use crate::{Error, Result};

/// Finite-difference step policy for central differences.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Step {
    /// `1e-5 * max(1, |x|)` where `x` is the coordinate being perturbed.
    #[default]
    Auto,
    Fixed(f64),
}

impl Step {
    pub const AUTO_SCALE: f64 = 1e-5;

    #[inline]
    pub fn at(self, x: f64) -> f64 {
        match self {
            Step::Auto => Self::AUTO_SCALE * x.abs().max(1.0),
            Step::Fixed(h) => h,
        }
    }
}

/// Multivector derivative `∂_P F` of a scalar function, restricted to the
/// blades whose grade lies in `grades`.
///
/// Each coefficient is a central difference in `P_J`; the reciprocal frame
/// of a unit Euclidean blade is its reverse, so the result on `e_J` is
/// `reverse_sign(J) * ∂F/∂P_J`.
pub fn mv_derivative<F>(f: F, p: &Multivector, grades: GradeSet, step: Step) -> Result<Multivector>
where
    F: Fn(&Multivector) -> f64,
{
    let alg = p.algebra();
    let mut coeffs = alloc::vec![0.0; alg.blade_count()];
    let mut probe = p.coeffs().to_vec();
    for (blade, slot) in coeffs.iter_mut().enumerate() {
        let g = blade_grade(blade);
        if !grades.contains(g) {
            continue;
        }
        let x = probe[blade];
        let h = step.at(x);
        probe[blade] = x + h;
        let fp = f(&Multivector::from_coeffs(alg, probe.clone())?);
        probe[blade] = x - h;
        let fm = f(&Multivector::from_coeffs(alg, probe.clone())?);
        probe[blade] = x;
        if !(fp.is_finite() && fm.is_finite()) {
            return Err(Error::NonFinite("multivector derivative"));
        }
        *slot = reverse_sign(g) * (fp - fm) / (2.0 * h);
    }
    Multivector::from_coeffs(alg, coeffs)
}

/// Directional derivatives `e_i · ∂_q G` of a multivector-valued map along
/// each basis direction, with helpers assembling the vector-derivative
/// combinations from them.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalDerivatives {
    samples: Vec<Multivector>,
}

impl DirectionalDerivatives {
    pub fn from_samples(samples: Vec<Multivector>) -> Self {
        Self { samples }
    }

    pub fn along(&self, i: usize) -> &Multivector {
        &self.samples[i]
    }

    pub fn samples(&self) -> &[Multivector] {
        &self.samples
    }

    fn combine(&self, op: impl Fn(&Multivector, &Multivector) -> Multivector) -> Multivector {
        let alg = self.samples[0].algebra();
        let mut acc = Multivector::zero(alg);
        for (i, s) in self.samples.iter().enumerate() {
            acc += &op(&Multivector::basis(alg, i), s);
        }
        acc
    }

    /// `∂_q G = Σ e_i (e_i·∂_q G)`.
    pub fn gradient(&self) -> Multivector {
        self.combine(|e, s| e.gp(s))
    }

    /// `∂_q · G`.
    pub fn divergence(&self) -> Multivector {
        self.combine(|e, s| e.inner(s))
    }

    /// `∂_q ∧ G`.
    pub fn curl(&self) -> Multivector {
        self.combine(|e, s| e.outer(s))
    }

    /// For samples of a vector field `v`: `∂̇_q ∧ (v̇ · A) = Σ_i e_i ∧ ((e_i·∂_q v) · A)`.
    pub fn overdot_wedge(&self, a: &Multivector) -> Multivector {
        self.combine(|e, s| e.outer(&s.inner(a)))
    }
}

/// Central-difference directional derivatives of `g` at the point `q`.
pub fn vector_derivative<G>(g: G, q: &Multivector, step: Step) -> Result<DirectionalDerivatives>
where
    G: Fn(&Multivector) -> Multivector,
{
    let alg = q.algebra();
    let mut samples = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        let x = q.coeff(1 << i);
        let h = step.at(x);
        let dir = Multivector::basis(alg, i) * h;
        let plus = g(&(q + &dir));
        let minus = g(&(q - &dir));
        let d = (&plus - &minus) * (0.5 / h);
        if !d.is_finite() {
            return Err(Error::NonFinite("vector derivative"));
        }
        samples.push(d);
    }
    Ok(DirectionalDerivatives { samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::Algebra;

    #[test]
    fn derivative_of_half_norm_squared_is_reverse() {
        let a = Algebra::new(3).unwrap();
        let p = Multivector::blade(a, 0b011, 2.0);
        let d = mv_derivative(|p| 0.5 * p.norm_sq(), &p, GradeSet::single(2), Step::Auto).unwrap();
        let expected = Multivector::blade(a, 0b011, -2.0);
        assert!((&d - &expected).max_abs() < 1e-9, "{d:?}");
    }

    #[test]
    fn single_coefficient_probe() {
        let a = Algebra::new(3).unwrap();
        let p = Multivector::zero(a);
        for blade in 0..8 {
            let d = mv_derivative(|p| 3.0 * p.coeff(blade), &p, GradeSet::ALL, Step::Auto).unwrap();
            let expected = Multivector::blade(a, blade, 3.0 * reverse_sign(blade_grade(blade)));
            assert!((&d - &expected).max_abs() < 1e-9);
        }
    }

    #[test]
    fn linear_pairing_is_independent_of_p() {
        // F(P) = P·I_x with I_x = e12: ∂_P F = I_x
        let a = Algebra::new(3).unwrap();
        let ix = Multivector::blade(a, 0b011, 1.0);
        for p in [Multivector::zero(a), Multivector::blade(a, 0b110, 5.0)] {
            let d = mv_derivative(|p| p.inner(&ix).scalar_part(), &p, GradeSet::single(2), Step::Auto)
                .unwrap();
            assert!((&d - &ix).max_abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_restricted_to_grades() {
        let a = Algebra::new(2).unwrap();
        let p = Multivector::from_coeffs(a, alloc::vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let d = mv_derivative(|p| 0.5 * p.norm_sq(), &p, GradeSet::single(1), Step::Auto).unwrap();
        assert_eq!(d.coeff(0), 0.0);
        assert_eq!(d.coeff(3), 0.0);
        assert!((d.coeff(1) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn non_finite_function_errors() {
        let a = Algebra::new(2).unwrap();
        let p = Multivector::zero(a);
        let r = mv_derivative(|_| f64::NAN, &p, GradeSet::ALL, Step::Auto);
        assert_eq!(r, Err(Error::NonFinite("multivector derivative")));
        let r = vector_derivative(|q| q * f64::INFINITY, &Multivector::basis(a, 0), Step::Auto);
        assert!(r.is_err());
    }

    #[test]
    fn identity_map_derivatives() {
        let a = Algebra::new(4).unwrap();
        let q = Multivector::vector(a, &[0.3, -1.0, 2.0, 0.5]).unwrap();
        let d = vector_derivative(|q| q.clone(), &q, Step::Auto).unwrap();
        for i in 0..4 {
            assert!((d.along(i) - &Multivector::basis(a, i)).max_abs() < 1e-9);
        }
        assert!(d.curl().max_abs() < 1e-9);
        assert!((d.divergence().scalar_part() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn radial_distance_gradient() {
        let a = Algebra::new(3).unwrap();
        let q0 = Multivector::vector(a, &[1.0, 0.0, -1.0]).unwrap();
        let q = Multivector::vector(a, &[2.0, 2.0, 1.0]).unwrap();
        let lambda = 1.7;
        let d = vector_derivative(|q| Multivector::scalar(a, lambda * q.distance(&q0)), &q, Step::Auto)
            .unwrap();
        let expected = (&q - &q0).normalized().unwrap() * lambda;
        assert!((&d.gradient() - &expected).max_abs() < 1e-8);
    }

    #[test]
    fn curl_of_rotation_generator_is_twice_bivector() {
        let a = Algebra::new(3).unwrap();
        let b0 = Multivector::from_terms(a, &[(0b011, 0.7), (0b110, -0.2), (0b101, 1.1)]);
        let q = Multivector::vector(a, &[0.5, 1.5, -0.5]).unwrap();
        let d = vector_derivative(|q| q.inner(&b0), &q, Step::Auto).unwrap();
        assert!((&d.curl() - &(&b0 * 2.0)).max_abs() < 1e-9);
    }
}
