use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::algebra::{blade_grade, reorder_sign, reverse_sign, Algebra, GradeSet};
use crate::{Error, Result};

/// Dense multivector: one coefficient per basis blade, indexed by bitset.
///
/// The binary products panic when the operands live in different algebras;
/// the `try_*` variants report [`Error::AlgebraMismatch`] instead.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    alg: Algebra,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(alg: Algebra) -> Self {
        Self {
            alg,
            coeffs: vec![0.0; alg.blade_count()],
        }
    }

    pub fn scalar(alg: Algebra, s: f64) -> Self {
        Self::blade(alg, 0, s)
    }

    /// `coeff * e_blade`.
    pub fn blade(alg: Algebra, blade: usize, coeff: f64) -> Self {
        let mut mv = Self::zero(alg);
        mv.coeffs[blade] = coeff;
        mv
    }

    /// Basis vector `e_{i+1}` (zero-based `i`).
    pub fn basis(alg: Algebra, i: usize) -> Self {
        Self::blade(alg, 1 << i, 1.0)
    }

    pub fn pseudoscalar(alg: Algebra) -> Self {
        Self::blade(alg, alg.pseudoscalar_blade(), 1.0)
    }

    /// Grade-1 multivector from Cartesian components.
    pub fn vector(alg: Algebra, components: &[f64]) -> Result<Self> {
        if components.len() != alg.dim() {
            return Err(Error::LengthMismatch {
                expected: alg.dim(),
                got: components.len(),
            });
        }
        let mut mv = Self::zero(alg);
        for (i, &c) in components.iter().enumerate() {
            mv.coeffs[1 << i] = c;
        }
        Ok(mv)
    }

    pub fn from_coeffs(alg: Algebra, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != alg.blade_count() {
            return Err(Error::LengthMismatch {
                expected: alg.blade_count(),
                got: coeffs.len(),
            });
        }
        Ok(Self { alg, coeffs })
    }

    pub fn from_terms(alg: Algebra, terms: &[(usize, f64)]) -> Self {
        let mut mv = Self::zero(alg);
        for &(b, c) in terms {
            mv.coeffs[b] += c;
        }
        mv
    }

    #[inline]
    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, blade: usize) -> f64 {
        self.coeffs[blade]
    }

    #[inline]
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Cartesian components of the grade-1 part.
    pub fn vector_part(&self) -> Vec<f64> {
        (0..self.alg.dim()).map(|i| self.coeffs[1 << i]).collect()
    }

    /// Nonzero `(blade, coefficient)` pairs in canonical bitset order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(b, c)| (b, *c))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(usize, f64) -> f64) -> Self {
        Self {
            alg: self.alg,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(b, &c)| f(b, c))
                .collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.alg != other.alg {
            return Err(Error::AlgebraMismatch {
                left: self.alg.dim(),
                right: other.alg.dim(),
            });
        }
        Ok(())
    }

    fn product_where(&self, other: &Self, keep: impl Fn(usize, usize, usize) -> bool) -> Self {
        assert_eq!(
            self.alg, other.alg,
            "multivector product across different algebras"
        );
        let mut out = Self::zero(self.alg);
        for (a, ca) in self.terms() {
            let ga = blade_grade(a);
            for (b, cb) in other.terms() {
                let prod = a ^ b;
                if keep(ga, blade_grade(b), blade_grade(prod)) {
                    out.coeffs[prod] += reorder_sign(a, b) * ca * cb;
                }
            }
        }
        out
    }

    /// Geometric product `A B`.
    pub fn gp(&self, other: &Self) -> Self {
        self.product_where(other, |_, _, _| true)
    }

    /// Hestenes inner product: `<A_r B_s>_{|r-s|}` for `r, s > 0`; a scalar
    /// factor on either side gives zero.
    pub fn inner(&self, other: &Self) -> Self {
        self.product_where(other, |r, s, g| r > 0 && s > 0 && g == r.abs_diff(s))
    }

    /// Outer product `A ∧ B`.
    pub fn outer(&self, other: &Self) -> Self {
        self.product_where(other, |r, s, g| g == r + s)
    }

    /// Left contraction `A ⌋ B`: `<A_r B_s>_{s-r}` when `r <= s`.
    pub fn left_contraction(&self, other: &Self) -> Self {
        self.product_where(other, |r, s, g| r <= s && g == s - r)
    }

    /// Scalar part of the geometric product, `<A B>_0`.
    pub fn scalar_product(&self, other: &Self) -> f64 {
        assert_eq!(self.alg, other.alg);
        self.terms()
            .map(|(b, c)| c * other.coeffs[b] * reorder_sign(b, b))
            .sum()
    }

    pub fn try_gp(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.gp(other))
    }

    pub fn try_inner(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.inner(other))
    }

    pub fn try_outer(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.outer(other))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn reverse(&self) -> Self {
        self.map_coeffs(|b, c| reverse_sign(blade_grade(b)) * c)
    }

    pub fn grade_involution(&self) -> Self {
        self.map_coeffs(|b, c| if blade_grade(b) % 2 == 0 { c } else { -c })
    }

    /// `<A>_r`.
    pub fn grade(&self, r: usize) -> Self {
        self.map_coeffs(|b, c| if blade_grade(b) == r { c } else { 0.0 })
    }

    pub fn grades(&self, set: GradeSet) -> Self {
        self.map_coeffs(|b, c| if set.contains(blade_grade(b)) { c } else { 0.0 })
    }

    /// The single grade carried by `self`, or `None` if mixed. Zero reports
    /// grade 0.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut found = None;
        for (b, _) in self.terms() {
            let g = blade_grade(b);
            match found {
                None => found = Some(g),
                Some(h) if h != g => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or(0))
    }

    /// Sum of squared coefficients, `<Ã A>_0` in the Euclidean basis.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn magnitude(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `self / |self|`, or `None` for (numerically) zero input.
    pub fn normalized(&self) -> Option<Self> {
        let m = self.magnitude();
        (m > 0.0 && m.is_finite()).then(|| self * (1.0 / m))
    }

    /// Euclidean dot product of the grade-1 parts.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.alg, other.alg);
        (0..self.alg.dim())
            .map(|i| self.coeffs[1 << i] * other.coeffs[1 << i])
            .sum()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).magnitude()
    }

    /// Wedge of a list of vectors, `a1 ∧ a2 ∧ ...`.
    pub fn wedge_all(alg: Algebra, factors: &[Self]) -> Self {
        factors
            .iter()
            .fold(Self::scalar(alg, 1.0), |acc, f| acc.outer(f))
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.alg, rhs.alg, "adding multivectors of different algebras");
        Multivector {
            alg: self.alg,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.alg, rhs.alg, "subtracting multivectors of different algebras");
        Multivector {
            alg: self.alg,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.alg, rhs.alg);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.alg, rhs.alg);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.map_coeffs(|_, c| -c)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        self.map_coeffs(|_, c| c * s)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        &self * s
    }
}

impl Mul<&Multivector> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.gp(rhs)
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.gp(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> Algebra {
        Algebra::new(n).unwrap()
    }

    fn e(a: Algebra, i: usize) -> Multivector {
        Multivector::basis(a, i - 1)
    }

    #[test]
    fn geometric_product_basics() {
        let a = alg(3);
        assert_eq!(e(a, 1).gp(&e(a, 1)), Multivector::scalar(a, 1.0));
        assert_eq!(e(a, 1).gp(&e(a, 2)), Multivector::blade(a, 0b011, 1.0));
        assert_eq!(e(a, 2).gp(&e(a, 1)), Multivector::blade(a, 0b011, -1.0));
        let e12 = Multivector::blade(a, 0b011, 1.0);
        assert_eq!(e12.gp(&e12), Multivector::scalar(a, -1.0));
    }

    #[test]
    fn inner_product_hestenes() {
        let a = alg(3);
        let e12 = Multivector::blade(a, 0b011, 1.0);
        // scalar factor annihilates
        assert!(Multivector::scalar(a, 3.0).inner(&e(a, 1)).norm_sq() == 0.0);
        assert!(e(a, 1).inner(&Multivector::scalar(a, 3.0)).norm_sq() == 0.0);
        assert_eq!(e(a, 1).inner(&e12), e(a, 2));
        assert_eq!(e12.inner(&e12), Multivector::scalar(a, -1.0));
        // left contraction keeps the scalar case
        assert_eq!(
            Multivector::scalar(a, 3.0).left_contraction(&e(a, 1)),
            e(a, 1) * 3.0
        );
    }

    #[test]
    fn outer_product_basics() {
        let a = alg(3);
        assert_eq!(e(a, 1).outer(&e(a, 1)).norm_sq(), 0.0);
        assert_eq!(e(a, 1).outer(&e(a, 2)), Multivector::blade(a, 0b011, 1.0));
        let sum = &e(a, 1) + &e(a, 2);
        assert_eq!(sum.outer(&e(a, 2)), Multivector::blade(a, 0b011, 1.0));
    }

    #[test]
    fn reverse_and_magnitude() {
        let a = alg(3);
        let e12 = Multivector::blade(a, 0b011, 1.0);
        assert_eq!(e12.reverse(), -&e12);
        assert_eq!(e12.magnitude(), 1.0);
        let m = Multivector::from_terms(a, &[(0, 3.0), (0b111, 4.0)]);
        assert_eq!(m.magnitude(), 5.0);
        // |A|^2 = <Ã A>_0
        assert!((m.reverse().scalar_product(&m) - 25.0).abs() < 1e-12);
    }

    #[test]
    fn grade_projection_idempotent() {
        let a = alg(3);
        let m = Multivector::from_coeffs(a, (0..8).map(|i| i as f64 + 1.0).collect()).unwrap();
        let g2 = m.grade(2);
        assert_eq!(g2.grade(2), g2);
        assert_eq!(g2.homogeneous_grade(), Some(2));
        assert_eq!(m.homogeneous_grade(), None);
        assert_eq!(m.grade(0).scalar_part(), 1.0);
    }

    #[test]
    fn algebra_mismatch_is_reported() {
        let x = Multivector::basis(alg(2), 0);
        let y = Multivector::basis(alg(3), 0);
        assert_eq!(
            x.try_gp(&y),
            Err(Error::AlgebraMismatch { left: 2, right: 3 })
        );
        assert!(x.try_inner(&y).is_err());
        assert!(x.try_outer(&y).is_err());
        assert!(x.try_add(&y).is_err());
    }

    #[test]
    fn constructors_validate_lengths() {
        assert!(Multivector::vector(alg(3), &[1.0, 2.0]).is_err());
        assert!(Multivector::from_coeffs(alg(2), alloc::vec![0.0; 3]).is_err());
        let v = Multivector::vector(alg(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(v.vector_part(), alloc::vec![1.0, 2.0, 3.0]);
        assert_eq!(v.dot(&v), 14.0);
    }
}
