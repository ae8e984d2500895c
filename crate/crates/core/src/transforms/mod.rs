//! Diffeomorphisms of configuration space and the maps they induce on
//! multivectors: differential, outermorphism, adjoint and the momentum
//! transformation rule `P ↦ f̄⁻¹(P)`. Also Lie-series flows of vector
//! fields and rotors.

mod fields;
mod rotor;

use alloc::vec::Vec;

pub use fields::{
    Affine, AxisScaling, FnDiffeo, FnField, Identity, Infinitesimal, RotorMap, Scaling, Translation,
};
pub use rotor::{exp_series, rotor_apply, rotor_exp, Rotor};

use crate::ga::{Algebra, Multivector, Step};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// A smooth invertible map of configuration space (acting on grade-1
/// points).
pub trait Diffeo {
    fn apply(&self, q: &Multivector) -> Multivector;

    /// Analytic inverse, when known.
    fn inverse(&self, _q: &Multivector) -> Option<Multivector> {
        None
    }

    /// Analytic differential `a·∂_q f(q)`, when known.
    fn differential(&self, _a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        None
    }

    fn label(&self) -> &str;
}

/// A vector field on configuration space.
pub trait VectorField {
    fn eval(&self, q: &Multivector) -> Multivector;

    /// Analytic directional derivative `a·∂_q v(q)`, when known.
    fn directional_derivative(&self, _a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        None
    }

    fn label(&self) -> &str;
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn eval(&self, q: &Multivector) -> Multivector {
        (**self).eval(q)
    }
    fn directional_derivative(&self, a: &Multivector, q: &Multivector) -> Option<Multivector> {
        (**self).directional_derivative(a, q)
    }
    fn label(&self) -> &str {
        (**self).label()
    }
}

fn fd_step(q: &Multivector) -> f64 {
    Step::Auto.at(q.magnitude())
}

/// `f(a; q) = a·∂_q f(q)`; analytic when the diffeo provides it, central
/// difference otherwise.
pub fn differential<F: Diffeo + ?Sized>(f: &F, a: &Multivector, q: &Multivector) -> Result<Multivector> {
    if let Some(d) = f.differential(a, q) {
        return Ok(d);
    }
    central_difference(|x| f.apply(x), a, q)
}

fn central_difference(
    g: impl Fn(&Multivector) -> Multivector,
    a: &Multivector,
    q: &Multivector,
) -> Result<Multivector> {
    let h = fd_step(q);
    let shift = a * h;
    let d = (&g(&(q + &shift)) - &g(&(q - &shift))) * (0.5 / h);
    if !d.is_finite() {
        return Err(Error::NonFinite("differential"));
    }
    Ok(d)
}

/// A linear map of vectors together with its outermorphism images of every
/// basis blade.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    alg: Algebra,
    blade_images: Vec<Multivector>,
}

impl LinearMap {
    /// From the images of `e1..en`.
    pub fn from_vector_images(images: &[Multivector]) -> Result<Self> {
        let alg = images
            .first()
            .ok_or(Error::Invalid("empty linear map"))?
            .algebra();
        if images.len() != alg.dim() {
            return Err(Error::LengthMismatch {
                expected: alg.dim(),
                got: images.len(),
            });
        }
        let mut blade_images = Vec::with_capacity(alg.blade_count());
        blade_images.push(Multivector::scalar(alg, 1.0));
        for blade in 1..alg.blade_count() {
            let top = usize::BITS - 1 - blade.leading_zeros();
            let rest = blade & !(1 << top);
            let img = blade_images[rest].outer(&images[top as usize].grade(1));
            blade_images.push(img);
        }
        Ok(Self { alg, blade_images })
    }

    pub fn from_matrix(alg: Algebra, m: &Matrix) -> Result<Self> {
        let images: Vec<Multivector> = (0..alg.dim())
            .map(|j| Multivector::vector(alg, &m.column(j)))
            .collect::<Result<_>>()?;
        Self::from_vector_images(&images)
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    /// Matrix whose columns are the images of the basis vectors.
    pub fn matrix(&self) -> Matrix {
        let cols: Vec<Vec<f64>> = (0..self.alg.dim())
            .map(|i| self.blade_images[1 << i].vector_part())
            .collect();
        Matrix::from_columns(&cols)
    }

    pub fn apply_vector(&self, a: &Multivector) -> Multivector {
        self.outermorphism(&a.grade(1))
    }

    /// Grade-preserving extension `f(A ∧ B) = f(A) ∧ f(B)`.
    pub fn outermorphism(&self, a: &Multivector) -> Multivector {
        let mut out = Multivector::zero(self.alg);
        for (blade, c) in a.terms() {
            out += &(&self.blade_images[blade] * c);
        }
        out
    }

    /// Transpose of the outermorphism in the orthonormal blade basis, so
    /// that `f(A)·B = A·f̄(B)` for same-grade `A`, `B`.
    pub fn adjoint(&self, b: &Multivector) -> Multivector {
        let coeffs = self
            .blade_images
            .iter()
            .map(|img| img.terms().map(|(k, c)| c * b.coeff(k)).sum())
            .collect();
        Multivector::from_coeffs(self.alg, coeffs).expect("blade count matches")
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::from_matrix(self.alg, &self.matrix().inverse()?)
    }
}

/// The differential of `f` at `q` as a [`LinearMap`].
pub fn differential_map<F: Diffeo + ?Sized>(f: &F, q: &Multivector) -> Result<LinearMap> {
    let alg = q.algebra();
    let images: Vec<Multivector> = (0..alg.dim())
        .map(|i| differential(f, &Multivector::basis(alg, i), q))
        .collect::<Result<_>>()?;
    LinearMap::from_vector_images(&images)
}

pub fn outermorphism<F: Diffeo + ?Sized>(f: &F, a: &Multivector, q: &Multivector) -> Result<Multivector> {
    Ok(differential_map(f, q)?.outermorphism(a))
}

pub fn adjoint<F: Diffeo + ?Sized>(f: &F, b: &Multivector, q: &Multivector) -> Result<Multivector> {
    Ok(differential_map(f, q)?.adjoint(b))
}

/// `f̄⁻¹(B; q)`: the adjoint of the differential of `f⁻¹` at `f(q)`, which is
/// how momenta transform under `f`.
///
/// With an analytic inverse the differential of `f⁻¹` is taken directly;
/// otherwise it is the matrix inverse of the differential of `f` at `q`.
/// Either way a singular differential of `f` is an error.
pub fn adjoint_inverse<F: Diffeo + ?Sized>(f: &F, b: &Multivector, q: &Multivector) -> Result<Multivector> {
    let forward = differential_map(f, q)?;
    let inverse_map = forward.inverse()?;
    let fq = f.apply(q);
    let map = match f.inverse(&fq) {
        Some(_) => {
            let alg = q.algebra();
            let images: Vec<Multivector> = (0..alg.dim())
                .map(|i| {
                    central_difference(
                        |x| f.inverse(x).expect("inverse defined near f(q)"),
                        &Multivector::basis(alg, i),
                        &fq,
                    )
                })
                .collect::<Result<_>>()?;
            LinearMap::from_vector_images(&images)?
        }
        None => inverse_map,
    };
    Ok(map.adjoint(b))
}

pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITERS: usize = 50;

/// Solves `f(x) = target` by Newton's method from `guess`.
pub fn newton_inverse<F: Diffeo + ?Sized>(
    f: &F,
    target: &Multivector,
    guess: &Multivector,
) -> Result<Multivector> {
    let mut x = guess.clone();
    let mut residual = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITERS {
        let r = &f.apply(&x) - target;
        residual = r.magnitude();
        if residual <= NEWTON_TOL * target.magnitude().max(1.0) {
            return Ok(x);
        }
        let jac = differential_map(f, &x)?.matrix();
        let dx = jac.solve(&r.vector_part())?;
        x -= &Multivector::vector(x.algebra(), &dx)?;
    }
    Err(Error::NoConvergence {
        what: "Newton inversion",
        iterations: NEWTON_MAX_ITERS,
        residual,
    })
}

/// Directional derivatives `e_i·∂_q v` of a vector field, analytic when
/// available.
pub fn field_jacobian<V: VectorField + ?Sized>(
    v: &V,
    q: &Multivector,
) -> Result<crate::ga::DirectionalDerivatives> {
    let alg = q.algebra();
    let mut samples = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        let e = Multivector::basis(alg, i);
        let d = match v.directional_derivative(&e, q) {
            Some(d) => d,
            None => central_difference(|x| v.eval(x), &e, q)?,
        };
        samples.push(d);
    }
    Ok(crate::ga::DirectionalDerivatives::from_samples(samples))
}

/// First-order outermorphism of `q ↦ q + εv(q)`: `A + ε (A·∂_q) ∧ v`.
pub fn infinitesimal_outermorphism<V: VectorField + ?Sized>(
    v: &V,
    a: &Multivector,
    q: &Multivector,
    eps: f64,
) -> Result<Multivector> {
    let jac = field_jacobian(v, q)?;
    let alg = q.algebra();
    let mut first = Multivector::zero(alg);
    for (i, dv) in jac.samples().iter().enumerate() {
        first += &a.inner(&Multivector::basis(alg, i)).outer(dv);
    }
    Ok(a + &(&first * eps))
}

/// First-order `f̄⁻¹` of `q ↦ q + εv(q)`: `B - ε ∂̇_q ∧ (v̇·B)`.
pub fn infinitesimal_adjoint_inverse<V: VectorField + ?Sized>(
    v: &V,
    b: &Multivector,
    q: &Multivector,
    eps: f64,
) -> Result<Multivector> {
    let jac = field_jacobian(v, q)?;
    Ok(b - &(&jac.overdot_wedge(b) * eps))
}

/// Default Lie-flow step count, `ceil(|τ| / 0.01)`.
pub fn default_flow_steps(tau: f64) -> usize {
    (libm::ceil(tau.abs() / 0.01) as usize).max(1)
}

/// Flow `e^{τ v·∂_q} q` of a vector field, integrated with classical RK4.
pub fn lie_flow<V: VectorField + ?Sized>(
    v: &V,
    q: &Multivector,
    tau: f64,
    steps: Option<usize>,
) -> Result<Multivector> {
    let steps = steps.unwrap_or_else(|| default_flow_steps(tau)).max(1);
    let dt = tau / steps as f64;
    let mut x = q.grade(1);
    for _ in 0..steps {
        let k1 = v.eval(&x);
        let k2 = v.eval(&(&x + &(&k1 * (0.5 * dt))));
        let k3 = v.eval(&(&x + &(&k2 * (0.5 * dt))));
        let k4 = v.eval(&(&x + &(&k3 * dt)));
        let incr = &(&(&k1 + &(&k2 * 2.0)) + &(&(&k3 * 2.0) + &k4)) * (dt / 6.0);
        x += &incr;
        if !x.is_finite() {
            return Err(Error::NonFinite("Lie flow"));
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> Algebra {
        Algebra::new(n).unwrap()
    }

    fn vec3(x: f64, y: f64, z: f64) -> Multivector {
        Multivector::vector(alg(3), &[x, y, z]).unwrap()
    }

    #[test]
    fn translation_differential_is_trivial() {
        let f = Translation::new(vec3(1.0, -2.0, 0.5));
        let a = vec3(0.3, 0.4, -1.0);
        let q = vec3(5.0, 1.0, 2.0);
        let d = differential(&f, &a, &q).unwrap();
        assert!((&d - &a).max_abs() < 1e-9);
        let p = Multivector::blade(alg(3), 0b011, 2.0);
        assert!((&adjoint_inverse(&f, &p, &q).unwrap() - &p).max_abs() < 1e-9);
    }

    #[test]
    fn rotor_map_induced_maps() {
        let a3 = alg(3);
        let b = Multivector::from_terms(a3, &[(0b011, 0.4), (0b110, -0.7)]);
        let f = RotorMap::new(&b, vec3(0.5, 0.0, -1.0), "rot");
        let r = rotor_exp(&b);
        let q = vec3(1.0, 2.0, 3.0);
        let a = vec3(0.3, -0.1, 0.8);
        let d = differential(&f, &a, &q).unwrap();
        assert!((&d - &r.apply(&a)).max_abs() < 1e-9);
        // f̄⁻¹(P) = R P R̃
        let p = Multivector::from_terms(a3, &[(0b011, 1.0), (0b101, -0.5), (0b110, 0.25)]);
        let t = adjoint_inverse(&f, &p, &q).unwrap();
        assert!((&t - &r.apply(&p)).max_abs() < 1e-9);
        // without the analytic inverse the Jacobian route agrees
        let g = FnDiffeo::new(move |x: &Multivector| f.apply(x), "rot-fd");
        let t2 = adjoint_inverse(&g, &p, &q).unwrap();
        assert!((&t2 - &t).max_abs() < 1e-8);
        // outermorphism of a bivector rotates both factors
        let e12 = Multivector::blade(a3, 0b011, 1.0);
        let img = outermorphism(&g, &e12, &q).unwrap();
        let expected = r.apply(&Multivector::basis(a3, 0)).outer(&r.apply(&Multivector::basis(a3, 1)));
        assert!((&img - &expected).max_abs() < 1e-8);
    }

    #[test]
    fn identity_maps() {
        let q = vec3(1.0, 2.0, 3.0);
        let a = Multivector::from_terms(alg(3), &[(0, 1.0), (0b101, 2.0), (0b111, -1.0)]);
        assert!((&outermorphism(&Identity, &a, &q).unwrap() - &a).max_abs() < 1e-12);
        assert!((&adjoint(&Identity, &a, &q).unwrap() - &a).max_abs() < 1e-12);
    }

    #[test]
    fn singular_differential_errors() {
        let f = FnDiffeo::new(
            |q: &Multivector| {
                let v = q.vector_part();
                Multivector::vector(q.algebra(), &[v[0], 0.0, v[2]]).unwrap()
            },
            "projection",
        );
        let q = vec3(1.0, 1.0, 1.0);
        let p = Multivector::blade(alg(3), 0b011, 1.0);
        assert_eq!(adjoint_inverse(&f, &p, &q), Err(Error::Singular));
    }

    #[test]
    fn newton_inverts_nonlinear_map() {
        let f = FnDiffeo::new(
            |q: &Multivector| {
                let v = q.vector_part();
                Multivector::vector(q.algebra(), &[v[0] + 0.1 * v[1] * v[1], v[1], v[2] + libm::sin(v[0])])
                    .unwrap()
            },
            "shear",
        );
        let x = vec3(0.4, -0.7, 1.3);
        let y = f.apply(&x);
        let back = newton_inverse(&f, &y, &vec3(0.0, 0.0, 0.0)).unwrap();
        assert!((&back - &x).max_abs() < 1e-9);
    }

    #[test]
    fn lie_flow_of_constant_and_rotation_fields() {
        let a3 = alg(3);
        let q = vec3(1.0, -0.5, 2.0);
        let v0 = vec3(0.2, 0.3, -0.4);
        let moved = lie_flow(&Affine::translation(v0.clone()), &q, 1.0, None).unwrap();
        assert!((&moved - &(&q + &v0)).max_abs() < 1e-12);
        let b0 = Multivector::from_terms(a3, &[(0b011, 0.9), (0b101, -0.4)]);
        let rotated = lie_flow(&Affine::rotation(b0.clone()), &q, 1.0, None).unwrap();
        let expected = rotor_exp(&b0).apply(&q);
        assert!((&rotated - &expected).max_abs() < 1e-8);
        let zero = lie_flow(&Affine::translation(Multivector::zero(a3)), &q, 3.0, None).unwrap();
        assert_eq!(zero, q);
    }

    #[test]
    fn infinitesimal_forms_match_finite_maps_to_second_order() {
        let a3 = alg(3);
        let v = FnField::new(
            |q: &Multivector| {
                let x = q.vector_part();
                Multivector::vector(q.algebra(), &[x[1] * x[2], libm::sin(x[0]), x[0] * x[0]]).unwrap()
            },
            "nonlinear",
        );
        let q = vec3(0.3, 0.8, -0.5);
        let a = Multivector::from_terms(a3, &[(0b011, 1.0), (0b110, 0.5), (0b001, -0.3)]);
        let mut errs = Vec::new();
        let eps = [1e-2, 5e-3, 2.5e-3];
        for &e in &eps {
            let f = Infinitesimal::new(&v, e);
            let exact = outermorphism(&f, &a, &q).unwrap();
            let approx = infinitesimal_outermorphism(&v, &a, &q, e).unwrap();
            errs.push((&exact - &approx).magnitude());
        }
        let slope = crate::stats::log_log_slope(&eps, &errs).unwrap();
        assert!(slope > 1.9, "slope {slope}");
    }
}
