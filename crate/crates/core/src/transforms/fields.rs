use alloc::boxed::Box;
use alloc::string::{String, ToString};

use super::rotor::{rotor_exp, Rotor};
use super::{Diffeo, VectorField};
use crate::ga::Multivector;

#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl Diffeo for Identity {
    fn apply(&self, q: &Multivector) -> Multivector {
        q.clone()
    }
    fn inverse(&self, q: &Multivector) -> Option<Multivector> {
        Some(q.clone())
    }
    fn differential(&self, a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        Some(a.clone())
    }
    fn label(&self) -> &str {
        "identity"
    }
}

/// `q ↦ q + v₀`.
#[derive(Clone, Debug)]
pub struct Translation {
    offset: Multivector,
}

impl Translation {
    pub fn new(offset: Multivector) -> Self {
        Self { offset }
    }
}

impl Diffeo for Translation {
    fn apply(&self, q: &Multivector) -> Multivector {
        q + &self.offset
    }
    fn inverse(&self, q: &Multivector) -> Option<Multivector> {
        Some(q - &self.offset)
    }
    fn differential(&self, a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        Some(a.clone())
    }
    fn label(&self) -> &str {
        "translate"
    }
}

/// `q ↦ x₀ + R (q − x₀) R̃` with `R = exp(−B/2)`.
#[derive(Clone, Debug)]
pub struct RotorMap {
    rotor: Rotor,
    center: Multivector,
    label: String,
}

impl RotorMap {
    pub fn new(bivector: &Multivector, center: Multivector, label: &str) -> Self {
        Self {
            rotor: rotor_exp(bivector),
            center,
            label: label.to_string(),
        }
    }

    pub fn rotor(&self) -> &Rotor {
        &self.rotor
    }
}

impl Diffeo for RotorMap {
    fn apply(&self, q: &Multivector) -> Multivector {
        &self.center + &self.rotor.apply(&(q - &self.center))
    }
    fn inverse(&self, q: &Multivector) -> Option<Multivector> {
        Some(&self.center + &self.rotor.apply_inverse(&(q - &self.center)))
    }
    fn differential(&self, a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        Some(self.rotor.apply(a))
    }
    fn label(&self) -> &str {
        &self.label
    }
}

/// Linear stretch along one axis, `q ↦ q + (s − 1)(q·e_k) e_k`.
#[derive(Clone, Debug)]
pub struct Scaling {
    axis: usize,
    factor: f64,
}

impl Scaling {
    pub fn new(axis: usize, factor: f64) -> Self {
        Self { axis, factor }
    }

    fn stretch(&self, q: &Multivector, s: f64) -> Multivector {
        let blade = 1 << self.axis;
        q.map_coeffs(|b, c| if b == blade { s * c } else { c })
    }
}

impl Diffeo for Scaling {
    fn apply(&self, q: &Multivector) -> Multivector {
        self.stretch(q, self.factor)
    }
    fn inverse(&self, q: &Multivector) -> Option<Multivector> {
        (self.factor != 0.0).then(|| self.stretch(q, 1.0 / self.factor))
    }
    fn differential(&self, a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        Some(self.stretch(a, self.factor))
    }
    fn label(&self) -> &str {
        "scale"
    }
}

/// `q ↦ q + ε v(q)`.
pub struct Infinitesimal<'a, V: VectorField + ?Sized> {
    field: &'a V,
    eps: f64,
}

impl<'a, V: VectorField + ?Sized> Infinitesimal<'a, V> {
    pub fn new(field: &'a V, eps: f64) -> Self {
        Self { field, eps }
    }
}

impl<V: VectorField + ?Sized> core::fmt::Debug for Infinitesimal<'_, V> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Infinitesimal")
            .field("field", &self.field.label())
            .field("eps", &self.eps)
            .finish()
    }
}

impl<V: VectorField + ?Sized> Diffeo for Infinitesimal<'_, V> {
    fn apply(&self, q: &Multivector) -> Multivector {
        q + &(&self.field.eval(q) * self.eps)
    }
    fn differential(&self, a: &Multivector, q: &Multivector) -> Option<Multivector> {
        self.field
            .directional_derivative(a, q)
            .map(|d| a + &(&d * self.eps))
    }
    fn label(&self) -> &str {
        "infinitesimal"
    }
}

type MapFn = Box<dyn Fn(&Multivector) -> Multivector + Send + Sync>;

/// Library-only diffeo from closures.
pub struct FnDiffeo {
    forward: MapFn,
    inverse: Option<MapFn>,
    label: String,
}

impl FnDiffeo {
    pub fn new(forward: impl Fn(&Multivector) -> Multivector + Send + Sync + 'static, label: &str) -> Self {
        Self {
            forward: Box::new(forward),
            inverse: None,
            label: label.to_string(),
        }
    }

    pub fn with_inverse(mut self, inverse: impl Fn(&Multivector) -> Multivector + Send + Sync + 'static) -> Self {
        self.inverse = Some(Box::new(inverse));
        self
    }
}

impl core::fmt::Debug for FnDiffeo {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FnDiffeo").field("label", &self.label).finish()
    }
}

impl Diffeo for FnDiffeo {
    fn apply(&self, q: &Multivector) -> Multivector {
        (self.forward)(q)
    }
    fn inverse(&self, q: &Multivector) -> Option<Multivector> {
        self.inverse.as_ref().map(|g| g(q))
    }
    fn label(&self) -> &str {
        &self.label
    }
}

/// `v(q) = q·B + v₀`: translations, rotations, and rotations about a point.
#[derive(Clone, Debug)]
pub struct Affine {
    bivector: Multivector,
    offset: Multivector,
    label: String,
}

impl Affine {
    pub fn new(bivector: Multivector, offset: Multivector, label: &str) -> Self {
        Self {
            bivector,
            offset,
            label: label.to_string(),
        }
    }

    pub fn translation(v0: Multivector) -> Self {
        let alg = v0.algebra();
        Self::new(Multivector::zero(alg), v0, "translate")
    }

    pub fn rotation(b0: Multivector) -> Self {
        let alg = b0.algebra();
        Self::new(b0, Multivector::zero(alg), "rotate")
    }

    /// `(q − x₀)·B`.
    pub fn rotation_about(b: Multivector, center: &Multivector) -> Self {
        let offset = -&center.inner(&b);
        Self::new(b, offset, "rotate_about")
    }

    pub fn bivector(&self) -> &Multivector {
        &self.bivector
    }

    pub fn offset(&self) -> &Multivector {
        &self.offset
    }
}

impl VectorField for Affine {
    fn eval(&self, q: &Multivector) -> Multivector {
        &q.grade(1).inner(&self.bivector) + &self.offset
    }
    fn directional_derivative(&self, a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        Some(a.grade(1).inner(&self.bivector))
    }
    fn label(&self) -> &str {
        &self.label
    }
}

/// Anisotropic stretch generator `v(q) = (q·e_k) e_k`.
#[derive(Clone, Copy, Debug)]
pub struct AxisScaling {
    axis: usize,
}

impl AxisScaling {
    pub fn new(axis: usize) -> Self {
        Self { axis }
    }
}

impl VectorField for AxisScaling {
    fn eval(&self, q: &Multivector) -> Multivector {
        let b = 1 << self.axis;
        Multivector::blade(q.algebra(), b, q.coeff(b))
    }
    fn directional_derivative(&self, a: &Multivector, _q: &Multivector) -> Option<Multivector> {
        Some(self.eval(a))
    }
    fn label(&self) -> &str {
        "scale"
    }
}

/// Library-only vector field from a closure.
pub struct FnField {
    f: MapFn,
    label: String,
}

impl FnField {
    pub fn new(f: impl Fn(&Multivector) -> Multivector + Send + Sync + 'static, label: &str) -> Self {
        Self {
            f: Box::new(f),
            label: label.to_string(),
        }
    }
}

impl core::fmt::Debug for FnField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FnField").field("label", &self.label).finish()
    }
}

impl VectorField for FnField {
    fn eval(&self, q: &Multivector) -> Multivector {
        (self.f)(q)
    }
    fn label(&self) -> &str {
        &self.label
    }
}
