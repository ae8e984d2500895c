//! The Hamiltonian constraint `H(q, P) = 0` and the built-in models.

mod checks;
mod potential;
mod scalar_field;
mod string;

pub use checks::{
    check_model_derivatives, dw_conditions_check, eval_action, random_phase_points, DerivativeReport, DwReport, SurfaceElement,
};
pub use potential::Potential;
pub use scalar_field::{Orientation, ScalarFieldModel, SpacetimeSplit};
pub use string::StringModel;

use crate::ga::{Algebra, Multivector};

/// A scalar constraint on positions `q` (grade 1) and momenta `P`
/// (grade `D`), carrying its analytic derivatives.
pub trait HamiltonianModel {
    fn algebra(&self) -> Algebra;

    /// Dimension `D` of the motions.
    fn motion_dim(&self) -> usize;

    fn eval(&self, q: &Multivector, p: &Multivector) -> f64;

    /// Explicit position derivative `∂̇_q H(q̇, P)` at fixed `P`.
    fn grad_q_explicit(&self, q: &Multivector, p: &Multivector) -> Multivector;

    /// Multivector derivative `∂_P H`, grade `D`.
    fn grad_p(&self, q: &Multivector, p: &Multivector) -> Multivector;

    /// Direction along which constraint projection moves `P`. The default
    /// is the coefficient-space gradient, `reverse(∂_P H)`.
    fn constraint_direction(&self, q: &Multivector, p: &Multivector) -> Multivector {
        self.grad_p(q, p).reverse()
    }

    fn label(&self) -> &str;
}

impl<T: HamiltonianModel + ?Sized> HamiltonianModel for &T {
    fn algebra(&self) -> Algebra {
        (**self).algebra()
    }
    fn motion_dim(&self) -> usize {
        (**self).motion_dim()
    }
    fn eval(&self, q: &Multivector, p: &Multivector) -> f64 {
        (**self).eval(q, p)
    }
    fn grad_q_explicit(&self, q: &Multivector, p: &Multivector) -> Multivector {
        (**self).grad_q_explicit(q, p)
    }
    fn grad_p(&self, q: &Multivector, p: &Multivector) -> Multivector {
        (**self).grad_p(q, p)
    }
    fn constraint_direction(&self, q: &Multivector, p: &Multivector) -> Multivector {
        (**self).constraint_direction(q, p)
    }
    fn label(&self) -> &str {
        (**self).label()
    }
}
