//! Local Hamilton-Jacobi equation `H(q, ∂_q ∧ S) = 0` for a grade-`(D−1)`
//! function `S`, conserved quantities from solution families and motion
//! reconstruction for worldlines.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::{Worldline, WorldlineSample};
use crate::ga::{vector_derivative, Algebra, Multivector, Step};
use crate::hamiltonian::{HamiltonianModel, ScalarFieldModel};
use crate::transforms::{field_jacobian, VectorField};
use crate::{Error, Result};

/// Radius of the ball around a point singularity excluded from the domain.
pub const SINGULAR_EXCLUSION: f64 = 1e-3;

/// A candidate solution `S(q)`.
pub trait HJSolution {
    fn algebra(&self) -> Algebra;
    /// Grade of `S`, `D − 1`.
    fn grade(&self) -> usize;
    fn eval(&self, q: &Multivector) -> Multivector;
    /// Whether `q` lies in the domain with room for a stencil of `reach`.
    fn contains(&self, _q: &Multivector, _reach: f64) -> bool {
        true
    }
    fn label(&self) -> &str;
}

/// A solution depending on parameters `α`.
pub trait HJFamily: HJSolution {
    fn params(&self) -> &[f64];
    fn eval_with(&self, q: &Multivector, alpha: &[f64]) -> Multivector;
}

/// `S = Λ |q − q₀|`, the distance function solving the particle equation
/// `|∂_q S| = Λ`. Parameters are the coordinates of `q₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialSolution {
    tension: f64,
    center: Vec<f64>,
}

impl RadialSolution {
    pub fn new(tension: f64, center: &Multivector) -> Self {
        Self {
            tension,
            center: center.vector_part(),
        }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
}

fn distance(q: &Multivector, c: &[f64]) -> f64 {
    libm::sqrt(q.vector_part().iter().zip(c).map(|(x, y)| (x - y) * (x - y)).sum())
}

impl HJSolution for RadialSolution {
    fn algebra(&self) -> Algebra {
        Algebra::new(self.center.len()).expect("center built from a multivector")
    }
    fn grade(&self) -> usize {
        0
    }
    fn eval(&self, q: &Multivector) -> Multivector {
        self.eval_with(q, &self.center)
    }
    fn contains(&self, q: &Multivector, reach: f64) -> bool {
        distance(q, &self.center) > SINGULAR_EXCLUSION + reach
    }
    fn label(&self) -> &str {
        "radial"
    }
}

impl HJFamily for RadialSolution {
    fn params(&self) -> &[f64] {
        &self.center
    }
    fn eval_with(&self, q: &Multivector, alpha: &[f64]) -> Multivector {
        Multivector::scalar(q.algebra(), self.tension * distance(q, alpha))
    }
}

/// `S = Λ (u·q)`; a solution of the particle equation for unit `u`.
/// Parameters are the components of `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWave {
    tension: f64,
    direction: Vec<f64>,
}

impl PlaneWave {
    pub fn new(tension: f64, direction: &Multivector) -> Self {
        Self {
            tension,
            direction: direction.vector_part(),
        }
    }
}

impl HJSolution for PlaneWave {
    fn algebra(&self) -> Algebra {
        Algebra::new(self.direction.len()).expect("direction built from a multivector")
    }
    fn grade(&self) -> usize {
        0
    }
    fn eval(&self, q: &Multivector) -> Multivector {
        self.eval_with(q, &self.direction)
    }
    fn label(&self) -> &str {
        "plane_wave"
    }
}

impl HJFamily for PlaneWave {
    fn params(&self) -> &[f64] {
        &self.direction
    }
    fn eval_with(&self, q: &Multivector, alpha: &[f64]) -> Multivector {
        let s: f64 = q.vector_part().iter().zip(alpha).map(|(x, u)| x * u).sum();
        Multivector::scalar(q.algebra(), self.tension * s)
    }
}

type SolutionFn = Box<dyn Fn(&Multivector) -> Multivector + Send + Sync>;

/// A solution given by a closure.
pub struct FnSolution {
    alg: Algebra,
    grade: usize,
    f: SolutionFn,
    label: String,
}

impl FnSolution {
    pub fn new(
        alg: Algebra,
        grade: usize,
        f: impl Fn(&Multivector) -> Multivector + Send + Sync + 'static,
        label: &str,
    ) -> Self {
        Self {
            alg,
            grade,
            f: Box::new(f),
            label: label.into(),
        }
    }
}

impl core::fmt::Debug for FnSolution {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FnSolution").field("grade", &self.grade).field("label", &self.label).finish()
    }
}

impl HJSolution for FnSolution {
    fn algebra(&self) -> Algebra {
        self.alg
    }
    fn grade(&self) -> usize {
        self.grade
    }
    fn eval(&self, q: &Multivector) -> Multivector {
        (self.f)(q)
    }
    fn label(&self) -> &str {
        &self.label
    }
}

fn stencil_reach(q: &Multivector) -> f64 {
    q.vector_part().iter().map(|x| Step::Auto.at(*x)).fold(0.0, f64::max)
}

/// `P = ∂_q ∧ S` by central differences.
pub fn hj_momentum<S: HJSolution + ?Sized>(sol: &S, q: &Multivector) -> Result<Multivector> {
    if !sol.contains(q, stencil_reach(q)) {
        return Err(Error::OutOfDomain("stencil leaves the solution's domain"));
    }
    Ok(vector_derivative(|x| sol.eval(x), q, Step::Auto)?.curl())
}

/// `H(q, ∂_q ∧ S)`.
pub fn hj_residual<M, S>(model: &M, sol: &S, q: &Multivector) -> Result<f64>
where
    M: HamiltonianModel + ?Sized,
    S: HJSolution + ?Sized,
{
    if sol.grade() + 1 != model.motion_dim() {
        return Err(Error::WrongGrade {
            expected: model.motion_dim() - 1,
        });
    }
    let p = hj_momentum(sol, q)?;
    Ok(model.eval(q, &p))
}

/// Largest coefficient of `∂_q ∧ (∂_q ∧ S)`, zero up to the finite-difference
/// error.
pub fn momentum_curl<S: HJSolution + ?Sized>(sol: &S, q: &Multivector) -> Result<f64> {
    let outer = Step::Fixed(1e-4);
    if !sol.contains(q, 1e-4 + stencil_reach(q)) {
        return Err(Error::OutOfDomain("stencil leaves the solution's domain"));
    }
    let curl = vector_derivative(
        |x| vector_derivative(|y| sol.eval(y), x, Step::Auto).map(|d| d.curl()).unwrap_or_else(|_| Multivector::zero(x.algebra()) * f64::NAN),
        q,
        outer,
    )?
    .curl();
    Ok(curl.max_abs())
}

/// Weyl's equation `∂_x·s + H_DW(q, (∂_y s) I_x⁻¹)` for a spacetime-vector
/// valued `s(q)`.
pub fn weyl_hj_residual<V: VectorField + ?Sized>(model: &ScalarFieldModel, s: &V, q: &Multivector) -> Result<f64> {
    let split = model.split();
    let jac = field_jacobian(s, q)?;
    let d = split.spacetime_dim();
    let divergence: f64 = (0..d).map(|i| jac.along(i).coeff(1 << i)).sum();
    let ix_inv = split.ix().reverse();
    let mut p = Multivector::zero(split.algebra());
    for a in 0..split.field_dim() {
        p += &split.field_basis(a).gp(jac.along(d + a)).gp(&ix_inv);
    }
    let r = divergence + model.eval_dw(q, &p.grade(d));
    if !r.is_finite() {
        return Err(Error::NonFinite("Weyl residual"));
    }
    Ok(r)
}

/// Free-field complete integral `s = Σ_a φ_a k_a − ½ Σ_a |k_a|² x₁ e₁` of
/// Weyl's equation with `V = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylPlaneWave {
    spacetime_dim: usize,
    /// One spacetime vector per field component.
    k: Vec<Vec<f64>>,
}

impl WeylPlaneWave {
    pub fn new(spacetime_dim: usize, k: Vec<Vec<f64>>) -> Self {
        Self { spacetime_dim, k }
    }
}

impl VectorField for WeylPlaneWave {
    fn eval(&self, q: &Multivector) -> Multivector {
        let alg = q.algebra();
        let d = self.spacetime_dim;
        let mut out = alloc::vec![0.0; alg.dim()];
        let mut k2 = 0.0;
        for (a, ka) in self.k.iter().enumerate() {
            let phi = q.coeff(1 << (d + a));
            for (i, c) in ka.iter().enumerate().take(d) {
                out[i] += phi * c;
                k2 += c * c;
            }
        }
        out[0] -= 0.5 * k2 * q.coeff(1);
        Multivector::vector(alg, &out).expect("length matches algebra")
    }
    fn label(&self) -> &str {
        "weyl_plane_wave"
    }
}

/// `∂_{α_i} S` along a worldline.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub values: Vec<Multivector>,
    /// Largest `max − min` over the coefficients.
    pub spread: f64,
}

pub fn conserved_from_family<F: HJFamily + ?Sized>(family: &F, w: &Worldline, index: usize) -> Result<FamilyReport> {
    let alpha = family.params();
    if index >= alpha.len() {
        return Err(Error::Invalid("parameter index out of range"));
    }
    let h = Step::Auto.at(alpha[index]);
    let mut plus = alpha.to_vec();
    plus[index] += h;
    let mut minus = alpha.to_vec();
    minus[index] -= h;
    let mut values = Vec::with_capacity(w.samples.len());
    for s in &w.samples {
        if !family.contains(&s.q, 0.0) {
            return Err(Error::OutOfDomain("worldline leaves the family's domain"));
        }
        let d = &(&family.eval_with(&s.q, &plus) - &family.eval_with(&s.q, &minus)) * (0.5 / h);
        if !d.is_finite() {
            return Err(Error::NonFinite("parameter derivative"));
        }
        values.push(d);
    }
    let mut spread = 0.0f64;
    if let Some(first) = values.first() {
        for blade in 0..first.coeffs().len() {
            let (lo, hi) = values
                .iter()
                .map(|v| v.coeff(blade))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c), hi.max(c)));
            spread = spread.max(hi - lo);
        }
    }
    Ok(FamilyReport { values, spread })
}

fn hj_tangent<M, S>(model: &M, sol: &S, q: &Multivector) -> Result<(Multivector, Multivector, f64)>
where
    M: HamiltonianModel + ?Sized,
    S: HJSolution + ?Sized,
{
    let p = hj_momentum(sol, q)?;
    let g = model.grad_p(q, &p);
    let speed = g.magnitude();
    if speed == 0.0 {
        return Err(Error::DegenerateGauge);
    }
    Ok((&g * (1.0 / speed), p, speed))
}

/// Integrates `q' = ∂_P H(q, ∂_q S) / |∂_P H|` with RK4.
pub fn motion_from_hj<M, S>(model: &M, sol: &S, q_start: &Multivector, length: f64, h: f64) -> Result<Worldline>
where
    M: HamiltonianModel + ?Sized,
    S: HJSolution + ?Sized,
{
    if model.motion_dim() != 1 || sol.grade() != 0 {
        return Err(Error::Invalid("motion reconstruction needs D = 1"));
    }
    if !(length >= 0.0 && h > 0.0) {
        return Err(Error::Invalid("length must be >= 0 and step > 0"));
    }
    let steps = libm::ceil(length / h) as usize;
    let dt = if steps == 0 { 0.0 } else { length / steps as f64 };
    let mut q = q_start.clone();
    let mut samples = Vec::with_capacity(steps + 1);
    for _ in 0..steps {
        let (k1, p, speed) = hj_tangent(model, sol, &q)?;
        samples.push(WorldlineSample {
            q: q.clone(),
            p,
            lambda: dt / speed,
        });
        let (k2, _, _) = hj_tangent(model, sol, &(&q + &(&k1 * (0.5 * dt))))?;
        let (k3, _, _) = hj_tangent(model, sol, &(&q + &(&k2 * (0.5 * dt))))?;
        let (k4, _, _) = hj_tangent(model, sol, &(&q + &(&k3 * dt)))?;
        q += &(&(&(&k1 + &(&k2 * 2.0)) + &(&(&k3 * 2.0) + &k4)) * (dt / 6.0));
    }
    let (_, p, speed) = hj_tangent(model, sol, &q)?;
    samples.push(WorldlineSample {
        q,
        p,
        lambda: dt / speed,
    });
    Ok(Worldline { samples, step: dt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{Orientation, Potential, SpacetimeSplit, StringModel};
    use crate::noether::charge_along_worldline;
    use crate::stats::max_line_deviation;
    use crate::transforms::Affine;
    use alloc::vec;

    fn setup() -> (Algebra, StringModel) {
        let a = Algebra::new(3).unwrap();
        (a, StringModel::new(a, 1, 1.7).unwrap())
    }

    #[test]
    fn radial_and_plane_wave_solve_the_particle_equation() {
        let (a, m) = setup();
        let q0 = Multivector::vector(a, &[0.1, -0.2, 0.3]).unwrap();
        let radial = RadialSolution::new(1.7, &q0);
        let u = Multivector::vector(a, &[0.0, 0.6, 0.8]).unwrap();
        let wave = PlaneWave::new(1.7, &u);
        let wrong = RadialSolution::new(3.4, &q0);
        for q in [[1.0, 0.0, 0.0], [0.3, 2.0, -1.0], [-0.5, 0.5, 0.5]] {
            let q = Multivector::vector(a, &q).unwrap();
            assert!(hj_residual(&m, &radial, &q).unwrap().abs() < 1e-6);
            assert!(hj_residual(&m, &wave, &q).unwrap().abs() < 1e-9);
            let r = hj_residual(&m, &wrong, &q).unwrap();
            assert!((r - 1.5 * 1.7 * 1.7).abs() < 1e-6);
            assert!(momentum_curl(&radial, &q).unwrap() < 1e-5);
        }
        assert!(matches!(hj_residual(&m, &radial, &q0), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn radial_family_gives_conserved_direction() {
        let (a, m) = setup();
        let q0 = Multivector::vector(a, &[0.0, 1.0, 0.0]).unwrap();
        let radial = RadialSolution::new(1.7, &q0);
        let dir = Multivector::vector(a, &[0.6, 0.0, 0.8]).unwrap();
        let w = motion_from_hj(&m, &radial, &(&q0 + &dir), 3.0, 0.05).unwrap();
        let pts: Vec<Vec<f64>> = w.positions().map(|q| q.vector_part()).collect();
        assert!(max_line_deviation(&pts) < 1e-8);
        // unit tangent
        for s in w.samples.windows(2) {
            let step = (&s[1].q - &s[0].q).magnitude();
            assert!((step - w.step).abs() < 1e-8);
        }
        for i in 0..3 {
            let r = conserved_from_family(&radial, &w, i).unwrap();
            assert!(r.spread < 1e-6, "{i}: {}", r.spread);
            // ∂_{q₀} S = −Λ (q − q₀)/|q − q₀|
            assert!((r.values[0].scalar_part() + 1.7 * dir.vector_part()[i]).abs() < 1e-6);
        }
        // translations give conserved charges on the reconstructed line
        let c = charge_along_worldline(&w, &Affine::translation(Multivector::basis(a, 2)));
        assert!(c.spread < 1e-6);
    }

    #[test]
    fn zigzag_is_not_a_motion() {
        let (a, _) = setup();
        let q0 = Multivector::zero(a);
        let radial = RadialSolution::new(1.0, &q0);
        let samples = (0..6)
            .map(|k| WorldlineSample {
                q: Multivector::vector(a, &[1.0 + k as f64 * 0.3, if k % 2 == 0 { 0.0 } else { 0.4 }, 0.0]).unwrap(),
                p: Multivector::zero(a),
                lambda: 0.0,
            })
            .collect();
        let w = Worldline { samples, step: 0.3 };
        assert!(conserved_from_family(&radial, &w, 1).unwrap().spread > 1e-2);
        let single = Worldline {
            samples: vec![w.samples[0].clone()],
            step: 0.0,
        };
        assert_eq!(conserved_from_family(&radial, &single, 0).unwrap().spread, 0.0);
    }

    #[test]
    fn plane_wave_motion_is_straight() {
        let (a, m) = setup();
        let u = Multivector::vector(a, &[0.48, 0.6, 0.64]).unwrap();
        let wave = PlaneWave::new(1.7, &u);
        let start = Multivector::vector(a, &[1.0, 2.0, 3.0]).unwrap();
        let w = motion_from_hj(&m, &wave, &start, 2.0, 0.1).unwrap();
        let end = &w.samples.last().unwrap().q;
        assert!((end - &(&start + &(&u * 2.0))).max_abs() < 1e-9);
        let w0 = motion_from_hj(&m, &wave, &start, 0.0, 0.1).unwrap();
        assert_eq!(w0.samples.len(), 1);
    }

    #[test]
    fn weyl_equation() {
        let split = SpacetimeSplit::new(2, 1, Orientation::Positive).unwrap();
        let a = split.algebra();
        let free = ScalarFieldModel::new(split, Potential::Zero).unwrap();
        let massive = ScalarFieldModel::new(split, Potential::Mass { m: 1.0 }).unwrap();
        let q = Multivector::vector(a, &[0.3, -0.7, 0.9]).unwrap();
        let constant = Affine::translation(Multivector::vector(a, &[1.0, 2.0, 0.0]).unwrap());
        assert!(weyl_hj_residual(&free, &constant, &q).unwrap().abs() < 1e-12);
        let r = weyl_hj_residual(&massive, &constant, &q).unwrap();
        assert!((r - 0.5 * 0.81).abs() < 1e-12);
        let wave = WeylPlaneWave::new(2, vec![vec![0.8, -1.1]]);
        assert!(weyl_hj_residual(&free, &wave, &q).unwrap().abs() < 1e-6);
        assert!(weyl_hj_residual(&massive, &wave, &q).unwrap().abs() > 1e-2);
        // orientation and higher dimensions
        for orientation in [Orientation::Positive, Orientation::Negative] {
            let split = SpacetimeSplit::new(3, 2, orientation).unwrap();
            let m = ScalarFieldModel::new(split, Potential::Zero).unwrap();
            let q = Multivector::vector(split.algebra(), &[0.1, 0.2, 0.3, -0.4, 0.5]).unwrap();
            let wave = WeylPlaneWave::new(3, vec![vec![0.5, 0.1, -0.3], vec![1.0, 0.0, 0.2]]);
            assert!(weyl_hj_residual(&m, &wave, &q).unwrap().abs() < 1e-6);
        }
    }
}
