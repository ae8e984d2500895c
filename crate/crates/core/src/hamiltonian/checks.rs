use rand::Rng;

use super::scalar_field::SpacetimeSplit;
use super::HamiltonianModel;
use crate::ga::{mv_derivative, vector_derivative, GradeSet, Multivector, Step};
use crate::{Error, Result};

/// One element of a discretized motion: midpoint and oriented element `dΓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceElement {
    pub midpoint: Multivector,
    pub d_gamma: Multivector,
}

/// Augmented action `Σ [P·dΓ − λ H(q, P)]` by midpoint quadrature, with
/// `P` and `λ` sampled once per element.
pub fn eval_action<M: HamiltonianModel + ?Sized>(
    elements: &[SurfaceElement],
    momenta: &[Multivector],
    lambdas: &[f64],
    model: &M,
) -> Result<f64> {
    for len in [momenta.len(), lambdas.len()] {
        if len != elements.len() {
            return Err(Error::LengthMismatch {
                expected: elements.len(),
                got: len,
            });
        }
    }
    let total = elements
        .iter()
        .zip(momenta)
        .zip(lambdas)
        .map(|((el, p), lambda)| {
            p.inner(&el.d_gamma).scalar_part() - lambda * model.eval(&el.midpoint, p)
        })
        .sum();
    Ok(total)
}

/// Worst deviation between analytic derivatives and the finite-difference
/// oracle over random `(q, P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    pub trials: usize,
    pub max_rel_err_p: f64,
    pub max_rel_err_q: f64,
    /// Blade with the largest momentum-derivative deviation.
    pub worst_blade_p: usize,
    pub worst_blade_q: usize,
    pub tolerance: f64,
    pub passed: bool,
}

fn random_point<R: Rng + ?Sized, M: HamiltonianModel + ?Sized>(rng: &mut R, model: &M) -> Multivector {
    let alg = model.algebra();
    let coords: alloc::vec::Vec<f64> = (0..alg.dim()).map(|_| rng.gen_range(-1.5..1.5)).collect();
    Multivector::vector(alg, &coords).expect("length matches")
}

/// Random grade-`D` momentum with coefficients in `[-1.5, 1.5)`.
pub(crate) fn random_momentum<R: Rng + ?Sized, M: HamiltonianModel + ?Sized>(rng: &mut R, model: &M) -> Multivector {
    let alg = model.algebra();
    let d = model.motion_dim();
    let mut p = Multivector::zero(alg);
    for j in alg.blades_of_grade(d) {
        p += &Multivector::blade(alg, j, rng.gen_range(-1.5..1.5));
    }
    p
}

/// Random phase-space points `(q, P)` with coefficients in `[-1.5, 1.5)`.
pub fn random_phase_points<M, R>(model: &M, n: usize, rng: &mut R) -> alloc::vec::Vec<(Multivector, Multivector)>
where
    M: HamiltonianModel + ?Sized,
    R: Rng + ?Sized,
{
    (0..n).map(|_| (random_point(rng, model), random_momentum(rng, model))).collect()
}

/// Relative error `max|a − b| / max(1, max|b|)` and the blade attaining it.
fn rel_err(analytic: &Multivector, oracle: &Multivector) -> (f64, usize) {
    let diff = analytic - oracle;
    let (blade, worst) = diff
        .coeffs()
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (b, c)| if c.abs() > best.1 { (b, c.abs()) } else { best });
    (worst / oracle.max_abs().max(1.0), blade)
}

pub fn check_model_derivatives<M, R>(model: &M, trials: usize, tol: f64, rng: &mut R) -> Result<DerivativeReport>
where
    M: HamiltonianModel + ?Sized,
    R: Rng + ?Sized,
{
    let alg = model.algebra();
    let d = model.motion_dim();
    let mut report = DerivativeReport {
        trials,
        max_rel_err_p: 0.0,
        max_rel_err_q: 0.0,
        worst_blade_p: 0,
        worst_blade_q: 0,
        tolerance: tol,
        passed: true,
    };
    for _ in 0..trials {
        let q = random_point(rng, model);
        let p = random_momentum(rng, model);
        let fd_p = mv_derivative(|p| model.eval(&q, p), &p, GradeSet::single(d), Step::Auto)?;
        let (e, b) = rel_err(&model.grad_p(&q, &p), &fd_p);
        if e > report.max_rel_err_p {
            report.max_rel_err_p = e;
            report.worst_blade_p = b;
        }
        let fd_q = vector_derivative(|q| Multivector::scalar(alg, model.eval(q, &p)), &q, Step::Auto)?.gradient();
        let (e, b) = rel_err(&model.grad_q_explicit(&q, &p), &fd_q);
        if e > report.max_rel_err_q {
            report.max_rel_err_q = e;
            report.worst_blade_q = b;
        }
    }
    report.passed = report.max_rel_err_p <= tol && report.max_rel_err_q <= tol;
    Ok(report)
}

/// Violations of `I_x·∂_P H_DW = 0` and `(e_b∧e_a)·∂_P H_DW = 0`, where
/// `H_DW = H − P·I_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct DwReport {
    pub trials: usize,
    pub max_spacetime_violation: f64,
    pub max_field_violation: f64,
}

impl DwReport {
    pub fn max_violation(&self) -> f64 {
        self.max_spacetime_violation.max(self.max_field_violation)
    }
}

pub fn dw_conditions_check<M, R>(model: &M, split: &SpacetimeSplit, trials: usize, rng: &mut R) -> DwReport
where
    M: HamiltonianModel + ?Sized,
    R: Rng + ?Sized,
{
    let ix = split.ix();
    let mut report = DwReport {
        trials,
        max_spacetime_violation: 0.0,
        max_field_violation: 0.0,
    };
    for _ in 0..trials {
        let q = random_point(rng, model);
        let p = random_momentum(rng, model);
        let g_dw = &model.grad_p(&q, &p) - &ix;
        let v1 = ix.inner(&g_dw).max_abs();
        report.max_spacetime_violation = report.max_spacetime_violation.max(v1);
        for a in 0..split.field_dim() {
            for b in 0..a {
                let plane = split.field_basis(b).outer(&split.field_basis(a));
                let v2 = plane.inner(&g_dw).max_abs();
                report.max_field_violation = report.max_field_violation.max(v2);
            }
        }
    }
    report
}
