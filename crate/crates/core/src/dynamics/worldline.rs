use alloc::vec::Vec;

use crate::ga::Multivector;
use crate::hamiltonian::{HamiltonianModel, SurfaceElement};
use crate::{Error, Result};

/// Constraint tolerance demanded of initial data.
pub const INITIAL_CONSTRAINT_TOL: f64 = 1e-9;
/// Constraint drift allowed after per-step projection before the integrator
/// gives up.
pub const DRIFT_TOL: f64 = 1e-6;
const PROJECTION_TOL: f64 = 1e-12;
const PROJECTION_MAX_ITERS: usize = 30;

/// Sign of the Lagrange multiplier `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LambdaSign {
    #[default]
    Positive,
    Negative,
}

impl LambdaSign {
    pub fn sign(self) -> f64 {
        match self {
            LambdaSign::Positive => 1.0,
            LambdaSign::Negative => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorldlineSample {
    pub q: Multivector,
    pub p: Multivector,
    /// Multiplier with `dΓ = λ ∂_P H` over the step that starts here.
    pub lambda: f64,
}

/// Discrete `D = 1` motion sampled at unit-speed arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct Worldline {
    pub samples: Vec<WorldlineSample>,
    pub step: f64,
}

impl Worldline {
    pub fn positions(&self) -> impl Iterator<Item = &Multivector> {
        self.samples.iter().map(|s| &s.q)
    }

    /// Segments `q_k → q_{k+1}` as action elements with `dΓ = q_{k+1} − q_k`.
    pub fn elements(&self) -> Vec<SurfaceElement> {
        self.samples
            .windows(2)
            .map(|w| SurfaceElement {
                midpoint: (&w[0].q + &w[1].q) * 0.5,
                d_gamma: &w[1].q - &w[0].q,
            })
            .collect()
    }

    /// Largest `|H(q_k, P_k)|` along the line.
    pub fn max_constraint<M: HamiltonianModel + ?Sized>(&self, model: &M) -> f64 {
        self.samples
            .iter()
            .map(|s| model.eval(&s.q, &s.p).abs())
            .fold(0.0, f64::max)
    }

    /// `max_k ‖(q_{k+1} − q_k) − λ_k ∂_P H(q_k, P_k)‖`, the first canonical
    /// equation's residual.
    pub fn tangent_residual<M: HamiltonianModel + ?Sized>(&self, model: &M) -> f64 {
        self.samples
            .windows(2)
            .map(|w| {
                let dq = &w[1].q - &w[0].q;
                (&dq - &(&model.grad_p(&w[0].q, &w[0].p) * w[0].lambda)).magnitude()
            })
            .fold(0.0, f64::max)
    }
}

/// Newton correction `P' = P − μ X` along the model's constraint direction
/// `X` with `μ` solving `H(q, P') = 0`.
pub fn project_to_constraint<M: HamiltonianModel + ?Sized>(
    model: &M,
    q: &Multivector,
    p: &Multivector,
) -> Result<Multivector> {
    let dir = model.constraint_direction(q, p);
    let scale = p.norm_sq().max(1.0);
    let mut current = p.clone();
    let mut h = model.eval(q, &current);
    for _ in 0..PROJECTION_MAX_ITERS {
        if h.abs() <= PROJECTION_TOL * scale {
            return Ok(current);
        }
        // dH/dμ = −Σ_J (∂H/∂P_J) X_J and ∂H/∂P_J are the coefficients of reverse(∂_P H)
        let slope: f64 = model
            .grad_p(q, &current)
            .reverse()
            .coeffs()
            .iter()
            .zip(dir.coeffs())
            .map(|(g, x)| g * x)
            .sum();
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::DegenerateGauge);
        }
        current -= &(&dir * (h / slope));
        h = model.eval(q, &current);
        if !h.is_finite() {
            return Err(Error::NonFinite("constraint projection"));
        }
    }
    if h.abs() <= PROJECTION_TOL * scale {
        return Ok(current);
    }
    Err(Error::NoConvergence {
        what: "constraint projection",
        iterations: PROJECTION_MAX_ITERS,
        residual: h.abs(),
    })
}

/// Unit-speed canonical flow: `q' = ∂_P H / |∂_P H|`, `P' = −∂̇_q H / |∂_P H|`.
fn rates<M: HamiltonianModel + ?Sized>(
    model: &M,
    q: &Multivector,
    p: &Multivector,
    sign: f64,
) -> Result<(Multivector, Multivector, f64)> {
    let g = model.grad_p(q, p);
    let speed = g.magnitude();
    if speed == 0.0 {
        return Err(Error::DegenerateGauge);
    }
    let inv = sign / speed;
    Ok((&g * inv, &model.grad_q_explicit(q, p) * (-inv), speed))
}

/// Integrates a `D = 1` worldline of arc length `length` with step about
/// `h`, positive `λ`.
pub fn integrate_worldline<M: HamiltonianModel + ?Sized>(
    model: &M,
    q0: &Multivector,
    p0: &Multivector,
    length: f64,
    h: f64,
) -> Result<Worldline> {
    integrate_worldline_with(model, q0, p0, length, h, LambdaSign::Positive)
}

pub fn integrate_worldline_with<M: HamiltonianModel + ?Sized>(
    model: &M,
    q0: &Multivector,
    p0: &Multivector,
    length: f64,
    h: f64,
    lambda_sign: LambdaSign,
) -> Result<Worldline> {
    if model.motion_dim() != 1 {
        return Err(Error::Invalid("worldline integration needs D = 1"));
    }
    if !(length >= 0.0 && h > 0.0) {
        return Err(Error::Invalid("worldline length must be >= 0 and step > 0"));
    }
    let h0 = model.eval(q0, p0);
    if h0.abs() > INITIAL_CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation {
            value: h0.abs(),
            tolerance: INITIAL_CONSTRAINT_TOL,
        });
    }
    let sign = lambda_sign.sign();
    let steps = libm::ceil(length / h) as usize;
    let dt = if steps == 0 { 0.0 } else { length / steps as f64 };
    let mut q = q0.clone();
    let mut p = p0.clone();
    let mut samples = Vec::with_capacity(steps + 1);
    for _ in 0..steps {
        let (k1q, k1p, speed) = rates(model, &q, &p, sign)?;
        samples.push(WorldlineSample {
            q: q.clone(),
            p: p.clone(),
            lambda: sign * dt / speed,
        });
        let (k2q, k2p, _) = rates(model, &(&q + &(&k1q * (0.5 * dt))), &(&p + &(&k1p * (0.5 * dt))), sign)?;
        let (k3q, k3p, _) = rates(model, &(&q + &(&k2q * (0.5 * dt))), &(&p + &(&k2p * (0.5 * dt))), sign)?;
        let (k4q, k4p, _) = rates(model, &(&q + &(&k3q * dt)), &(&p + &(&k3p * dt)), sign)?;
        q += &(&(&(&k1q + &(&k2q * 2.0)) + &(&(&k3q * 2.0) + &k4q)) * (dt / 6.0));
        p += &(&(&(&k1p + &(&k2p * 2.0)) + &(&(&k3p * 2.0) + &k4p)) * (dt / 6.0));
        p = project_to_constraint(model, &q, &p)?;
        let drift = model.eval(&q, &p).abs();
        if drift > DRIFT_TOL {
            return Err(Error::ConstraintViolation {
                value: drift,
                tolerance: DRIFT_TOL,
            });
        }
    }
    let speed = model.grad_p(&q, &p).magnitude();
    samples.push(WorldlineSample {
        q,
        p,
        lambda: if speed > 0.0 { sign * dt / speed } else { 0.0 },
    });
    Ok(Worldline { samples, step: dt })
}
