use crate::ga::{Algebra, Multivector};

/// `R = exp(-B/2)` for a bivector generator `B`, acting by `A ↦ R A R̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotor {
    generator: Multivector,
    value: Multivector,
}

const SIMPLE_TOL: f64 = 1e-12;

impl Rotor {
    pub fn identity(alg: Algebra) -> Self {
        Self {
            generator: Multivector::zero(alg),
            value: Multivector::scalar(alg, 1.0),
        }
    }

    pub fn generator(&self) -> &Multivector {
        &self.generator
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    /// `R A R̃`.
    pub fn apply(&self, a: &Multivector) -> Multivector {
        self.value.gp(a).gp(&self.value.reverse())
    }

    /// `R̃ A R`, the inverse rotation.
    pub fn apply_inverse(&self, a: &Multivector) -> Multivector {
        self.value.reverse().gp(a).gp(&self.value)
    }

    pub fn reverse(&self) -> Self {
        Self {
            generator: -&self.generator,
            value: self.value.reverse(),
        }
    }
}

/// `exp(-B/2)`. Uses the closed form `cos(|B|/2) - sin(|B|/2) B/|B|` when
/// `B ∧ B = 0`, and scaling-and-squaring of the exponential series otherwise.
pub fn rotor_exp(b: &Multivector) -> Rotor {
    let alg = b.algebra();
    let b = b.grade(2);
    let mag = b.magnitude();
    if mag == 0.0 {
        return Rotor::identity(alg);
    }
    let value = if b.outer(&b).max_abs() <= SIMPLE_TOL * mag * mag {
        let half = 0.5 * mag;
        &Multivector::scalar(alg, libm::cos(half)) - &(&b * (libm::sin(half) / mag))
    } else {
        exp_series(&(&b * -0.5))
    };
    Rotor {
        generator: b,
        value,
    }
}

pub fn rotor_apply(r: &Rotor, a: &Multivector) -> Multivector {
    r.apply(a)
}

/// General multivector exponential by scaling and squaring.
pub fn exp_series(x: &Multivector) -> Multivector {
    let alg = x.algebra();
    let mag = x.magnitude();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while mag * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let small = x * scale;
    let mut term = Multivector::scalar(alg, 1.0);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = term.gp(&small) * (1.0 / k as f64);
        sum += &term;
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.gp(&sum);
    }
    sum
}
