use super::HamiltonianModel;
use crate::ga::{Algebra, Multivector};
use crate::{Error, Result};

/// `H = ½(|P|² − Λ²)`: relativistic particle (`D = 1`), string (`D = 2`) or
/// membrane.
#[derive(Clone, Debug, PartialEq)]
pub struct StringModel {
    alg: Algebra,
    motion_dim: usize,
    tension: f64,
}

impl StringModel {
    pub fn new(alg: Algebra, motion_dim: usize, tension: f64) -> Result<Self> {
        if !(tension > 0.0 && tension.is_finite()) {
            return Err(Error::Invalid("string tension must be positive"));
        }
        if motion_dim == 0 || motion_dim > alg.dim() {
            return Err(Error::Invalid("motion dimension must lie in 1..=n"));
        }
        Ok(Self {
            alg,
            motion_dim,
            tension,
        })
    }

    pub fn tension(&self) -> f64 {
        self.tension
    }
}

impl HamiltonianModel for StringModel {
    fn algebra(&self) -> Algebra {
        self.alg
    }

    fn motion_dim(&self) -> usize {
        self.motion_dim
    }

    fn eval(&self, _q: &Multivector, p: &Multivector) -> f64 {
        0.5 * (p.norm_sq() - self.tension * self.tension)
    }

    fn grad_q_explicit(&self, _q: &Multivector, _p: &Multivector) -> Multivector {
        Multivector::zero(self.alg)
    }

    fn grad_p(&self, _q: &Multivector, p: &Multivector) -> Multivector {
        p.reverse()
    }

    fn label(&self) -> &str {
        "string"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::rotor_exp;

    #[test]
    fn rejects_bad_parameters() {
        let a = Algebra::new(3).unwrap();
        assert!(StringModel::new(a, 1, 0.0).is_err());
        assert!(StringModel::new(a, 4, 1.0).is_err());
    }

    #[test]
    fn depends_on_p_only_through_magnitude() {
        let a = Algebra::new(4).unwrap();
        let m = StringModel::new(a, 2, 1.3).unwrap();
        let q = Multivector::vector(a, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let p = Multivector::from_terms(a, &[(0b0011, 0.5), (0b0110, -1.0), (0b1001, 0.25)]);
        let r = rotor_exp(&Multivector::from_terms(a, &[(0b0101, 0.7), (0b1010, 0.3)]));
        let rotated = r.apply(&p);
        assert!((m.eval(&q, &p) - m.eval(&q, &rotated)).abs() < 1e-12);
        assert_eq!(m.grad_p(&q, &p), p.reverse());
    }
}
