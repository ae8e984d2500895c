use crate::{Error, Result};

/// `Cl(n)` with an orthonormal Euclidean basis `e1..en`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    dim: u8,
}

impl Algebra {
    pub const MAX_DIM: usize = 8;

    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > Self::MAX_DIM {
            return Err(Error::DimensionOutOfRange(dim));
        }
        Ok(Self { dim: dim as u8 })
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn blade_count(self) -> usize {
        1 << self.dim
    }

    /// Bitset of the unit pseudoscalar `e1 e2 ... en`.
    #[inline]
    pub fn pseudoscalar_blade(self) -> usize {
        self.blade_count() - 1
    }

    /// Blade bitsets of grade `r` in increasing order.
    pub fn blades_of_grade(self, r: usize) -> impl Iterator<Item = usize> {
        (0..self.blade_count()).filter(move |&b| blade_grade(b) == r)
    }
}

#[inline]
pub fn blade_grade(blade: usize) -> usize {
    blade.count_ones() as usize
}

/// Sign picked up when the generators of `a e_b` are sorted into canonical
/// order. Repeated generators square to `+1`, so this is the whole sign of
/// the blade product.
#[inline]
pub fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^{r(r-1)/2}`, the reversion sign of a grade-`r` blade.
#[inline]
pub fn reverse_sign(r: usize) -> f64 {
    if (r / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Set of grades `0..=8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradeSet(u16);

impl GradeSet {
    pub const EMPTY: Self = Self(0);
    pub const ALL: Self = Self(0x1ff);

    pub fn single(r: usize) -> Self {
        Self(1 << r)
    }

    pub fn from_grades(grades: &[usize]) -> Self {
        Self(grades.iter().fold(0, |acc, &r| acc | (1 << r)))
    }

    #[inline]
    pub fn contains(self, r: usize) -> bool {
        r < 16 && self.0 & (1 << r) != 0
    }

    pub fn with(self, r: usize) -> Self {
        Self(self.0 | (1 << r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_sign_cycle() {
        let signs: [f64; 6] = [1.0, 1.0, -1.0, -1.0, 1.0, 1.0];
        for (r, s) in signs.iter().enumerate() {
            assert_eq!(reverse_sign(r), *s, "grade {r}");
        }
    }

    #[test]
    fn reorder_sign_anticommutes() {
        // e1 e2 = +e12, e2 e1 = -e12
        assert_eq!(reorder_sign(0b01, 0b10), 1.0);
        assert_eq!(reorder_sign(0b10, 0b01), -1.0);
        // e12 e12 = e1 e2 e1 e2 = -1
        assert_eq!(reorder_sign(0b11, 0b11), -1.0);
    }

    #[test]
    fn dimension_bounds() {
        assert!(Algebra::new(0).is_err());
        assert!(Algebra::new(9).is_err());
        assert_eq!(Algebra::new(8).unwrap().blade_count(), 256);
        assert_eq!(Algebra::new(4).unwrap().blades_of_grade(2).count(), 6);
    }

    #[test]
    fn grade_set_membership() {
        let g = GradeSet::from_grades(&[0, 2]);
        assert!(g.contains(0) && g.contains(2) && !g.contains(1));
        assert!(GradeSet::ALL.contains(8));
        assert!(!GradeSet::EMPTY.contains(0));
    }
}
