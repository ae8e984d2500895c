//! Dense Euclidean geometric algebra.
//!
//! Basis blades are indexed by the bitset of their generators: bit `i` set
//! means `e_{i+1}` participates, so blade `0b101` is `e1 e3` and its grade is
//! the popcount. All generators square to `+1`.

mod algebra;
mod calculus;
mod multivector;

pub use algebra::{blade_grade, reorder_sign, reverse_sign, Algebra, GradeSet};
pub use calculus::{mv_derivative, vector_derivative, DirectionalDerivatives, Step};
pub use multivector::Multivector;
