use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("multivectors belong to different algebras (dim {left} vs {right})")]
    AlgebraMismatch { left: usize, right: usize },
    #[error("algebra dimension {0} outside supported range 1..=8")]
    DimensionOutOfRange(usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("expected a grade-{expected} multivector")]
    WrongGrade { expected: usize },
    #[error("non-finite value while evaluating {0}")]
    NonFinite(&'static str),
    #[error("linear map is singular")]
    Singular,
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("{what} diverged after {iterations} iterations (residual {residual:e})")]
    Diverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("constraint violated: |H| = {value:e} exceeds {tolerance:e}")]
    ConstraintViolation { value: f64, tolerance: f64 },
    #[error("degenerate gauge: multivector derivative of H vanishes")]
    DegenerateGauge,
    #[error("degenerate triangle {face} (area {area:e})")]
    DegenerateFace { face: usize, area: f64 },
    #[error("point lies outside the domain of {0}")]
    OutOfDomain(&'static str),
    #[error("invalid input: {0}")]
    Invalid(&'static str),
}
