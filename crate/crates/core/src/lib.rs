//! Numerics for the Hamiltonian-constraint formulation of classical field
//! theory on a Euclidean configuration space.
//!
//! Motions are unparametrized curves and surfaces in configuration space,
//! momenta are grade-`D` multivectors, and dynamics is fixed by a single
//! constraint `H(q, P) = 0`. The crate provides:
//!
//! - [`ga`]: a dense Euclidean Clifford algebra `Cl(n)`, `n <= 8`, with the
//!   Hestenes inner product and finite-difference vector/multivector
//!   derivatives.
//! - [`transforms`]: differentials, outermorphisms, adjoints, Lie flows and
//!   rotors of configuration-space diffeomorphisms.
//! - [`hamiltonian`]: the constraint abstraction with the string
//!   (Nambu-Goto) and multicomponent scalar-field models.
//! - [`dynamics`]: worldline integration, minimal-surface relaxation and the
//!   De Donder-Weyl grid solver.
//! - [`noether`]: symmetry criteria and conserved currents.
//! - [`hj`]: the local Hamilton-Jacobi equation.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod dynamics;
mod error;
pub mod ga;
pub mod hamiltonian;
pub mod hj;
pub mod linalg;
pub mod noether;
pub mod stats;
pub mod transforms;

pub use error::{Error, Result};
pub use ga::{Algebra, GradeSet, Multivector, Step};
