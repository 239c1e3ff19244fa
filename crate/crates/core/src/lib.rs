//! Exact symbolic computation on the supercotangent bundle of flat
//! pseudo-Riemannian space: graded Poisson brackets, the Clifford star
//! product, Hamiltonian lifts of conformal vector fields, spinor
//! representations, normal ordering and the conformal module actions on
//! symbols and spinor differential operators.

pub mod clifford;
pub mod coeff;
pub mod confmod;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod parse;
pub mod random;
pub mod suites;
pub mod superpoly;
pub mod symplectic;

pub use coeff::{rat, Part, Rational, Scalar};
pub use error::{Error, Result};
pub use superpoly::{Bidegree, IndexMove, Monomial, Parity, Signature, SuperPolynomial, Var};
