//! Exact symbolic verification of superintegrable Hamiltonians for two
//! spin-1/2 particles.
//!
//! The crate is layered bottom-up: [`geomring`] holds the commutative ring of
//! radial coefficients, [`spinalg`] the two-spin Pauli algebra over it,
//! [`opalg`] normal-ordered differential operators, and [`builders`] the
//! named operators. [`determining`], [`catalog`] and [`oracle`] are the
//! verification layers built on top.
//!
//! Everything is generic over the rational scalar through [`field::Field`];
//! the aliases below fix it to exact rationals that stay in machine words
//! while they fit.

pub mod builders;
pub mod catalog;
pub mod determining;
pub mod field;
pub mod geomring;
pub mod opalg;
pub mod oracle;
pub mod spinalg;

/// Exact rational numbers.
pub type Rational = field::Rat;
/// Gaussian rationals `a + b·i`.
pub type Complex = field::Gaussian<Rational>;
/// Elements of the radial coefficient ring.
pub type Scalar = geomring::GeomScalar<Rational>;
/// Two-spin matrices with ring coefficients.
pub type Matrix = spinalg::TwoSpinMatrix<Rational>;
/// Normal-ordered differential operators.
pub type Op = opalg::Operator<Rational>;
