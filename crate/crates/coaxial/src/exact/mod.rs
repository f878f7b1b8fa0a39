//! Exact rational and integer linear algebra.
//!
//! Everything downstream (face lattices, homology, group abelianizations)
//! reduces to the handful of primitives in this module: rational rank,
//! feasibility of `M t = b` with `t > 0`, affine solution dimension and
//! Smith normal form over the integers.

mod lp;
mod matrix;
mod snf;
mod sparse;

pub use lp::{
    maximize, nonnegative_solution, relative_interior_point, strictly_positive_solution, LpOutcome,
};
pub use matrix::{
    affine_solution_dimension, rational_rank, rref_basis, rref_rows, solve_unique, RatMatrix,
    Storage, SPARSE_COLUMN_THRESHOLD,
};
pub use snf::{smith_normal_form, IntMatrix, SnfResult};
pub use sparse::{abelian_invariants, AbelianInvariants};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator by `num-rational`.
pub type Rational = BigRational;

/// Shorthand for `n/d` as a [`Rational`].
///
/// # Panics
///
/// Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("integer overflow during sparse elimination")]
    Overflow,
}
