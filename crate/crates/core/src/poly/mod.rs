//! Exact graded multivariate polynomials over ℚ.
//!
//! Every polynomial carries a shared [`VariableTable`] assigning each variable
//! an integer degree (negative for Lazard generators). Truncation is by the
//! *filtration weight* of a monomial: the degree contributed by the
//! positive-degree variables, or the absolute degree when a table has no
//! positive-degree variables. For the ring `S = ℚ[x₁..x_r]` this is the usual
//! total degree; for a pure Lazard polynomial it is the absolute degree; for
//! mixed series over the Lazard ring it is the adic order in the `x`'s.

mod linalg;
mod monomial;
mod parse;
mod polynomial;
mod quotient;
mod table;

pub use linalg::{
    degree_slice_reduce, degree_slice_reduce_bounded, determinant, invariant_subspace,
    monomials_of_degree, DegreeSlice, Echelon, SparseRow,
};
pub use monomial::Monomial;
pub use parse::parse_polynomial;
pub use polynomial::{poly_mul, poly_substitute, GradedPolynomial};
pub use quotient::{QuotientRing, QuotientSlice};
pub use table::VariableTable;

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
pub(crate) fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
