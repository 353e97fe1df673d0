//! The coefficient ring.
//!
//! Scalars are canonical sums of Laurent monomials in commuting indeterminates
//! and exponential generators `exp(c·y)`, with coefficients in Q(i, √3).
//! Equality is structural on the canonical form, so `s == t` exactly when
//! `s − t` normalizes to zero.

mod derive;
mod fraction;
mod number;
mod poly;
mod relation;
mod symbol;

pub use derive::{derive_scalar, Derivations};
pub use fraction::Fraction;
pub use number::{int, rat, ratio_to_f64, Coeff, Rational, Surd};
pub use poly::{Monomial, Scalar};
pub(crate) use poly::join_terms;
pub use relation::{normalize, RelationSet, Rule};
pub use symbol::{natural_cmp, Symbol};
