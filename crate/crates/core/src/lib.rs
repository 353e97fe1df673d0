//! Exact exterior-differential-system engine.
//!
//! Builds Lie-algebra-valued connections (SL(2,R), O(3), SU(3) and
//! user-declared systems), prolongs them by Pfaffian forms, decides ideal
//! membership of their exterior derivatives by exact coefficient collection,
//! derives Riccati charts with their sub-connections, and generates conserved
//! densities from the Riccati x-part.

pub mod catalog;
pub mod conserve;
pub mod error;
pub mod exterior;
pub mod prolong;
pub mod scalar;

pub use error::{Error, ParseError, Result};
