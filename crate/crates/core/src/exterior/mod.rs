//! Graded exterior algebra over the scalar ring.

mod form;
mod matrix;
mod table;

pub use form::{canonical_word, wedge, FormExpr, Gen, GenKind};
pub use matrix::{mat_d, mat_trace, mat_wedge, MatrixForm};
pub use table::{d, StructureTable};
