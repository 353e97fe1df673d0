//! Built-in systems, su(3) data, and the system-description language.

mod builtin;
pub mod dsl;
mod gellmann;
mod linear;
pub mod reference;
mod system;

pub use builtin::{builtin_text, load_system, BUILTIN_NAMES};
pub use dsl::{parse_form, parse_scalar};
pub use gellmann::{su3_assemble, CMatrix, GellMannData};
pub use linear::{left_inverse, solve_forms};
pub use system::{parse_decl, parse_system, theta_name, Algebra, CurvatureMode, SystemDecl, SystemSpec};
