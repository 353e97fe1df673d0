//! Verification, derivation and conservation reports over the prolongation
//! engine, plus the `prolong` command-line front end.

pub mod commands;
pub mod report;
pub mod suites;

pub use commands::{run, Outcome};
