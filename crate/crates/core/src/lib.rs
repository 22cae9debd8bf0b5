//! Lattice obstructions to L-space surgeries: changemaker vectors, correction
//! terms, torsion coefficients and the genus bounds they force.

pub mod alexander;
pub mod cables;
pub mod changemaker;
pub mod cli;
pub mod dinvariants;
pub mod error;
pub mod lattice;
pub mod realization;

pub use error::{Error, Result};
