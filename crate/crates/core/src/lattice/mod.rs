//! Exact arithmetic in the negative definite lattice `-Z^(n+1)`.

mod complement;
mod enumerate;
mod isometry;
mod linear;
mod vector;

pub use complement::complement_basis;
pub use enumerate::vectors_of_norm;
pub use isometry::{complement_chain, is_isometric_to_linear};
pub use linear::{hj_evaluate, hj_expand, inverse_mod, LinearLattice};
pub use vector::{gram, inner_product, is_characteristic, CharCovector, GramMatrix, LatticeVector};
