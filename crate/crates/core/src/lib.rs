//! Cartan decompositions of u(n), quantum symmetries, and odd-even
//! decompositions of multipartite systems.

pub mod error;
pub mod matrix;
pub mod spectral;
pub mod subspace;
pub mod spin;
pub mod symmetry;

pub use error::{CartanError, Result};
pub use matrix::{CMatrix, Tolerance, C64};
