//! Deformation of lattice ideals through directed chip-firing.
//!
//! The crate turns a finite-index sublattice `L ⊂ A_n` into a Laplacian
//! presentation of a strongly connected digraph, computes the chip-firing
//! Gröbner basis of its lattice ideal, perturbs the Laplacian until that
//! ideal is generic, and degenerates the Scarf complex of the perturbed
//! lattice back into a cellular free resolution of `I_L`. All arithmetic is
//! exact.

pub mod exact;
pub mod chipfiring;
pub mod cli;
pub mod deformation;
pub mod digraph;
pub mod error;
pub mod groebner;
pub mod json;
pub mod laplacianize;
pub mod pipeline;
pub mod pitfall;
pub mod scarf;

pub use error::{Error, Result};
