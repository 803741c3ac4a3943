//! Exact 3-adic computations for the U operator near the boundary of weight space.
//!
//! The crate builds the concrete q-expansions involved (θ, Δ, f, y, Eisenstein
//! series), changes coordinates between `q` and `y`, assembles the matrix of U in
//! a finite-order weight from its generating function, and reads slopes off the
//! Newton polygon of the characteristic series.

pub mod forms;
pub mod padic;
pub mod report;
pub mod residue;
pub mod series;
pub mod spectral;
