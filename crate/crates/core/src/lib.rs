//! Spectral minimal partitions of the unit square, the unit disk and the
//! equilateral triangle.
//!
//! The crate computes Dirichlet-Laplacian spectra (closed form and finite
//! differences), searches for partitions minimizing the max or the mean of
//! the cells' first eigenvalues with a relaxed density method, builds the
//! explicit curved-polygon partitions, and runs the L²-mass test that rules
//! out candidates for the sum.

pub mod bessel;
pub mod criterion;
pub mod curved;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod relaxed;
pub mod shape;
pub mod spectra;

pub use error::{Error, Result};
pub use shape::ShapeKind;
