//! Finite-element characterization of similarity solutions.

pub mod geometry;
pub mod linalg;
pub mod mesh;
mod similarity;

pub use linalg::{projected_cg, CgOptions, CgOutcome, CsrMatrix};
pub use mesh::{CourantMesh, FeMesh, IntervalMesh};
pub use similarity::*;
