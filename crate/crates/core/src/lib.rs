//! Growth of granular matter in a silo under the two-layer (standing +
//! rolling) sandpile model.
//!
//! * [`model`]: parameters, lattices, sources and layer fields.
//! * [`exact`]: closed-form similarity profiles.
//! * [`fem`]: discrete similarity profiles from a pure Neumann potential.
//! * [`fd`]: explicit upwind evolution of the full system.
//! * [`harness`]: refinement studies, error tables and CSV export.

pub mod error;
pub mod exact;
pub mod fd;
pub mod fem;
pub mod harness;
pub mod model;

pub use error::{Error, Result};
pub use model::{
    source_mean, Atom, Domain, Grid1D, Grid2D, LayerState, Location, Parameters, Patch, Region,
    SimilarityPair, SourceSpec,
};
