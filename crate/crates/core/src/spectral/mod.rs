//! Horizontal Fourier representation, grids, fields and discrete operators.

pub mod band;
pub mod field;
pub mod grid;
pub mod multiplier;
pub mod stencil;
pub mod transform;

pub use band::{BandSpec, Mode, WavenumberLattice};
pub use field::{Component, SpectralField};
pub use grid::{FieldLayout, TimeGrid, VerticalGrid, VerticalKind};
pub use multiplier::{apply_multiplier, band_project, Multiplier};
pub use transform::HorizontalSampler;
