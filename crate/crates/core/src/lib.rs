//! Spectral laboratory for the non-stationary Stokes system between no-slip
//! walls with horizontally band-limited data.
//!
//! Fields are stored per horizontal Fourier mode on a uniform vertical grid
//! and a uniform time grid. Each mode is solved independently: the half-space
//! solver composes two first-order exponential solves and two heat solves,
//! the strip solver integrates a fourth-order equation for the vertical
//! velocity. The [`norms`] module measures the weighted interpolation norms
//! in which maximal regularity is stated, and [`kernel_lab`] checks the
//! kernel and bandedness estimates the regularity bound rests on.

pub mod banded;
pub mod elementary;
pub mod error;
pub mod halfspace;
pub mod harness;
pub mod kernel_lab;
pub mod norms;
pub mod quadrature;
pub mod spectral;
pub mod strip;

pub use error::{Error, Result};
pub use num_complex::Complex64;
