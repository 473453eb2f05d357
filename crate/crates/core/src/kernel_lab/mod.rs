//! Heat and Poisson kernels, and numerical checks of the kernel and
//! bandedness estimates with fitted constants.

pub mod checks;
pub mod kernels;
pub mod trig;

pub use checks::{
    check_by_name, conforming_ensemble, geometric_grid, registry, verify_bandedness_lemma,
    verify_heat_kernel_bounds, verify_kbar_bound, verify_min_integral, verify_poisson_bounds,
    BandVariant, InequalityCheck, InequalityReport, SuiteConfig,
};
pub use kernels::{heat_kernel, poisson_extension, Direction, KernelFactor};
pub use trig::{SlicePoly, Support, Term};
