//! Closed-form heat and Poisson kernels.

use num_complex::Complex64;

use crate::{Error, Result};

/// Which factor of the heat kernel `Γ(x, t) = Γ₁(z, t) Γ_{d−1}(x', t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFactor {
    /// `Γ₁(z, t) = t^{−1/2} e^{−z²/4t}`; the point is `[z]`.
    Vertical,
    /// `Γ_{d−1}(x', t)`; the point is `x'`.
    Horizontal,
    /// `Γ(x, t)`; the point is `[z, x']`.
    Full,
}

/// Physicists' Hermite polynomial `H_n`, `n ≤ 3`.
fn hermite(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        2 => 4.0 * x * x - 2.0,
        _ => 8.0 * x * x * x - 12.0 * x,
    }
}

/// `∂_yⁿ [t^{−1/2} e^{−y²/4t}]`.
pub fn gaussian_derivative(y: f64, t: f64, n: usize) -> f64 {
    let s = 2.0 * t.sqrt();
    let xi = y / s;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * hermite(n, xi) * s.powi(-(n as i32)) * (-xi * xi).exp() / t.sqrt()
}

/// Derivative of a heat-kernel factor at `point`, one derivative order per
/// coordinate (each at most 3).
pub fn heat_kernel(
    which: KernelFactor,
    dim: usize,
    point: &[f64],
    t: f64,
    orders: &[usize],
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "heat kernel needs t > 0, got {t}"
        )));
    }
    if dim != 2 && dim != 3 {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} must be 2 or 3"
        )));
    }
    let coords = match which {
        KernelFactor::Vertical => 1,
        KernelFactor::Horizontal => dim - 1,
        KernelFactor::Full => dim,
    };
    if point.len() != coords || orders.len() != coords {
        return Err(Error::InvalidParameter(format!(
            "expected {coords} coordinates and orders, got {} and {}",
            point.len(),
            orders.len()
        )));
    }
    if let Some(&n) = orders.iter().find(|&&n| n > 3) {
        return Err(Error::InvalidParameter(format!(
            "derivative order {n} exceeds 3"
        )));
    }
    Ok(point
        .iter()
        .zip(orders)
        .map(|(&y, &n)| gaussian_derivative(y, t, n))
        .product())
}

/// Side of the boundary plane on which the harmonic extension lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `z > z₀`.
    Up,
    /// `z < z₀`.
    Down,
}

/// Harmonic extension of one Fourier coefficient given on the plane `z₀`,
/// evaluated at `z`; the symbol is `e^{−a|z − z₀|}`.
///
/// Points on the wrong side of the plane get zero.
pub fn poisson_extension(
    coefficient: Complex64,
    a: f64,
    z0: f64,
    z: &[f64],
    direction: Direction,
) -> Result<Vec<Complex64>> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Poisson extension needs a > 0, got {a}"
        )));
    }
    Ok(z.iter()
        .map(|&zz| {
            let dist = match direction {
                Direction::Up => zz - z0,
                Direction::Down => z0 - zz,
            };
            if dist < 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                coefficient * (-a * dist).exp()
            }
        })
        .collect())
}
