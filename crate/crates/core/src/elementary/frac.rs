//! First-order exponential solves `(∂z ∓ a)u = rhs` per mode.
//!
//! Both directions advance panel by panel with the exact propagator
//! `e^{−ah}`; the panel source integral uses Gauss–Legendre points on a cubic
//! interpolant of the sampled right-hand side (or the exact source when a
//! closure is supplied).

use ndarray::Array2;
use num_complex::Complex64;

use crate::elementary::ModeProblem;
use crate::quadrature::gauss_legendre_unit;
use crate::spectral::VerticalGrid;
use crate::{Error, Result};

const GAUSS_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sweep {
    /// `(∂z − a)u = r`, `u(Zmax) = 0`: `u_j = e^{−ah}u_{j+1} − ∫ e^{−a(s−z_j)} r`.
    Backward,
    /// `(∂z + a)u = r`, `u(0) = g`: `u_{j+1} = e^{−ah}u_j + ∫ e^{−a(z_{j+1}−s)} r`.
    Forward,
}

/// Per-panel weights on the four cubic-interpolation nodes.
struct PanelWeights {
    /// Indexed by the panel's offset inside its 4-node stencil (0, 1 or 2).
    w: [[f64; 4]; 3],
}

impl PanelWeights {
    fn new(a: f64, h: f64, sweep: Sweep) -> Self {
        let (xs, ws) = gauss_legendre_unit(GAUSS_POINTS);
        let mut w = [[0.0; 4]; 3];
        for (off, row) in w.iter_mut().enumerate() {
            for (x, wg) in xs.iter().zip(&ws) {
                let decay = match sweep {
                    Sweep::Backward => (-a * h * x).exp(),
                    Sweep::Forward => (-a * h * (1.0 - x)).exp(),
                };
                let p = off as f64 + x;
                for (m, r) in row.iter_mut().enumerate() {
                    *r += h * wg * decay * lagrange4(m, p);
                }
            }
        }
        PanelWeights { w }
    }
}

/// Cubic Lagrange basis on nodes 0, 1, 2, 3.
fn lagrange4(m: usize, p: f64) -> f64 {
    let mut v = 1.0;
    for q in 0..4 {
        if q != m {
            v *= (p - q as f64) / (m as f64 - q as f64);
        }
    }
    v
}

fn check_symbol(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::NonBandLimitedMode(a));
    }
    Ok(())
}

fn sweep_sampled(
    a: f64,
    h: f64,
    rhs: &[Complex64],
    start: Complex64,
    sweep: Sweep,
    pw: &PanelWeights,
) -> Vec<Complex64> {
    let n = rhs.len() - 1;
    let e = (-a * h).exp();
    let mut u = vec![Complex64::new(0.0, 0.0); n + 1];
    let panel = |j: usize| -> Complex64 {
        let s = j.saturating_sub(1).min(n - 3);
        let w = &pw.w[j - s];
        (0..4).map(|m| rhs[s + m] * w[m]).sum()
    };
    match sweep {
        Sweep::Backward => {
            u[n] = start;
            for j in (0..n).rev() {
                u[j] = u[j + 1] * e - panel(j);
            }
        }
        Sweep::Forward => {
            u[0] = start;
            for j in 0..n {
                u[j + 1] = u[j] * e + panel(j);
            }
        }
    }
    u
}

fn solve_sampled(p: &ModeProblem<'_>, sweep: Sweep) -> Result<Array2<Complex64>> {
    check_symbol(p.a)?;
    p.check_shape()?;
    let h = p.vgrid.spacing();
    let pw = PanelWeights::new(p.a, h, sweep);
    let (nz, nt) = p.rhs.dim();
    let mut out = Array2::zeros((nz, nt));
    for n in 0..nt {
        let col: Vec<Complex64> = p.rhs.column(n).to_vec();
        let start = match (sweep, &p.wall) {
            (Sweep::Forward, Some(g)) => g[n],
            _ => Complex64::new(0.0, 0.0),
        };
        let u = sweep_sampled(p.a, h, &col, start, sweep, &pw);
        out.column_mut(n).assign(&ndarray::Array1::from(u));
    }
    Ok(out)
}

/// `(∂z − a)u = rhs` on `[0, Zmax]` with `u(Zmax) = 0`:
/// `u(z) = −∫_z^{Zmax} e^{−a(z₀−z)} rhs(z₀) dz₀`. Time is a passive parameter.
pub fn solve_frac_backward(p: &ModeProblem<'_>) -> Result<Array2<Complex64>> {
    solve_sampled(p, Sweep::Backward)
}

/// `(∂z + a)u = rhs` with `u(0) = g`:
/// `u(z) = e^{−az}g + ∫_0^z e^{−a(z−z₀)} rhs(z₀) dz₀`.
pub fn solve_frac_forward(p: &ModeProblem<'_>) -> Result<Array2<Complex64>> {
    solve_sampled(p, Sweep::Forward)
}

fn sweep_exact<F: Fn(f64) -> Complex64>(
    a: f64,
    grid: &VerticalGrid,
    rhs: F,
    start: Complex64,
    sweep: Sweep,
) -> Vec<Complex64> {
    let z = grid.nodes();
    let n = z.len() - 1;
    let (xs, ws) = gauss_legendre_unit(GAUSS_POINTS);
    let panel = |j: usize| -> Complex64 {
        let h = z[j + 1] - z[j];
        xs.iter()
            .zip(&ws)
            .map(|(x, w)| {
                let decay = match sweep {
                    Sweep::Backward => (-a * h * x).exp(),
                    Sweep::Forward => (-a * h * (1.0 - x)).exp(),
                };
                rhs(z[j] + h * x) * (h * w * decay)
            })
            .sum()
    };
    let mut u = vec![Complex64::new(0.0, 0.0); n + 1];
    match sweep {
        Sweep::Backward => {
            u[n] = start;
            for j in (0..n).rev() {
                u[j] = u[j + 1] * (-a * (z[j + 1] - z[j])).exp() - panel(j);
            }
        }
        Sweep::Forward => {
            u[0] = start;
            for j in 0..n {
                u[j + 1] = u[j] * (-a * (z[j + 1] - z[j])).exp() + panel(j);
            }
        }
    }
    u
}

/// Backward solve for a source given as a function of z (exact on each panel
/// up to Gauss–Legendre accuracy; discontinuities at grid nodes are fine).
pub fn frac_backward_profile<F: Fn(f64) -> Complex64>(
    a: f64,
    grid: &VerticalGrid,
    rhs: F,
) -> Result<Vec<Complex64>> {
    check_symbol(a)?;
    Ok(sweep_exact(
        a,
        grid,
        rhs,
        Complex64::new(0.0, 0.0),
        Sweep::Backward,
    ))
}

/// Forward solve for a source given as a function of z, with wall value `g`.
pub fn frac_forward_profile<F: Fn(f64) -> Complex64>(
    a: f64,
    grid: &VerticalGrid,
    rhs: F,
    g: Complex64,
) -> Result<Vec<Complex64>> {
    check_symbol(a)?;
    Ok(sweep_exact(a, grid, rhs, g, Sweep::Forward))
}
