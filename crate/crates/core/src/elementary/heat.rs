//! Per-mode heat equation `(∂t − ∂z² + a²)u = rhs`, `u(·, 0) = 0`, with a
//! Dirichlet or Neumann wall at z = 0 and (for stepping) a Dirichlet row at
//! the far end of the grid.
//!
//! Two independent paths are registered by name: `kernel` (reflected
//! Gaussian propagator with an exponential trapezoid rule in time) and
//! `stepping` (Crank–Nicolson with centered second differences).

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::banded::BandedMatrix;
use crate::elementary::ModeProblem;
use crate::spectral::VerticalGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wall {
    Dirichlet,
    Neumann,
}

pub trait HeatSolver: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;
    fn solve(&self, p: &ModeProblem<'_>, wall: Wall) -> Result<Array2<Complex64>>;
}

/// Registered heat solvers.
pub fn heat_solver_names() -> &'static [&'static str] {
    &["kernel", "stepping"]
}

pub fn heat_solver(name: &str) -> Result<Box<dyn HeatSolver>> {
    match name {
        "kernel" => Ok(Box::new(KernelHeat)),
        "stepping" => Ok(Box::new(SteppingHeat)),
        other => Err(Error::UnknownStrategy {
            kind: "heat solver",
            name: other.to_string(),
        }),
    }
}

pub fn solve_heat_dirichlet(
    p: &ModeProblem<'_>,
    method: &dyn HeatSolver,
) -> Result<Array2<Complex64>> {
    method.solve(p, Wall::Dirichlet)
}

pub fn solve_heat_neumann(
    p: &ModeProblem<'_>,
    method: &dyn HeatSolver,
) -> Result<Array2<Complex64>> {
    method.solve(p, Wall::Neumann)
}

fn check(p: &ModeProblem<'_>) -> Result<()> {
    p.check_shape()?;
    if !(p.a >= 0.0) || !p.a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "heat symbol a = {} must be ≥ 0",
            p.a
        )));
    }
    Ok(())
}

/// Crank–Nicolson time stepping.
#[derive(Debug, Clone, Copy, Default)]
pub struct SteppingHeat;

impl HeatSolver for SteppingHeat {
    fn name(&self) -> &'static str {
        "stepping"
    }

    fn solve(&self, p: &ModeProblem<'_>, wall: Wall) -> Result<Array2<Complex64>> {
        check(p)?;
        let (nz, nt) = p.rhs.dim();
        let last = nz - 1;
        let h = p.vgrid.spacing();
        let dt = p.tgrid.dt();
        let a2 = p.a * p.a;
        let off = 1.0 / (2.0 * h * h);
        let mut m = BandedMatrix::zeros(nz, 1, 2);
        match wall {
            Wall::Dirichlet => m.set(0, 0, 1.0),
            Wall::Neumann => {
                m.set(0, 0, 3.0);
                m.set(0, 1, -4.0);
                m.set(0, 2, 1.0);
            }
        }
        for i in 1..last {
            m.set(i, i - 1, -off);
            m.set(i, i, 1.0 / dt + 2.0 * off + 0.5 * a2);
            m.set(i, i + 1, -off);
        }
        m.set(last, last, 1.0);
        let lu = m.factor()?;
        let mut out = Array2::zeros((nz, nt));
        let mut u = vec![Complex64::new(0.0, 0.0); nz];
        let mut b = vec![Complex64::new(0.0, 0.0); nz];
        for step in 0..nt - 1 {
            b[0] = Complex64::new(0.0, 0.0);
            b[last] = Complex64::new(0.0, 0.0);
            for i in 1..last {
                let lap = (u[i - 1] - u[i] * 2.0 + u[i + 1]) * off;
                b[i] = u[i] / dt + lap - u[i] * (0.5 * a2)
                    + (p.rhs[[i, step]] + p.rhs[[i, step + 1]]) * 0.5;
            }
            lu.solve_in_place(&mut b);
            u.copy_from_slice(&b);
            for (i, v) in u.iter().enumerate() {
                out[[i, step + 1]] = *v;
            }
        }
        Ok(out)
    }
}

/// Reflected-kernel propagator with the exponential trapezoid rule
/// `u^{n+1} = S(Δt)u^n + Δt/2·[f^{n+1} + S(Δt)f^n]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KernelHeat;

/// Banded rows of the propagator `S(τ)` on a vertical grid.
#[derive(Debug, Clone)]
pub struct Propagator {
    rows: Vec<(usize, Vec<f64>)>,
}

impl Propagator {
    /// `S(τ)` for the heat flow with symbol `a` and the given wall reflection.
    ///
    /// When `τ/h² ≥ 1/2` the Gaussian is resolved by the grid and the
    /// point-sum (trapezoid) rule is spectrally accurate; otherwise the
    /// kernel is integrated exactly against hat functions.
    pub fn new(grid: &VerticalGrid, tau: f64, a: f64, wall: Wall) -> Self {
        let z = grid.nodes();
        let h = grid.spacing();
        let n = z.len();
        let damp = (-a * a * tau).exp();
        let sign = match wall {
            Wall::Dirichlet => -1.0,
            Wall::Neumann => 1.0,
        };
        let reach = 12.9 * tau.sqrt() + h;
        let band = (reach / h).ceil() as usize + 1;
        let resolved = tau / (h * h) >= 0.5;
        let rows = (0..n)
            .map(|i| {
                let lo = i.saturating_sub(band);
                let hi = (i + band).min(n - 1);
                let row: Vec<f64> = (lo..=hi)
                    .map(|j| {
                        let direct;
                        let image;
                        if resolved {
                            let c = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                            direct = c * h * gauss(z[i] - z[j], tau);
                            image = c * h * gauss(z[i] + z[j], tau);
                        } else {
                            let left = j > 0;
                            let right = j < n - 1;
                            direct = hat_conv(z[i], z[j], h, left, right, tau);
                            image = hat_conv(-z[i], z[j], h, left, right, tau);
                        }
                        damp * (direct + sign * image)
                    })
                    .collect();
                (lo, row)
            })
            .collect();
        Propagator { rows }
    }

    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (i, (lo, row)) in self.rows.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, v) in row.iter().zip(&x[*lo..]) {
                acc += v * *w;
            }
            out[i] = acc;
        }
    }
}

/// Normalized Gaussian `(4πτ)^{−1/2} e^{−x²/4τ}`.
pub fn gauss(x: f64, tau: f64) -> f64 {
    (-x * x / (4.0 * tau)).exp() / (4.0 * PI * tau).sqrt()
}

/// `∫ φ_j(y) G(x − y) dy` for the hat function centred at `zj`.
fn hat_conv(x: f64, zj: f64, h: f64, left: bool, right: bool, tau: f64) -> f64 {
    let r = 2.0 * tau.sqrt();
    let e = |s: f64| 0.5 * libm::erf(s / r);
    let m = |s: f64| -2.0 * tau * gauss(s, tau);
    let mut total = 0.0;
    if left {
        // φ = (y − (zj − h))/h on [zj − h, zj]
        let c = zj - h;
        let (s0, s1) = (zj - h - x, zj - x);
        total += ((x - c) * (e(s1) - e(s0)) + (m(s1) - m(s0))) / h;
    }
    if right {
        // φ = (zj + h − y)/h on [zj, zj + h]
        let c = zj + h;
        let (s0, s1) = (zj - x, zj + h - x);
        total += ((c - x) * (e(s1) - e(s0)) - (m(s1) - m(s0))) / h;
    }
    total
}

impl HeatSolver for KernelHeat {
    fn name(&self) -> &'static str {
        "kernel"
    }

    fn solve(&self, p: &ModeProblem<'_>, wall: Wall) -> Result<Array2<Complex64>> {
        check(p)?;
        let (nz, nt) = p.rhs.dim();
        let dt = p.tgrid.dt();
        let s = Propagator::new(p.vgrid, dt, p.a, wall);
        let mut out = Array2::zeros((nz, nt));
        let mut w = vec![Complex64::new(0.0, 0.0); nz];
        let mut next = vec![Complex64::new(0.0, 0.0); nz];
        for step in 0..nt - 1 {
            for i in 0..nz {
                w[i] = out[[i, step]] + p.rhs[[i, step]] * (0.5 * dt);
            }
            s.apply(&w, &mut next);
            for i in 0..nz {
                out[[i, step + 1]] = next[i] + p.rhs[[i, step + 1]] * (0.5 * dt);
            }
            if wall == Wall::Dirichlet {
                out[[0, step + 1]] = Complex64::new(0.0, 0.0);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TimeGrid;

    #[test]
    fn registry_resolves_names() {
        for name in heat_solver_names() {
            assert_eq!(heat_solver(name).unwrap().name(), *name);
        }
        assert!(heat_solver("spectral").is_err());
    }

    #[test]
    fn hat_weights_sum_to_heat_mass() {
        // Away from the wall the hat-integrated kernel rows conserve mass.
        let g = VerticalGrid::half_line(4.0, 400).unwrap();
        let p = Propagator::new(&g, 1e-5, 0.0, Wall::Neumann);
        let row = &p.rows[200];
        let s: f64 = row.1.iter().sum();
        assert!((s - 1.0).abs() < 1e-10, "{s}");
        let q = Propagator::new(&g, 1e-2, 0.0, Wall::Neumann);
        let s: f64 = q.rows[200].1.iter().sum();
        assert!((s - 1.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn neumann_constant_source_gives_linear_growth() {
        let g = VerticalGrid::half_line(8.0, 128).unwrap();
        let t = TimeGrid::new(0.5, 32).unwrap();
        let rhs = Array2::from_elem((129, 33), Complex64::new(1.0, 0.0));
        let p = ModeProblem::new(0.0, &g, &t, rhs.view());
        let u = KernelHeat.solve(&p, Wall::Neumann).unwrap();
        // Near the wall, far from the truncation, u = t.
        for n in 0..33 {
            let tn = t.node(n);
            for j in 0..8 {
                assert!(
                    (u[[j, n]].re - tn).abs() < 1e-10,
                    "{} vs {}",
                    u[[j, n]].re,
                    tn
                );
            }
        }
    }
}
