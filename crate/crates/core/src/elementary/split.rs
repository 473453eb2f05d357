//! Splitting of a Dirichlet heat solution into the Neumann solution plus the
//! whole-line response to the wall flux.

use std::f64::consts::PI;

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::elementary::heat::{HeatSolver, Wall};
use crate::elementary::ModeProblem;
use crate::quadrature::gauss_legendre_unit;
use crate::spectral::field::profile_l1;
use crate::Result;

#[derive(Debug, Clone)]
pub struct SplitResult {
    pub neumann: Array2<Complex64>,
    pub correction: Array2<Complex64>,
    /// `‖u_D − (u_N + u_C)‖₁ / ‖u_D‖₁` (0 when `u_D = 0`).
    pub defect: f64,
    /// Largest one-sided `|∂z u_N(0, t)|`.
    pub neumann_wall_flux: f64,
}

/// Split `u_dirichlet = u_N + u_C` where `u_N` solves the Neumann problem and
/// `u_C(z,t) = −∫_0^t e^{−a²(t−s)} Γ̂(z,t−s)·2∂z u_D(0,s) ds`.
pub fn split_heat_solution(
    u_dirichlet: ArrayView2<'_, Complex64>,
    p: &ModeProblem<'_>,
    method: &dyn HeatSolver,
) -> Result<SplitResult> {
    p.check_shape()?;
    let neumann = method.solve(p, Wall::Neumann)?;
    let (nz, nt) = u_dirichlet.dim();
    let h = p.vgrid.spacing();
    let dt = p.tgrid.dt();
    let flux = |u: ArrayView2<'_, Complex64>, n: usize| {
        (u[[0, n]] * -3.0 + u[[1, n]] * 4.0 - u[[2, n]]) / (2.0 * h)
    };
    let g: Vec<Complex64> = (0..nt).map(|n| flux(u_dirichlet, n)).collect();
    let neumann_wall_flux = (0..nt)
        .map(|n| flux(neumann.view(), n).norm())
        .fold(0.0, f64::max);

    let z = p.vgrid.nodes();
    let a2 = p.a * p.a;
    // w0[lag][i], w1[lag][i]: weights of g at the early and late end of the
    // panel that sits `lag` steps before the evaluation time.
    let (gx, gw) = gauss_legendre_unit(8);
    let (sx, sw) = gauss_legendre_unit(16);
    let mut w0 = vec![vec![0.0; nz]; nt];
    let mut w1 = vec![vec![0.0; nz]; nt];
    let root = dt.sqrt();
    for i in 0..nz {
        let zi = z[i];
        // Last panel: τ = σ², Γ̂ dτ = π^{−1/2} e^{−z²/4σ²} dσ.
        for (x, w) in sx.iter().zip(&sw) {
            let sigma = root * x;
            let tau = sigma * sigma;
            let kern = if sigma == 0.0 {
                0.0
            } else {
                -2.0 / PI.sqrt() * (-a2 * tau).exp() * (-zi * zi / (4.0 * tau)).exp()
            };
            let theta = 1.0 - tau / dt;
            w0[0][i] += root * w * kern * (1.0 - theta);
            w1[0][i] += root * w * kern * theta;
        }
        for lag in 1..nt {
            for (x, w) in gx.iter().zip(&gw) {
                let tau = dt * (lag as f64 + x);
                let kern = -2.0 * (-a2 * tau).exp() * (-zi * zi / (4.0 * tau)).exp()
                    / (4.0 * PI * tau).sqrt();
                let theta = 1.0 - x;
                w0[lag][i] += dt * w * kern * (1.0 - theta);
                w1[lag][i] += dt * w * kern * theta;
            }
        }
    }
    let mut correction = Array2::zeros((nz, nt));
    for m in 1..nt {
        for n in 0..m {
            let lag = m - 1 - n;
            let (ga, gb) = (g[n], g[n + 1]);
            if ga.norm() == 0.0 && gb.norm() == 0.0 {
                continue;
            }
            for i in 0..nz {
                correction[[i, m]] += ga * w0[lag][i] + gb * w1[lag][i];
            }
        }
    }
    let wz = p.vgrid.weights();
    let wt = p.tgrid.weights();
    let base = profile_l1(u_dirichlet, wz, &wt, None);
    let mut diff = u_dirichlet.to_owned();
    diff -= &neumann;
    diff -= &correction;
    let defect = if base == 0.0 {
        0.0
    } else {
        profile_l1(diff.view(), wz, &wt, None) / base
    };
    Ok(SplitResult {
        neumann,
        correction,
        defect,
        neumann_wall_flux,
    })
}
