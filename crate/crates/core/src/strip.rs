//! Stokes flow in the strip `0 < z < 1` with no-slip at both walls, solved
//! per mode through the fourth-order equation for the vertical velocity,
//! and the cutoff localization that turns a strip solution into half-space
//! data near either wall.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::banded::BandedMatrix;
use crate::elementary::{HeatSolver, ModeProblem, SteppingHeat, Wall};
use crate::halfspace::{interior_l1, recover_pressure, solve_halfspace, FlowState, Ratio};
use crate::spectral::field::profile_l1;
use crate::spectral::stencil::dz;
use crate::spectral::{Component, FieldLayout, SpectralField, VerticalGrid, VerticalKind};
use crate::{Error, Result};

/// Defects of a strip solve, all relative except the wall values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StripDefects {
    pub divergence: f64,
    /// Vertical momentum balance `∂z p − (f^z − L u^z)`.
    pub momentum: f64,
    /// Largest velocity magnitude on either wall row.
    pub wall_velocity: f64,
    /// Largest one-sided `|∂z u^z|` on either wall, relative to the largest `|∂z u^z|`.
    pub wall_flux: f64,
}

#[derive(Debug, Clone)]
pub struct StripSolution {
    pub state: FlowState,
    pub defects: StripDefects,
}

fn zeros(layout: &FieldLayout) -> Array2<Complex64> {
    Array2::zeros((layout.vgrid.len(), layout.tgrid.len()))
}

/// Centered ∂z inside; zero on the wall rows, where the clamped condition
/// `∂z u^z = 0` is imposed through the ghost rows.
fn clamped_dz(w: &Array2<Complex64>, h: f64) -> Array2<Complex64> {
    let n = w.nrows() - 1;
    let mut out = Array2::zeros(w.raw_dim());
    for j in 1..n {
        let row = (&w.row(j + 1) - &w.row(j - 1)).mapv(|v| v / (2.0 * h));
        out.row_mut(j).assign(&row);
    }
    out
}

/// `B = ∂z² − a²` on the full node vector with ghosts `w_{−1} = w_1`,
/// `w_{N+1} = w_{N−1}` (clamped walls, `w_0 = w_N = 0`).
fn apply_b(w: &[f64], a2: f64, h2: f64) -> Vec<f64> {
    let n = w.len() - 1;
    (0..=n)
        .map(|j| {
            let left = if j == 0 { w[1] } else { w[j - 1] };
            let right = if j == n { w[n - 1] } else { w[j + 1] };
            (left - 2.0 * w[j] + right) / h2 - a2 * w[j]
        })
        .collect()
}

/// Rows 1..N−1 of `c₁B + c₂B²` as a pentadiagonal matrix on the unknowns
/// `w_1..w_{N−1}`.
fn assemble(n: usize, a2: f64, h2: f64, c1: f64, c2: f64) -> BandedMatrix {
    let mut m = BandedMatrix::zeros(n - 1, 2, 2);
    let mut e = vec![0.0; n + 1];
    for k in 1..n {
        e[k] = 1.0;
        let b = apply_b(&e, a2, h2);
        let bb = apply_b(&b, a2, h2);
        for j in k.saturating_sub(2).max(1)..=(k + 2).min(n - 1) {
            let v = c1 * b[j] + c2 * bb[j];
            if v != 0.0 {
                m.set(j - 1, k - 1, v);
            }
        }
        e[k] = 0.0;
    }
    m
}

/// Crank–Nicolson for `(∂t − B)B w = g`, `w(·,0) = 0`, clamped walls.
fn solve_vertical(g: &Array2<Complex64>, a: f64, h: f64, dt: f64) -> Result<Array2<Complex64>> {
    let (nz, nt) = g.dim();
    let n = nz - 1;
    let (a2, h2) = (a * a, h * h);
    let lhs = assemble(n, a2, h2, 1.0 / dt, -0.5).factor()?;
    let rhs = assemble(n, a2, h2, 1.0 / dt, 0.5);
    let mut w = Array2::zeros((nz, nt));
    let mut cur = vec![Complex64::new(0.0, 0.0); n - 1];
    for step in 0..nt - 1 {
        let mut b = rhs.matvec(&cur);
        for (i, bi) in b.iter_mut().enumerate() {
            *bi += (g[[i + 1, step]] + g[[i + 1, step + 1]]) * 0.5;
        }
        lhs.solve_in_place(&mut b);
        cur.copy_from_slice(&b);
        for (i, v) in cur.iter().enumerate() {
            w[[i + 1, step + 1]] = *v;
        }
    }
    Ok(w)
}

struct ModeOut {
    uz: Array2<Complex64>,
    uh: Vec<Array2<Complex64>>,
}

fn solve_mode(f: &SpectralField, m: usize) -> Result<ModeOut> {
    let layout = f.layout();
    let hd = layout.lattice.band().horizontal_dims();
    if f.mode_is_zero(m) {
        return Ok(ModeOut {
            uz: zeros(layout),
            uh: vec![zeros(layout); hd],
        });
    }
    let mode = *layout.lattice.mode(m);
    let (a, k) = (mode.abs, mode.k);
    let a2 = a * a;
    let h = layout.vgrid.spacing();
    let dt = layout.tgrid.dt();
    let i = Complex64::new(0.0, 1.0);
    let mut kf = zeros(layout);
    let mut kdot = zeros(layout);
    for c in 0..hd {
        kf.zip_mut_with(&f.profile(c, m), |d, v| *d += i * k[c] * v);
        kdot.zip_mut_with(&f.profile(c, m), |d, v| *d += v * k[c]);
    }
    // L(∂z² − a²)u^z = −a² f^z − ∂z(ik'·f')
    let mut g = dz(kf.view(), h);
    g.zip_mut_with(&f.profile(hd, m), |d, v| *d = -*d - v * a2);
    let uz = solve_vertical(&g, a, h, dt)?;
    let duz = clamped_dz(&uz, h);
    let mut uh = Vec::with_capacity(hd);
    for c in 0..hd {
        let mut pf = f.profile(c, m).to_owned();
        pf.zip_mut_with(&kdot, |d, q| *d -= q * (k[c] / a2));
        let mut u = SteppingHeat.solve(
            &ModeProblem::new(a, &layout.vgrid, &layout.tgrid, pf.view()),
            Wall::Dirichlet,
        )?;
        let coef = i * k[c] / a2;
        u.zip_mut_with(&duz, |d, v| *d += coef * v);
        let last = u.nrows() - 1;
        u.row_mut(0).fill(Complex64::new(0.0, 0.0));
        u.row_mut(last).fill(Complex64::new(0.0, 0.0));
        uh.push(u);
    }
    Ok(ModeOut { uz, uh })
}

fn require_strip(layout: &FieldLayout) -> Result<()> {
    if layout.vgrid.kind() != VerticalKind::Strip {
        return Err(Error::Incompatible(
            "strip solver needs a strip vertical grid".into(),
        ));
    }
    if layout.vgrid.len() < 5 {
        return Err(Error::InvalidGrid(
            "strip solver needs at least four panels".into(),
        ));
    }
    Ok(())
}

/// Solve the strip Stokes system for a full-vector band-limited forcing.
pub fn solve_strip(f: &SpectralField) -> Result<StripSolution> {
    if f.component() != Component::Full {
        return Err(Error::Incompatible(
            "forcing must be a full vector field".into(),
        ));
    }
    let layout = f.layout().clone();
    require_strip(&layout)?;
    f.require_band_limited()?;
    let hd = layout.lattice.band().horizontal_dims();
    let outs: Vec<ModeOut> = (0..layout.lattice.len())
        .into_par_iter()
        .map(|m| solve_mode(f, m))
        .collect::<Result<Vec<_>>>()?;
    let mut u_vert = SpectralField::zeros(&layout, Component::Scalar);
    let mut u_horiz = SpectralField::zeros(&layout, Component::Horizontal);
    for (m, o) in outs.iter().enumerate() {
        u_vert.set_profile(0, m, &o.uz);
        for c in 0..hd {
            u_horiz.set_profile(c, m, &o.uh[c]);
        }
    }
    let rho = SpectralField::zeros(&layout, Component::Scalar);
    let (pressure, momentum) = recover_pressure(&u_horiz, &u_vert, f, &rho)?;
    let state = FlowState {
        u_horiz,
        u_vert,
        pressure,
    };
    let divergence = strip_divergence(&state)?;
    let defects = StripDefects {
        divergence,
        momentum,
        ..wall_defects(&state)
    };
    Ok(StripSolution { state, defects })
}

/// Divergence defect measured with the same clamped ∂z the solver uses.
fn strip_divergence(state: &FlowState) -> Result<f64> {
    let layout = state.layout().clone();
    let lat = layout.lattice.clone();
    let hd = lat.band().horizontal_dims();
    let h = layout.vgrid.spacing();
    let i = Complex64::new(0.0, 1.0);
    let mut total = Ratio::default();
    for m in 0..lat.len() {
        let k = lat.mode(m).k;
        let mut ku = zeros(&layout);
        for c in 0..hd {
            ku.zip_mut_with(&state.u_horiz.profile(c, m), |d, v| *d += i * k[c] * v);
        }
        let duz = clamped_dz(&state.u_vert.profile(0, m).to_owned(), h);
        let defect = &ku + &duz;
        total.add(Ratio {
            num: interior_l1(defect.view(), &layout),
            den: interior_l1(ku.view(), &layout) + interior_l1(duz.view(), &layout),
        });
    }
    Ok(total.value())
}

fn wall_defects(state: &FlowState) -> StripDefects {
    let layout = state.layout();
    let n = layout.vgrid.len() - 1;
    let h = layout.vgrid.spacing();
    let wall = [0, n];
    let mut velocity: f64 = 0.0;
    for field in [&state.u_horiz, &state.u_vert] {
        for c in 0..field.n_components() {
            for m in 0..field.n_modes() {
                let p = field.profile(c, m);
                for &j in &wall {
                    velocity = p.row(j).iter().fold(velocity, |acc, v| acc.max(v.norm()));
                }
            }
        }
    }
    let mut flux: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for m in 0..state.u_vert.n_modes() {
        let d = dz(state.u_vert.profile(0, m), h);
        for (j, row) in d.rows().into_iter().enumerate() {
            let peak = row.iter().fold(0.0_f64, |acc, v| acc.max(v.norm()));
            scale = scale.max(peak);
            if j == 0 || j == n {
                flux = flux.max(peak);
            }
        }
    }
    StripDefects {
        wall_velocity: velocity,
        wall_flux: if scale == 0.0 { 0.0 } else { flux / scale },
        ..Default::default()
    }
}

/// Smooth cutoff equal to 1 near `z = 0` and 0 near `z = 1`, with a quintic
/// transition on `[1/2 − δ, 1/2 + δ]`, sampled on a strip grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffProfile {
    pub delta: f64,
    pub eta: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

/// Quintic smoothstep value and first two derivatives in `s ∈ [0, 1]`.
fn smoothstep(s: f64) -> (f64, f64, f64) {
    if s <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if s >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let s2 = s * s;
    (
        s2 * s * (10.0 - 15.0 * s + 6.0 * s2),
        30.0 * s2 * (1.0 - s) * (1.0 - s),
        60.0 * s * (1.0 - s) * (1.0 - 2.0 * s),
    )
}

impl CutoffProfile {
    /// `(η, η', η'')` at `z`.
    pub fn evaluate(delta: f64, z: f64) -> (f64, f64, f64) {
        let w = 2.0 * delta;
        let (v, d1, d2) = smoothstep((z - (0.5 - delta)) / w);
        (1.0 - v, -d1 / w, -d2 / (w * w))
    }

    /// Profile from explicit samples (for degenerate or custom cutoffs).
    pub fn from_samples(eta: Vec<f64>, d1: Vec<f64>, d2: Vec<f64>) -> Result<Self> {
        if eta.len() != d1.len() || eta.len() != d2.len() {
            return Err(Error::InvalidParameter(
                "cutoff samples must have equal lengths".into(),
            ));
        }
        Ok(CutoffProfile {
            delta: f64::NAN,
            eta,
            d1,
            d2,
        })
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }
}

/// Quintic cutoff with transition half-width `δ ∈ (0, 1/4)`.
pub fn build_cutoff(delta: f64, grid: &VerticalGrid) -> Result<CutoffProfile> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::InvalidParameter(format!(
            "cutoff half-width δ = {delta} must lie in (0, 1/4)"
        )));
    }
    if grid.kind() != VerticalKind::Strip {
        return Err(Error::Incompatible(
            "cutoff is sampled on a strip grid".into(),
        ));
    }
    let mut eta = Vec::with_capacity(grid.len());
    let mut d1 = Vec::with_capacity(grid.len());
    let mut d2 = Vec::with_capacity(grid.len());
    for &z in grid.nodes() {
        let (v, a, b) = CutoffProfile::evaluate(delta, z);
        eta.push(v);
        d1.push(a);
        d2.push(b);
    }
    Ok(CutoffProfile { delta, eta, d1, d2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Near `z = 0`, weighted by `η`.
    Upper,
    /// Near `z = 1`, weighted by `1 − η` and reflected through `z ↦ 1 − z`.
    Lower,
}

/// Half-space data whose solution is the localized strip solution.
#[derive(Debug, Clone)]
pub struct LocalizedData {
    pub forcing: SpectralField,
    pub divergence: SpectralField,
    /// The localized strip velocity (`η u`, or its reflection), the exact
    /// answer the half-space solve should reproduce.
    pub reference: SpectralField,
}

/// Half-space grid with the strip spacing reaching at least `zmax`.
pub fn matching_halfspace_grid(strip: &VerticalGrid, zmax: f64) -> Result<VerticalGrid> {
    let h = strip.spacing();
    let panels = (zmax.max(1.0) / h).ceil() as usize;
    VerticalGrid::half_line(panels as f64 * h, panels)
}

/// Localize a strip solution to one wall: with `ζ = η` (upper) or `1 − η`
/// (lower), `f̃ = ζf − 2ζ'∂z u − ζ''u + ζ'p e_z` and `ρ̃ = ζ'u^z`, extended by
/// zero onto the half-space grid `target` (same spacing, `Zmax ≥ 1`).
pub fn localize(
    state: &FlowState,
    f: &SpectralField,
    cutoff: &CutoffProfile,
    side: Side,
    target: &VerticalGrid,
) -> Result<LocalizedData> {
    let layout = state.layout().clone();
    layout.check_same(f.layout())?;
    let nz = layout.vgrid.len();
    let n = nz - 1;
    let h = layout.vgrid.spacing();
    if cutoff.len() != nz {
        return Err(Error::Incompatible(
            "cutoff is sampled on a different grid".into(),
        ));
    }
    if (target.spacing() - h).abs() > 1e-12 * h
        || target.len() < nz
        || target.kind() == VerticalKind::Strip
    {
        return Err(Error::Incompatible(
            "half-space grid must share the strip spacing and reach z = 1".into(),
        ));
    }
    let hd = layout.lattice.band().horizontal_dims();
    let sign = if side == Side::Upper { 1.0 } else { -1.0 };
    let zeta: Vec<f64> = cutoff
        .eta
        .iter()
        .map(|e| if side == Side::Upper { *e } else { 1.0 - e })
        .collect();
    let z1: Vec<f64> = cutoff.d1.iter().map(|d| sign * d).collect();
    let z2: Vec<f64> = cutoff.d2.iter().map(|d| sign * d).collect();

    let out_layout = layout.with_vgrid(target.clone());
    let mut forcing = SpectralField::zeros(&out_layout, Component::Full);
    let mut divergence = SpectralField::zeros(&out_layout, Component::Scalar);
    let mut reference = SpectralField::zeros(&out_layout, Component::Full);
    let velocity = state.velocity();
    // Reflection flips the vertical component and maps node j to N − j.
    let place = |j: usize| if side == Side::Upper { j } else { n - j };
    let flip = |c: usize| {
        if side == Side::Lower && c == hd {
            -1.0
        } else {
            1.0
        }
    };
    for m in 0..layout.lattice.len() {
        let p = state.pressure.profile(0, m);
        for c in 0..=hd {
            let u = velocity.profile(c, m);
            let du = dz(u, h);
            let fc = f.profile(c, m);
            for j in 0..nz {
                let dst = place(j);
                let s = flip(c);
                for t in 0..layout.tgrid.len() {
                    let mut v =
                        fc[[j, t]] * zeta[j] - du[[j, t]] * (2.0 * z1[j]) - u[[j, t]] * z2[j];
                    if c == hd {
                        v += p[[j, t]] * z1[j];
                    }
                    forcing.values_mut()[[c, m, dst, t]] = v * s;
                    reference.values_mut()[[c, m, dst, t]] = u[[j, t]] * (zeta[j] * s);
                }
            }
        }
        let uz = state.u_vert.profile(0, m);
        for j in 0..nz {
            for t in 0..layout.tgrid.len() {
                divergence.values_mut()[[0, m, place(j), t]] = uz[[j, t]] * z1[j];
            }
        }
    }
    Ok(LocalizedData {
        forcing,
        divergence,
        reference,
    })
}

/// Relative L¹ mismatch between half-space solves of the localized data and
/// the localized strip solution, on `z ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub upper: f64,
    pub lower: f64,
}

/// Strip solve → localization to each wall → half-space solve → comparison.
pub fn consistency_check(
    f: &SpectralField,
    delta: f64,
    zmax: f64,
    heat: &dyn HeatSolver,
) -> Result<ConsistencyReport> {
    let strip = solve_strip(f)?;
    let layout = f.layout();
    let cutoff = build_cutoff(delta, &layout.vgrid)?;
    let target = matching_halfspace_grid(&layout.vgrid, zmax)?;
    let nz = layout.vgrid.len();
    let mut out = [0.0; 2];
    for (slot, side) in [Side::Upper, Side::Lower].into_iter().enumerate() {
        let data = localize(&strip.state, f, &cutoff, side, &target)?;
        let (half, _) = solve_halfspace(&data.forcing, &data.divergence, heat)?;
        let got = half.velocity();
        let diff = got.sub(&data.reference)?;
        let wz = data.reference.layout().vgrid.weights();
        let wt = layout.tgrid.weights();
        let mut num = 0.0;
        let mut den = 0.0;
        for c in 0..diff.n_components() {
            for m in 0..diff.n_modes() {
                num += profile_l1(diff.profile(c, m), wz, &wt, Some(0..nz));
                den += profile_l1(data.reference.profile(c, m), wz, &wt, Some(0..nz));
            }
        }
        out[slot] = if den == 0.0 {
            if num == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            num / den
        };
    }
    Ok(ConsistencyReport {
        upper: out[0],
        lower: out[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{BandSpec, TimeGrid, WavenumberLattice};

    #[test]
    fn fourth_order_operator_is_symmetric_and_negative() {
        // c₁B + c₂B² with c₁ = 1/Δt > 0, c₂ = −1/2: B is negative definite
        // and B² positive, so the Crank–Nicolson matrix is negative definite.
        let m = assemble(16, 4.0, 1.0 / 256.0, 10.0, -0.5);
        for i in 0..m.dim() {
            assert!(m.get(i, i) < 0.0);
            for j in 0..m.dim() {
                assert!((m.get(i, j) - m.get(j, i)).abs() < 1e-9 * m.get(i, i).abs());
            }
        }
    }

    #[test]
    fn clamped_ghosts_reflect() {
        // w = z²(1 − z)² on h = 1/4: B w at the wall is (2w₁)/h² with w₀ = 0.
        let h: f64 = 0.25;
        let w: Vec<f64> = (0..=4)
            .map(|j| {
                let z = j as f64 * h;
                z * z * (1.0 - z) * (1.0 - z)
            })
            .collect();
        let b = apply_b(&w, 0.0, h * h);
        assert!((b[0] - 2.0 * w[1] / (h * h)).abs() < 1e-12);
        assert!((b[4] - b[0]).abs() < 1e-12);
    }

    #[test]
    fn cutoff_rejects_bad_widths_and_grids() {
        assert!(build_cutoff(0.0, &VerticalGrid::strip(8).unwrap()).is_err());
        assert!(build_cutoff(0.1, &VerticalGrid::half_line(2.0, 8).unwrap()).is_err());
        let c = build_cutoff(0.1, &VerticalGrid::strip(10).unwrap()).unwrap();
        // η ≡ 1 below 1/2 − δ and ≡ 0 above 1/2 + δ.
        assert_eq!(c.eta[..4], [1.0; 4]);
        assert_eq!(c.eta[7..], [0.0; 4]);
        assert!(CutoffProfile::from_samples(vec![1.0], vec![], vec![]).is_err());
    }

    #[test]
    fn matching_grid_keeps_the_spacing() {
        let s = VerticalGrid::strip(32).unwrap();
        let g = matching_halfspace_grid(&s, 5.0).unwrap();
        assert!((g.spacing() - s.spacing()).abs() < 1e-15);
        assert_eq!(g.panels(), 160);
        assert_eq!(matching_halfspace_grid(&s, 0.3).unwrap().panels(), 32);
    }

    #[test]
    fn single_mode_momentum_defect_is_second_order() {
        let d: Vec<StripDefects> = [32, 64, 128].into_iter().map(single_mode_defects).collect();
        for w in d.windows(2) {
            assert!(w[0].momentum / w[1].momentum > 3.0, "{d:?}");
        }
        assert!(d
            .iter()
            .all(|x| x.wall_velocity == 0.0 && x.divergence < 1e-10));
    }

    /// Defects for `sin²(πz)(1 − e^{−t/0.2})` in both components of one mode.
    fn single_mode_defects(nz: usize) -> StripDefects {
        let band = BandSpec::new(std::f64::consts::TAU, 2, 0.5).unwrap();
        let layout = FieldLayout::new(
            WavenumberLattice::build(band, 0).unwrap(),
            VerticalGrid::strip(nz).unwrap(),
            TimeGrid::new(1.0, nz / 2).unwrap(),
        );
        let lat = layout.lattice.clone();
        let m = lat.position([2, 0]).unwrap();
        let mut f = SpectralField::zeros(&layout, Component::Full);
        let z = layout.vgrid.nodes().to_vec();
        for (j, &zz) in z.iter().enumerate() {
            for n in 0..layout.tgrid.len() {
                let ramp = 1.0 - (-layout.tgrid.node(n) / 0.2).exp();
                let v = Complex64::new((std::f64::consts::PI * zz).sin().powi(2) * ramp, 0.0);
                for c in 0..2 {
                    f.values_mut()[[c, m, j, n]] = v;
                    f.values_mut()[[c, lat.partner(m), j, n]] = v.conj();
                }
            }
        }
        solve_strip(&f).unwrap().defects
    }
}
