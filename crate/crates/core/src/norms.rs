//! Horizontal and time averages, boundary-weighted L¹ norms and the
//! interpolation norms `‖·‖(0,1)`, `‖·‖(0,∞)`, `‖·‖(−∞,1)`.
//!
//! A fiber is one `(x', t)` sample of a field as a function of z. Vertical
//! integrals use panel values (the mean of the two end-node magnitudes)
//! against the exact integral of the weight over each panel; a panel that
//! touches a singular endpoint carries infinite weight.

use ndarray::{Array2, Array4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::halfspace::FlowState;
use crate::quadrature::golden_section_min;
use crate::spectral::stencil::{dt, dz, dzz};
use crate::spectral::{
    Component, FieldLayout, HorizontalSampler, SpectralField, TimeGrid, VerticalGrid,
};
use crate::{Error, Result};

/// Which boundary weight defines the L¹ side of the interpolation pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// `(0, 1)` with `w = 1/(z(1 − z))`.
    Strip,
    /// `(0, ∞)` with `w = 1/z`.
    Upper,
    /// `(−∞, 1)` with `w = 1/(1 − z)`.
    Lower,
}

impl NormKind {
    pub fn label(self) -> &'static str {
        match self {
            NormKind::Strip => "(0,1)",
            NormKind::Upper => "(0,inf)",
            NormKind::Lower => "(-inf,1)",
        }
    }

    pub fn weight(self, z: f64) -> f64 {
        match self {
            NormKind::Strip => 1.0 / (z * (1.0 - z)),
            NormKind::Upper => 1.0 / z,
            NormKind::Lower => 1.0 / (1.0 - z),
        }
    }

    /// `∫_a^b w dz`, infinite when the panel touches a singular endpoint.
    pub fn panel_integral(self, a: f64, b: f64) -> Result<f64> {
        let outside = match self {
            NormKind::Strip => a < 0.0 || b > 1.0,
            NormKind::Upper => a < 0.0,
            NormKind::Lower => b > 1.0,
        };
        if outside || !(b > a) {
            return Err(Error::InvalidGrid(format!(
                "panel [{a}, {b}] is outside the {} interval",
                self.label()
            )));
        }
        let left = matches!(self, NormKind::Strip | NormKind::Upper) && a == 0.0;
        let right = matches!(self, NormKind::Strip | NormKind::Lower) && b == 1.0;
        if left || right {
            return Ok(f64::INFINITY);
        }
        Ok(match self {
            NormKind::Strip => (b / a).ln() + ((1.0 - a) / (1.0 - b)).ln(),
            NormKind::Upper => (b / a).ln(),
            NormKind::Lower => ((1.0 - a) / (1.0 - b)).ln(),
        })
    }

    /// Exact weight integrals over the panels of `grid`.
    pub fn panel_weights(self, grid: &VerticalGrid) -> Result<Vec<f64>> {
        grid.nodes()
            .windows(2)
            .map(|p| self.panel_integral(p[0], p[1]))
            .collect()
    }
}

/// Panel values from node magnitudes.
pub fn panel_values(nodes: &[f64]) -> Vec<f64> {
    nodes.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// `Σ_p w_p v_p` with `∞ · 0 = 0`.
pub fn weighted_sum(values: &[f64], weights: &[f64]) -> f64 {
    values
        .iter()
        .zip(weights)
        .filter(|(v, _)| **v != 0.0)
        .map(|(v, w)| v * w)
        .sum()
}

/// Minimum of `J(λ) = λ + Σ w_p (v_p − λ)₊` and its minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberK {
    pub value: f64,
    pub lambda: f64,
}

/// `J(λ)` for one fiber of panel values.
pub fn fiber_objective(values: &[f64], weights: &[f64], lambda: f64) -> f64 {
    let excess: Vec<f64> = values.iter().map(|v| (v - lambda).max(0.0)).collect();
    lambda + weighted_sum(&excess, weights)
}

/// Exact minimum of the piecewise-linear convex `J` over its breakpoints
/// (the panel values), 0, and the floor set by infinite-weight panels.
pub fn fiber_k_functional(values: &[f64], weights: &[f64]) -> FiberK {
    let floor = values
        .iter()
        .zip(weights)
        .filter(|(_, w)| w.is_infinite())
        .fold(0.0_f64, |acc, (v, _)| acc.max(*v));
    let mut finite: Vec<(f64, f64)> = values
        .iter()
        .zip(weights)
        .filter(|(v, w)| w.is_finite() && **v > floor)
        .map(|(v, w)| (*v, *w))
        .collect();
    finite.sort_by(|a, b| b.0.total_cmp(&a.0));
    // At λ = v_i: J = λ + Σ_{j<i} w_j v_j − λ Σ_{j<i} w_j (ties contribute zero).
    let mut best = FiberK {
        value: f64::INFINITY,
        lambda: floor,
    };
    let mut sw = 0.0;
    let mut swv = 0.0;
    for &(v, w) in &finite {
        let j = v + swv - v * sw;
        if j < best.value {
            best = FiberK {
                value: j,
                lambda: v,
            };
        }
        sw += w;
        swv += w * v;
    }
    let at_floor = floor + swv - floor * sw;
    if at_floor <= best.value {
        best = FiberK {
            value: at_floor,
            lambda: floor,
        };
    }
    best
}

/// `(1/t₀) ∫₀^{t₀} v dt` by the trapezoid rule.
pub fn time_average(values: &[f64], tgrid: &TimeGrid) -> f64 {
    let w = tgrid.weights();
    values.iter().zip(&w).map(|(v, w)| v * w).sum::<f64>() / tgrid.horizon()
}

/// Running averages `(1/t) ∫₀^t v` at the grid nodes nearest each checkpoint.
pub fn running_average(values: &[f64], tgrid: &TimeGrid, checkpoints: &[f64]) -> Vec<(f64, f64)> {
    let dt = tgrid.dt();
    let mut cumulative = vec![0.0; values.len()];
    for n in 1..values.len() {
        cumulative[n] = cumulative[n - 1] + 0.5 * dt * (values[n - 1] + values[n]);
    }
    checkpoints
        .iter()
        .filter_map(|&t| {
            let n = (t / dt).round() as usize;
            if n == 0 || n >= values.len() {
                return None;
            }
            let tn = tgrid.node(n);
            Some((tn, cumulative[n] / tn))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    /// Fiberwise unconstrained K-functional: a lower bound.
    Lower,
    /// A feasible band-limited decomposition: an upper bound.
    BandedUpper,
}

impl NormMode {
    pub fn label(self) -> &'static str {
        match self {
            NormMode::Lower => "lower",
            NormMode::BandedUpper => "upper",
        }
    }
}

/// A band-limited decomposition `f = f0 + f1` and its objective
/// `⟨sup_z |f0|⟩ + ⟨∫ |f1| w dz⟩`.
#[derive(Debug, Clone)]
pub struct KDecomposition {
    pub f0: SpectralField,
    pub f1: SpectralField,
    pub objective: f64,
    pub constrained: bool,
}

#[derive(Debug, Clone)]
pub struct NormValue {
    /// The requested bound.
    pub value: f64,
    /// The unconstrained lower bound (always computed).
    pub lower: f64,
    pub witness: Option<KDecomposition>,
}

impl NormValue {
    /// `upper / lower`, 1 for the lower mode, NaN when both vanish.
    pub fn gap(&self) -> f64 {
        if self.lower == 0.0 {
            if self.value == 0.0 {
                f64::NAN
            } else {
                f64::INFINITY
            }
        } else {
            self.value / self.lower
        }
    }
}

/// Physical samples of every component, indexed `[(z·nt + t)·P + x]`.
struct Physical {
    comps: Vec<Vec<Complex64>>,
}

/// Evaluates norms of fields on one layout.
#[derive(Debug, Clone)]
pub struct NormEvaluator {
    kind: NormKind,
    layout: FieldLayout,
    sampler: HorizontalSampler,
    slots: Vec<usize>,
    weights: Vec<f64>,
    /// Nodes bounding an infinite-weight panel.
    singular_nodes: Vec<bool>,
    /// Golden-section iterations of the banded upper bound.
    pub iterations: usize,
}

impl NormEvaluator {
    /// Sampling at the smallest even count resolving the lattice.
    pub fn new(layout: &FieldLayout, kind: NormKind) -> Result<Self> {
        let points = 2 * layout.lattice.max_index() as usize + 2;
        Self::with_points(layout, kind, points)
    }

    pub fn with_points(layout: &FieldLayout, kind: NormKind, points: usize) -> Result<Self> {
        let sampler = HorizontalSampler::for_lattice(&layout.lattice, points)?;
        let slots = sampler.slots(&layout.lattice)?;
        let weights = kind.panel_weights(&layout.vgrid)?;
        let mut singular_nodes = vec![false; layout.vgrid.len()];
        for (p, w) in weights.iter().enumerate() {
            if w.is_infinite() {
                singular_nodes[p] = true;
                singular_nodes[p + 1] = true;
            }
        }
        Ok(NormEvaluator {
            kind,
            layout: layout.clone(),
            sampler,
            slots,
            weights,
            singular_nodes,
            iterations: 20,
        })
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn layout(&self) -> &FieldLayout {
        &self.layout
    }

    pub fn panel_weights(&self) -> &[f64] {
        &self.weights
    }

    fn dims(&self) -> (usize, usize, usize) {
        (
            self.layout.vgrid.len(),
            self.layout.tgrid.len(),
            self.sampler.slice_len(),
        )
    }

    fn to_physical(&self, f: &SpectralField) -> Physical {
        let (nz, nt, np) = self.dims();
        let v = f.values();
        let comps = (0..f.n_components())
            .map(|c| {
                let mut data = vec![Complex64::new(0.0, 0.0); nz * nt * np];
                for (m, &slot) in self.slots.iter().enumerate() {
                    for z in 0..nz {
                        for t in 0..nt {
                            data[(z * nt + t) * np + slot] = v[[c, m, z, t]];
                        }
                    }
                }
                self.sampler.synthesize(&mut data);
                data
            })
            .collect();
        Physical { comps }
    }

    fn to_coefficients(&self, phys: &Physical, component: Component) -> Result<SpectralField> {
        let (nz, nt, np) = self.dims();
        let mut values = Array4::zeros((phys.comps.len(), self.layout.lattice.len(), nz, nt));
        for (c, data) in phys.comps.iter().enumerate() {
            let mut data = data.clone();
            self.sampler.analyze(&mut data);
            for (m, &slot) in self.slots.iter().enumerate() {
                for z in 0..nz {
                    for t in 0..nt {
                        values[[c, m, z, t]] = data[(z * nt + t) * np + slot];
                    }
                }
            }
        }
        SpectralField::from_values(&self.layout, component, values)
    }

    fn magnitude(&self, phys: &Physical) -> Vec<f64> {
        let len = phys.comps.first().map_or(0, |c| c.len());
        (0..len)
            .map(|i| {
                phys.comps
                    .iter()
                    .map(|c| c[i].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        self.layout.check_same(f.layout())?;
        f.require_band_limited()
    }

    /// `⟨|f|⟩'(z, t)`: mean of the pointwise magnitude over the horizontal samples.
    pub fn horizontal_average(&self, f: &SpectralField) -> Result<Array2<f64>> {
        self.layout.check_same(f.layout())?;
        let (nz, nt, np) = self.dims();
        let mag = self.magnitude(&self.to_physical(f));
        Ok(Array2::from_shape_fn((nz, nt), |(z, t)| {
            mag[(z * nt + t) * np..(z * nt + t + 1) * np]
                .iter()
                .sum::<f64>()
                / np as f64
        }))
    }

    /// Per-fiber panel values, `[t][x][panel]`.
    fn fibers(&self, mag: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let (nz, nt, np) = self.dims();
        (0..nt)
            .map(|t| {
                (0..np)
                    .map(|x| {
                        let nodes: Vec<f64> = (0..nz).map(|z| mag[(z * nt + t) * np + x]).collect();
                        panel_values(&nodes)
                    })
                    .collect()
            })
            .collect()
    }

    fn average(&self, per_fiber: impl Fn(usize, usize) -> f64) -> f64 {
        let (_, nt, np) = self.dims();
        let per_t: Vec<f64> = (0..nt)
            .map(|t| (0..np).map(|x| per_fiber(t, x)).sum::<f64>() / np as f64)
            .collect();
        time_average(&per_t, &self.layout.tgrid)
    }

    /// Weighted L¹ norm `⟨∫ |f| w dz⟩`.
    pub fn weighted_l1(&self, f: &SpectralField) -> Result<f64> {
        self.layout.check_same(f.layout())?;
        let fib = self.fibers(&self.magnitude(&self.to_physical(f)));
        Ok(self.average(|t, x| weighted_sum(&fib[t][x], &self.weights)))
    }

    /// `⟨sup_z |f|⟩`.
    pub fn sup_norm(&self, f: &SpectralField) -> Result<f64> {
        self.layout.check_same(f.layout())?;
        let fib = self.fibers(&self.magnitude(&self.to_physical(f)));
        Ok(self.average(|t, x| fib[t][x].iter().fold(0.0_f64, |a, v| a.max(*v))))
    }

    /// Interpolation norm of `f` in the requested mode.
    pub fn interpolation_norm(&self, f: &SpectralField, mode: NormMode) -> Result<NormValue> {
        self.check(f)?;
        let phys = self.to_physical(f);
        let mag = self.magnitude(&phys);
        let fib = self.fibers(&mag);
        let ks: Vec<Vec<FiberK>> = fib
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| fiber_k_functional(v, &self.weights))
                    .collect()
            })
            .collect();
        let lower = self.average(|t, x| ks[t][x].value);
        if mode == NormMode::Lower {
            return Ok(NormValue {
                value: lower,
                lower,
                witness: None,
            });
        }
        let objective = |theta: f64| -> f64 {
            let (f0, f1) = self.clamp_split(&phys, &mag, &ks, theta);
            self.split_objective(&f0, &f1)
        };
        let mut best = (f64::INFINITY, objective(f64::INFINITY));
        let zero = objective(0.0);
        if zero < best.1 {
            best = (0.0, zero);
        }
        let (theta, value) = golden_section_min(objective, 0.0, 2.0, self.iterations);
        if value < best.1 {
            best = (theta, value);
        }
        let (p0, _) = self.clamp_split(&phys, &mag, &ks, best.0);
        let mut f0 = self.to_coefficients(&p0, f.component())?;
        // Slices bounding infinite-weight panels keep f exactly.
        for (z, singular) in self.singular_nodes.iter().enumerate() {
            if *singular {
                let src = f.values().slice(ndarray::s![.., .., z, ..]).to_owned();
                f0.values_mut()
                    .slice_mut(ndarray::s![.., .., z, ..])
                    .assign(&src);
            }
        }
        let f1 = f.sub(&f0)?;
        let value = best.1;
        Ok(NormValue {
            value: value.max(lower),
            lower,
            witness: Some(KDecomposition {
                f0,
                f1,
                objective: value,
                constrained: true,
            }),
        })
    }

    /// `f0 = P_band(clamp(f, θλ*))` (f itself on singular slices), `f1 = f − f0`.
    fn clamp_split(
        &self,
        phys: &Physical,
        mag: &[f64],
        ks: &[Vec<FiberK>],
        theta: f64,
    ) -> (Physical, Physical) {
        let (nz, nt, np) = self.dims();
        let mut scale = vec![1.0; mag.len()];
        if theta.is_finite() {
            for z in 0..nz {
                if self.singular_nodes[z] {
                    continue;
                }
                for t in 0..nt {
                    for x in 0..np {
                        let i = (z * nt + t) * np + x;
                        let cap = theta * ks[t][x].lambda;
                        if mag[i] > cap {
                            scale[i] = cap / mag[i];
                        }
                    }
                }
            }
        }
        let slab = nt * np;
        let mut f0 = Vec::with_capacity(phys.comps.len());
        let mut f1 = Vec::with_capacity(phys.comps.len());
        for data in &phys.comps {
            let mut c0: Vec<Complex64> = data.iter().zip(&scale).map(|(v, s)| v * *s).collect();
            if theta.is_finite() {
                self.sampler.project_band(&mut c0);
                for z in 0..nz {
                    if self.singular_nodes[z] {
                        c0[z * slab..(z + 1) * slab]
                            .copy_from_slice(&data[z * slab..(z + 1) * slab]);
                    }
                }
            }
            let c1: Vec<Complex64> = data.iter().zip(&c0).map(|(a, b)| a - b).collect();
            f0.push(c0);
            f1.push(c1);
        }
        (Physical { comps: f0 }, Physical { comps: f1 })
    }

    fn split_objective(&self, f0: &Physical, f1: &Physical) -> f64 {
        let m0 = self.fibers(&self.magnitude(f0));
        let m1 = self.fibers(&self.magnitude(f1));
        self.average(|t, x| {
            let sup = m0[t][x].iter().fold(0.0_f64, |a, v| a.max(*v));
            sup + weighted_sum(&m1[t][x], &self.weights)
        })
    }
}

/// One entry of the left-hand side of the maximal-regularity estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEntry {
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormSuite {
    pub lhs: Vec<NormEntry>,
    /// Lower bound of the forcing norm.
    pub rhs: f64,
    /// `Σ upper / rhs`; `None` when the forcing norm vanishes.
    pub ratio: Option<f64>,
    /// Set when the forcing norm vanishes but the left side does not.
    pub anomaly: bool,
}

/// Names of the five left-hand norms, in reporting order.
pub const LHS_NORMS: [&str; 5] = [
    "dt_dzz_u_horiz",
    "grad_h_grad_u_horiz",
    "dt_u_vert",
    "hess_u_vert",
    "grad_p",
];

fn stack(
    layout: &FieldLayout,
    parts: Vec<Array2<Complex64>>,
    per_mode: usize,
    modes: usize,
) -> Result<SpectralField> {
    let (nz, nt) = (layout.vgrid.len(), layout.tgrid.len());
    let mut values = Array4::zeros((per_mode, modes, nz, nt));
    for (i, p) in parts.into_iter().enumerate() {
        let (c, m) = (i % per_mode, i / per_mode);
        values.slice_mut(ndarray::s![c, m, .., ..]).assign(&p);
    }
    SpectralField::from_values(layout, Component::Stack(per_mode), values)
}

/// The five derivative fields entering the left-hand side, by name.
pub fn lhs_fields(state: &FlowState) -> Result<Vec<(&'static str, SpectralField)>> {
    let layout = state.layout().clone();
    let lat = layout.lattice.clone();
    let hd = lat.band().horizontal_dims();
    let h = layout.vgrid.spacing();
    let step = layout.tgrid.dt();
    let i = Complex64::new(0.0, 1.0);
    let modes = lat.len();
    let mut heat = Vec::new();
    let mut grad_grad = Vec::new();
    let mut dtw = Vec::new();
    let mut hess = Vec::new();
    let mut gp = Vec::new();
    for m in 0..modes {
        let k = lat.mode(m).k;
        for c in 0..hd {
            let u = state.u_horiz.profile(c, m);
            heat.push(dt(u, step) - &dzz(u, h));
            let duz = dz(u, h);
            for a in 0..hd {
                for b in 0..hd {
                    grad_grad.push(u.mapv(|v| -v * (k[a] * k[b])));
                }
                grad_grad.push(duz.mapv(|v| v * i * k[a]));
            }
        }
        let w = state.u_vert.profile(0, m);
        dtw.push(dt(w, step));
        let dw = dz(w, h);
        for a in 0..hd {
            for b in 0..hd {
                hess.push(w.mapv(|v| -v * (k[a] * k[b])));
            }
            hess.push(dw.mapv(|v| v * i * k[a]));
            hess.push(dw.mapv(|v| v * i * k[a]));
        }
        hess.push(dzz(w, h));
        let p = state.pressure.profile(0, m);
        for a in 0..hd {
            gp.push(p.mapv(|v| v * i * k[a]));
        }
        gp.push(dz(p, h));
    }
    Ok(vec![
        (LHS_NORMS[0], stack(&layout, heat, hd, modes)?),
        (
            LHS_NORMS[1],
            stack(&layout, grad_grad, hd * hd * (hd + 1), modes)?,
        ),
        (LHS_NORMS[2], stack(&layout, dtw, 1, modes)?),
        (
            LHS_NORMS[3],
            stack(&layout, hess, (hd + 1) * (hd + 1), modes)?,
        ),
        (LHS_NORMS[4], stack(&layout, gp, hd + 1, modes)?),
    ])
}

/// Left-hand norms (banded upper bounds) of a strip solution and the
/// forcing norm (lower bound), with their ratio.
pub fn lhs_norm_suite(
    state: &FlowState,
    f: &SpectralField,
    eval: &NormEvaluator,
) -> Result<NormSuite> {
    let mut lhs = Vec::with_capacity(5);
    for (name, field) in lhs_fields(state)? {
        let v = eval.interpolation_norm(&field, NormMode::BandedUpper)?;
        lhs.push(NormEntry {
            name,
            lower: v.lower,
            upper: v.value,
        });
    }
    let rhs = eval.interpolation_norm(f, NormMode::Lower)?.value;
    let total: f64 = lhs.iter().map(|e| e.upper).sum();
    let (ratio, anomaly) = if rhs > 0.0 {
        (Some(total / rhs), false)
    } else {
        (None, total > 0.0)
    };
    Ok(NormSuite {
        lhs,
        rhs,
        ratio,
        anomaly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_integrals_match_the_antiderivatives() {
        let w = NormKind::Strip.panel_integral(0.45, 0.55).unwrap();
        assert!((w - 2.0 * (11.0f64 / 9.0).ln()).abs() < 1e-15);
        assert!(
            (NormKind::Upper
                .panel_integral(1.0, std::f64::consts::E)
                .unwrap()
                - 1.0)
                .abs()
                < 1e-15
        );
        assert!((NormKind::Lower.panel_integral(-1.0, 0.0).unwrap() - 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(
            NormKind::Strip.panel_integral(0.9, 1.0).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            NormKind::Upper.panel_integral(0.0, 0.1).unwrap(),
            f64::INFINITY
        );
        assert!(NormKind::Strip.panel_integral(0.5, 1.5).is_err());
        assert!(NormKind::Upper.panel_integral(0.3, 0.2).is_err());
    }

    #[test]
    fn weighted_sum_ignores_zero_values_on_singular_panels() {
        assert_eq!(
            weighted_sum(&[0.0, 2.0, 0.0], &[f64::INFINITY, 0.5, f64::INFINITY]),
            1.0
        );
        assert_eq!(
            weighted_sum(&[1e-300, 0.0], &[f64::INFINITY, 1.0]),
            f64::INFINITY
        );
    }

    #[test]
    fn fiber_minimum_agrees_with_a_dense_scan() {
        let values = [0.5, 3.0, 2.0, 2.5, 0.1, 1.0];
        let weights = [f64::INFINITY, 0.3, 0.2, 0.4, 0.25, f64::INFINITY];
        let k = fiber_k_functional(&values, &weights);
        // The infinite panels force λ ≥ 1.
        assert!(k.lambda >= 1.0);
        let scan = (0..=30000).map(|i| i as f64 * 1e-4).filter(|&l| l >= 1.0);
        let best = scan
            .map(|l| fiber_objective(&values, &weights, l))
            .fold(f64::INFINITY, f64::min);
        assert!(best >= k.value - 1e-12 && best - k.value < 1e-4);
    }

    #[test]
    fn norm_gap_conventions() {
        let v = NormValue {
            value: 0.0,
            lower: 0.0,
            witness: None,
        };
        assert!(v.gap().is_nan());
        let v = NormValue {
            value: 1.0,
            lower: 0.0,
            witness: None,
        };
        assert_eq!(v.gap(), f64::INFINITY);
        let v = NormValue {
            value: 3.0,
            lower: 2.0,
            witness: None,
        };
        assert_eq!(v.gap(), 1.5);
        assert_eq!(NormMode::Lower.label(), "lower");
    }
}
