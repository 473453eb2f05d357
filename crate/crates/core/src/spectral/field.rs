use ndarray::{s, Array2, Array4, ArrayView2, ArrayViewMut2, Axis};
use num_complex::Complex64;

use crate::spectral::grid::FieldLayout;
use crate::{Error, Result};

/// What the component axis of a field means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Scalar,
    /// d − 1 horizontal components.
    Horizontal,
    /// d components, horizontal first, vertical last.
    Full,
    /// An arbitrary stack of `n` components (derivative tensors and such).
    Stack(usize),
}

impl Component {
    pub fn count(self, dim: usize) -> usize {
        match self {
            Component::Scalar => 1,
            Component::Horizontal => dim - 1,
            Component::Full => dim,
            Component::Stack(n) => n,
        }
    }
}

/// Complex coefficients per (component, mode, z-node, t-node).
#[derive(Debug, Clone)]
pub struct SpectralField {
    layout: FieldLayout,
    component: Component,
    values: Array4<Complex64>,
}

impl SpectralField {
    pub fn zeros(layout: &FieldLayout, component: Component) -> Self {
        let nc = component.count(layout.lattice.band().dim);
        let shape = (
            nc,
            layout.lattice.len(),
            layout.vgrid.len(),
            layout.tgrid.len(),
        );
        SpectralField {
            layout: layout.clone(),
            component,
            values: Array4::zeros(shape),
        }
    }

    pub fn from_values(
        layout: &FieldLayout,
        component: Component,
        values: Array4<Complex64>,
    ) -> Result<Self> {
        let nc = component.count(layout.lattice.band().dim);
        let shape = [
            nc,
            layout.lattice.len(),
            layout.vgrid.len(),
            layout.tgrid.len(),
        ];
        if values.shape() != shape {
            return Err(Error::Incompatible(format!(
                "values shape {:?} does not match layout {:?}",
                values.shape(),
                shape
            )));
        }
        Ok(SpectralField {
            layout: layout.clone(),
            component,
            values,
        })
    }

    /// Stack scalar fields into one field.
    pub fn stack(component: Component, parts: &[&SpectralField]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Incompatible("nothing to stack".into()))?;
        let layout = first.layout.clone();
        let mut out = SpectralField::zeros(&layout, component);
        if out.n_components() != parts.iter().map(|p| p.n_components()).sum::<usize>() {
            return Err(Error::Incompatible(
                "component count mismatch in stack".into(),
            ));
        }
        let mut c = 0;
        for p in parts {
            layout.check_same(&p.layout)?;
            for pc in 0..p.n_components() {
                out.values
                    .index_axis_mut(Axis(0), c)
                    .assign(&p.values.index_axis(Axis(0), pc));
                c += 1;
            }
        }
        Ok(out)
    }

    pub fn layout(&self) -> &FieldLayout {
        &self.layout
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn n_components(&self) -> usize {
        self.values.shape()[0]
    }

    pub fn n_modes(&self) -> usize {
        self.values.shape()[1]
    }

    pub fn values(&self) -> &Array4<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array4<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array4<Complex64> {
        self.values
    }

    /// (z, t) profile of one component at one mode.
    pub fn profile(&self, comp: usize, mode: usize) -> ArrayView2<'_, Complex64> {
        self.values.slice(s![comp, mode, .., ..])
    }

    pub fn profile_mut(&mut self, comp: usize, mode: usize) -> ArrayViewMut2<'_, Complex64> {
        self.values.slice_mut(s![comp, mode, .., ..])
    }

    pub fn set_profile(&mut self, comp: usize, mode: usize, p: &Array2<Complex64>) {
        self.profile_mut(comp, mode).assign(p);
    }

    /// One component as a scalar field.
    pub fn component_field(&self, comp: usize) -> SpectralField {
        let v = self.values.slice(s![comp..comp + 1, .., .., ..]).to_owned();
        SpectralField {
            layout: self.layout.clone(),
            component: Component::Scalar,
            values: v,
        }
    }

    /// Whether the profile of `mode` is identically zero in every component.
    pub fn mode_is_zero(&self, mode: usize) -> bool {
        self.values
            .slice(s![.., mode, .., ..])
            .iter()
            .all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn scaled(&self, alpha: Complex64) -> SpectralField {
        let mut out = self.clone();
        out.values.mapv_inplace(|v| v * alpha);
        out
    }

    fn check_compatible(&self, other: &SpectralField) -> Result<()> {
        self.layout.check_same(&other.layout)?;
        if self.values.shape() != other.values.shape() {
            return Err(Error::Incompatible("component counts differ".into()));
        }
        Ok(())
    }

    /// `self + alpha·other`.
    pub fn axpy(&self, alpha: Complex64, other: &SpectralField) -> Result<SpectralField> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.values
            .zip_mut_with(&other.values, |a, b| *a += alpha * b);
        Ok(out)
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// True when every non-admissible mode carries exactly zero.
    pub fn is_band_limited(&self) -> bool {
        let lat = &self.layout.lattice;
        (0..lat.len()).all(|m| lat.mode(m).admissible || self.mode_is_zero(m))
    }

    pub fn require_band_limited(&self) -> Result<()> {
        if self.is_band_limited() {
            Ok(())
        } else {
            Err(Error::NotBandLimited)
        }
    }

    /// Largest `|c(−k') − conj(c(k'))|` relative to the largest coefficient.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let lat = &self.layout.lattice;
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for c in 0..self.n_components() {
            for m in 0..lat.len() {
                let p = lat.partner(m);
                let a = self.profile(c, m);
                let b = self.profile(c, p);
                for (x, y) in a.iter().zip(b.iter()) {
                    worst = worst.max((x - y.conj()).norm());
                }
            }
        }
        worst / scale
    }

    /// Coefficient-space L¹ norm: Σ over components and modes of the z–t
    /// trapezoid integral of |ĉ|.
    pub fn coefficient_l1(&self) -> f64 {
        let wz = self.layout.vgrid.weights();
        let wt = self.layout.tgrid.weights();
        let mut total = 0.0;
        for c in 0..self.n_components() {
            for m in 0..self.n_modes() {
                total += profile_l1(self.profile(c, m), wz, &wt, None);
            }
        }
        total
    }

    /// As [`coefficient_l1`](Self::coefficient_l1) restricted to z nodes in `range`.
    pub fn coefficient_l1_on(&self, range: std::ops::Range<usize>) -> f64 {
        let wz = self.layout.vgrid.weights();
        let wt = self.layout.tgrid.weights();
        let mut total = 0.0;
        for c in 0..self.n_components() {
            for m in 0..self.n_modes() {
                total += profile_l1(self.profile(c, m), wz, &wt, Some(range.clone()));
            }
        }
        total
    }
}

/// Trapezoid L¹ norm of one (z, t) profile, optionally on a z-node range.
pub fn profile_l1(
    p: ArrayView2<'_, Complex64>,
    wz: &[f64],
    wt: &[f64],
    range: Option<std::ops::Range<usize>>,
) -> f64 {
    let range = range.unwrap_or(0..wz.len());
    let mut total = 0.0;
    for j in range {
        let mut row = 0.0;
        for (n, w) in wt.iter().enumerate() {
            row += w * p[[j, n]].norm();
        }
        total += wz[j] * row;
    }
    total
}
