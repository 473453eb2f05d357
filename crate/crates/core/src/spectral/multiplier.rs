use ndarray::s;
use num_complex::Complex64;

use crate::spectral::field::{Component, SpectralField};
use crate::{Error, Result};

/// Horizontal Fourier multipliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    /// ∇': scalar → horizontal vector, symbol `i k'`.
    Gradient,
    /// ∇'·: horizontal vector → scalar, symbol `i k'ᵀ`.
    Divergence,
    /// (−Δ')^s, symbol `|k'|^{2s}`, acts componentwise.
    FracLaplacian(f64),
    /// `I − k'k'ᵀ/|k'|²` on horizontal vectors.
    LerayProjector,
}

impl Multiplier {
    fn singular_at_zero(self) -> bool {
        match self {
            Multiplier::FracLaplacian(s) => s < 0.0,
            Multiplier::LerayProjector => true,
            _ => false,
        }
    }
}

/// Zero every non-admissible mode.
pub fn band_project(field: &SpectralField) -> SpectralField {
    let mut out = field.clone();
    let lat = field.layout().lattice.clone();
    for m in 0..lat.len() {
        if !lat.mode(m).admissible {
            out.values_mut()
                .slice_mut(s![.., m, .., ..])
                .fill(Complex64::new(0.0, 0.0));
        }
    }
    out
}

pub fn apply_multiplier(field: &SpectralField, symbol: Multiplier) -> Result<SpectralField> {
    let layout = field.layout().clone();
    let lat = layout.lattice.clone();
    let hd = lat.band().horizontal_dims();
    if symbol.singular_at_zero() {
        for m in 0..lat.len() {
            if lat.mode(m).is_zero() && !field.mode_is_zero(m) {
                return Err(Error::SingularMultiplier);
            }
        }
    }
    let i = Complex64::new(0.0, 1.0);
    match symbol {
        Multiplier::Gradient => {
            if field.component() != Component::Scalar {
                return Err(Error::Incompatible(
                    "gradient expects a scalar field".into(),
                ));
            }
            let mut out = SpectralField::zeros(&layout, Component::Horizontal);
            for m in 0..lat.len() {
                let k = lat.mode(m).k;
                let src = field.profile(0, m).to_owned();
                for c in 0..hd {
                    let mut dst = out.profile_mut(c, m);
                    dst.assign(&src);
                    dst.mapv_inplace(|v| v * i * k[c]);
                }
            }
            Ok(out)
        }
        Multiplier::Divergence => {
            if field.component() != Component::Horizontal {
                return Err(Error::Incompatible(
                    "divergence expects a horizontal vector".into(),
                ));
            }
            let mut out = SpectralField::zeros(&layout, Component::Scalar);
            for m in 0..lat.len() {
                let k = lat.mode(m).k;
                for c in 0..hd {
                    let src = field.profile(c, m).to_owned();
                    out.profile_mut(0, m)
                        .zip_mut_with(&src, |d, v| *d += i * k[c] * v);
                }
            }
            Ok(out)
        }
        Multiplier::FracLaplacian(power) => {
            let mut out = field.clone();
            for m in 0..lat.len() {
                let a = lat.mode(m).abs;
                let factor = if a == 0.0 {
                    if power == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    a.powf(2.0 * power)
                };
                out.values_mut()
                    .slice_mut(s![.., m, .., ..])
                    .mapv_inplace(|v| v * factor);
            }
            Ok(out)
        }
        Multiplier::LerayProjector => {
            if field.component() != Component::Horizontal {
                return Err(Error::Incompatible(
                    "projector expects a horizontal vector".into(),
                ));
            }
            let mut out = field.clone();
            for m in 0..lat.len() {
                let mode = lat.mode(m);
                if mode.is_zero() {
                    continue;
                }
                let a2 = mode.abs * mode.abs;
                let mut kdot = field.profile(0, m).mapv(|v| v * mode.k[0]);
                for c in 1..hd {
                    kdot.zip_mut_with(&field.profile(c, m), |d, v| *d += v * mode.k[c]);
                }
                for c in 0..hd {
                    let kc = mode.k[c] / a2;
                    out.profile_mut(c, m)
                        .zip_mut_with(&kdot, |d, q| *d -= q * kc);
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::band::{BandSpec, WavenumberLattice};
    use crate::spectral::grid::{FieldLayout, TimeGrid, VerticalGrid};
    use std::f64::consts::PI;

    fn layout(dim: usize, halo: usize) -> FieldLayout {
        let band = BandSpec::new(2.0 * PI, dim, 1.0).unwrap();
        FieldLayout::new(
            WavenumberLattice::build(band, halo).unwrap(),
            VerticalGrid::strip(4).unwrap(),
            TimeGrid::new(1.0, 2).unwrap(),
        )
    }

    #[test]
    fn half_power_doubles_mode_two() {
        let l = layout(2, 0);
        let m = l.lattice.position([2, 0]).unwrap();
        let mut f = SpectralField::zeros(&l, Component::Scalar);
        f.profile_mut(0, m).fill(Complex64::new(1.0, -1.0));
        let g = apply_multiplier(&f, Multiplier::FracLaplacian(0.5)).unwrap();
        assert_eq!(g.profile(0, m)[[1, 1]], Complex64::new(2.0, -2.0));
    }

    #[test]
    fn zero_mode_content() {
        let l = layout(2, 1);
        let z = l.lattice.position([0, 0]).unwrap();
        let mut f = SpectralField::zeros(&l, Component::Scalar);
        f.profile_mut(0, z).fill(Complex64::new(1.0, 0.0));
        assert!(band_project(&f).is_zero());
        assert_eq!(
            apply_multiplier(&f, Multiplier::FracLaplacian(-0.5)).unwrap_err(),
            Error::SingularMultiplier
        );
        assert!(apply_multiplier(&f, Multiplier::FracLaplacian(0.5)).is_ok());
    }

    #[test]
    fn projector_removes_longitudinal_part() {
        let l = layout(3, 0);
        let mut f = SpectralField::zeros(&l, Component::Horizontal);
        for (n, v) in f.values_mut().iter_mut().enumerate() {
            *v = Complex64::new((n % 7) as f64 - 3.0, (n % 5) as f64);
        }
        let p = apply_multiplier(&f, Multiplier::LerayProjector).unwrap();
        let pp = apply_multiplier(&p, Multiplier::LerayProjector).unwrap();
        let div = apply_multiplier(&p, Multiplier::Divergence).unwrap();
        let scale = f.values().iter().fold(0.0f64, |a, v| a.max(v.norm()));
        for (a, b) in p.values().iter().zip(pp.values().iter()) {
            assert!((a - b).norm() <= 1e-13 * scale);
        }
        assert!(div.values().iter().all(|v| v.norm() <= 1e-12 * scale));
    }
}
