use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::spectral::band::{BandSpec, WavenumberLattice};
use crate::{Error, Result};

/// Uniform physical sampling of the torus `[0, L)^{d−1}` with `points`
/// samples per direction, and the matching FFTs.
///
/// Samples and coefficients share the row-major layout `[j0·N + j1]`;
/// coefficient bin `b` stores the mode with index `b` (or `b − N` above N/2).
/// Coefficients follow `c_k = N^{−(d−1)} Σ_x f(x) e^{−ik·x}` so that
/// `f(x) = Σ_k c_k e^{ik·x}`.
#[derive(Clone)]
pub struct HorizontalSampler {
    band: BandSpec,
    points: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    band_mask: Vec<bool>,
}

impl std::fmt::Debug for HorizontalSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HorizontalSampler")
            .field("points", &self.points)
            .field("hdim", &self.band.horizontal_dims())
            .finish()
    }
}

impl HorizontalSampler {
    pub fn new(band: BandSpec, points: usize) -> Result<Self> {
        if points < 1 {
            return Err(Error::InvalidGrid("need at least one sample".into()));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(points);
        let inverse = planner.plan_fft_inverse(points);
        let hd = band.horizontal_dims();
        let total = points.pow(hd as u32);
        let q = band.fundamental();
        let band_mask = (0..total)
            .map(|b| {
                let (i0, i1) = if hd == 1 {
                    (b, 0)
                } else {
                    (b / points, b % points)
                };
                let n0 = signed_index(i0, points) as f64;
                let n1 = if hd == 1 {
                    0.0
                } else {
                    signed_index(i1, points) as f64
                };
                let kabs = q * n0.hypot(n1);
                kabs > 0.0 && band.admits(kabs)
            })
            .collect();
        Ok(HorizontalSampler {
            band,
            points,
            forward,
            inverse,
            band_mask,
        })
    }

    /// Sampler that resolves every mode of `lattice` without aliasing.
    pub fn for_lattice(lattice: &WavenumberLattice, points: usize) -> Result<Self> {
        let need = 2 * lattice.max_index() as usize + 1;
        if points < need {
            return Err(Error::Aliasing {
                points,
                index: lattice.max_index(),
            });
        }
        Self::new(*lattice.band(), points)
    }

    /// Smallest even sample count resolving the whole band, times `oversample`.
    pub fn band_resolving(band: BandSpec, oversample: usize) -> Result<Self> {
        let points = (2 * band.max_index() as usize + 2) * oversample.max(1);
        Self::new(band, points)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Samples per slice, `points^{d−1}`.
    pub fn slice_len(&self) -> usize {
        self.points.pow(self.band.horizontal_dims() as u32)
    }

    pub fn band(&self) -> &BandSpec {
        &self.band
    }

    /// Whether bin `b` holds an admissible mode.
    pub fn band_mask(&self) -> &[bool] {
        &self.band_mask
    }

    /// Bin holding lattice index `index`, or aliasing error.
    pub fn slot(&self, index: [i64; 2]) -> Result<usize> {
        let n = self.points as i64;
        let lim = (n - 1) / 2;
        for &v in &index {
            if v.abs() > lim {
                return Err(Error::Aliasing {
                    points: self.points,
                    index: v,
                });
            }
        }
        let b0 = index[0].rem_euclid(n) as usize;
        if self.band.horizontal_dims() == 1 {
            Ok(b0)
        } else {
            Ok(b0 * self.points + index[1].rem_euclid(n) as usize)
        }
    }

    /// Slot of every lattice mode.
    pub fn slots(&self, lattice: &WavenumberLattice) -> Result<Vec<usize>> {
        lattice.modes().iter().map(|m| self.slot(m.index)).collect()
    }

    fn run(&self, fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
        let n = self.points;
        let slice = self.slice_len();
        assert_eq!(
            data.len() % slice,
            0,
            "batch length must be a multiple of the slice"
        );
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(data, &mut scratch);
        if self.band.horizontal_dims() == 2 {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for chunk in data.chunks_mut(slice) {
                for j1 in 0..n {
                    for j0 in 0..n {
                        col[j0] = chunk[j0 * n + j1];
                    }
                    fft.process_with_scratch(&mut col, &mut scratch);
                    for j0 in 0..n {
                        chunk[j0 * n + j1] = col[j0];
                    }
                }
            }
        }
    }

    /// Samples → coefficients, in place, over a batch of slices.
    pub fn analyze(&self, data: &mut [Complex64]) {
        self.run(&self.forward, data);
        let scale = 1.0 / self.slice_len() as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    /// Coefficients → samples, in place, over a batch of slices.
    pub fn synthesize(&self, data: &mut [Complex64]) {
        self.run(&self.inverse, data);
    }

    /// Orthogonal projection of sampled slices onto the admissible band.
    pub fn project_band(&self, data: &mut [Complex64]) {
        self.analyze(data);
        let slice = self.slice_len();
        for chunk in data.chunks_mut(slice) {
            for (v, keep) in chunk.iter_mut().zip(&self.band_mask) {
                if !keep {
                    *v = Complex64::new(0.0, 0.0);
                }
            }
        }
        self.synthesize(data);
    }

    /// Physical coordinates of sample `j`.
    pub fn position(&self, j: usize) -> [f64; 2] {
        let h = self.band.length / self.points as f64;
        if self.band.horizontal_dims() == 1 {
            [h * j as f64, 0.0]
        } else {
            [h * (j / self.points) as f64, h * (j % self.points) as f64]
        }
    }
}

fn signed_index(b: usize, n: usize) -> i64 {
    if b <= n / 2 {
        b as i64
    } else {
        b as i64 - n as i64
    }
}

/// Forward transform of one sampled slice onto the lattice modes.
///
/// Fails with an aliasing error when the sampling cannot resolve the lattice.
pub fn samples_to_coefficients(
    lattice: &WavenumberLattice,
    points: usize,
    samples: &[Complex64],
) -> Result<Vec<Complex64>> {
    let sampler = HorizontalSampler::for_lattice(lattice, points)?;
    if samples.len() != sampler.slice_len() {
        return Err(Error::InvalidGrid(
            "sample count does not match sampling".into(),
        ));
    }
    let mut buf = samples.to_vec();
    sampler.analyze(&mut buf);
    sampler
        .slots(lattice)
        .map(|slots| slots.into_iter().map(|s| buf[s]).collect())
}

/// Inverse of [`samples_to_coefficients`].
pub fn coefficients_to_samples(
    lattice: &WavenumberLattice,
    points: usize,
    coefficients: &[Complex64],
) -> Result<Vec<Complex64>> {
    let sampler = HorizontalSampler::for_lattice(lattice, points)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); sampler.slice_len()];
    for (slot, c) in sampler.slots(lattice)?.into_iter().zip(coefficients) {
        buf[slot] = *c;
    }
    sampler.synthesize(&mut buf);
    Ok(buf)
}

/// Direct evaluation of `Σ_k c_k e^{ik·x}` at one point.
pub fn evaluate_direct(
    lattice: &WavenumberLattice,
    coefficients: &[Complex64],
    x: [f64; 2],
) -> Complex64 {
    lattice
        .modes()
        .iter()
        .zip(coefficients)
        .map(|(m, c)| c * Complex64::from_polar(1.0, m.k[0] * x[0] + m.k[1] * x[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_has_two_half_coefficients() {
        let band = BandSpec::new(3.0, 2, 3.0 / (2.0 * PI)).unwrap();
        let lat = WavenumberLattice::build(band, 0).unwrap();
        let n = 16;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new((2.0 * PI * j as f64 / n as f64).cos(), 0.0))
            .collect();
        let c = samples_to_coefficients(&lat, n, &samples).unwrap();
        for (m, v) in lat.modes().iter().zip(&c) {
            let expect = if m.index[0].abs() == 1 { 0.5 } else { 0.0 };
            assert!((v.norm() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn undersampling_reports_aliasing() {
        let band = BandSpec::new(2.0 * PI, 2, 1.0).unwrap();
        let lat = WavenumberLattice::build(band, 0).unwrap();
        let err = samples_to_coefficients(&lat, 8, &vec![Complex64::new(0.0, 0.0); 8]).unwrap_err();
        assert!(err.to_string().contains("aliasing"));
    }

    #[test]
    fn constant_lives_in_bin_zero() {
        let band = BandSpec::new(2.0 * PI, 3, 1.0).unwrap();
        let s = HorizontalSampler::new(band, 6).unwrap();
        let mut buf = vec![Complex64::new(2.5, 0.0); 36];
        s.analyze(&mut buf);
        assert!((buf[0] - Complex64::new(2.5, 0.0)).norm() < 1e-14);
        assert!(buf[1..].iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn fft_matches_direct_sum_in_two_directions() {
        let band = BandSpec::new(2.0 * PI, 3, 1.0).unwrap();
        let lat = WavenumberLattice::build(band, 0).unwrap();
        let coeffs: Vec<Complex64> = (0..lat.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let n = 11;
        let samples = coefficients_to_samples(&lat, n, &coeffs).unwrap();
        let sampler = HorizontalSampler::new(band, n).unwrap();
        for j in [0, 5, 17, 120] {
            let direct = evaluate_direct(&lat, &coeffs, sampler.position(j));
            assert!((direct - samples[j]).norm() < 1e-12);
        }
    }
}
