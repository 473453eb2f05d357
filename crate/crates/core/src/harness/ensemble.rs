//! Seeded random band-limited forcings.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::spectral::{Component, FieldLayout, SpectralField};

/// Recipe for one ensemble of forcings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnsembleSpec {
    pub samples: usize,
    /// Number of ± mode pairs per sample.
    pub n_modes: usize,
    pub seed: u64,
    /// Log-uniform amplitude range.
    pub amplitude: [f64; 2],
    /// Range of bump centres (bumps always stay inside `(0, 1)`).
    pub center: [f64; 2],
    /// Smallest bump half-width.
    pub min_width: f64,
    /// Log-uniform range of the ramp time τ in `1 − e^{−t/τ}`.
    pub ramp: [f64; 2],
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        EnsembleSpec {
            samples: 50,
            n_modes: 5,
            seed: 1,
            amplitude: [0.1, 10.0],
            center: [0.25, 0.75],
            min_width: 0.1,
            ramp: [0.05, 0.5],
        }
    }
}

/// Independent stream for `(seed, stream, index)`.
pub fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
    rng
}

/// Compactly supported bump `(1 − ((z − c)/w)²)⁴` on `|z − c| < w`.
pub fn bump(z: f64, center: f64, width: f64) -> f64 {
    let s = (z - center) / width;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - s * s).powi(4)
    }
}

/// One real, band-limited full-vector forcing drawn from `spec`.
pub fn generate_forcing(
    layout: &FieldLayout,
    spec: &EnsembleSpec,
    rng: &mut ChaCha8Rng,
) -> SpectralField {
    let lat = &layout.lattice;
    let mut field = SpectralField::zeros(layout, Component::Full);
    let mut reps = lat.representatives();
    reps.shuffle(rng);
    reps.truncate(spec.n_modes);
    reps.sort_unstable();
    let z = layout.vgrid.nodes().to_vec();
    let t = layout.tgrid.nodes();
    let (la, lb) = (spec.amplitude[0].ln(), spec.amplitude[1].ln());
    let (ra, rb) = (spec.ramp[0].ln(), spec.ramp[1].ln());
    for &m in &reps {
        let partner = lat.partner(m);
        for c in 0..field.n_components() {
            let mag = rng.gen_range(la..=lb).exp();
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let amp = Complex64::from_polar(mag, phase);
            let center = rng.gen_range(spec.center[0]..=spec.center[1]);
            let wmax = 0.95 * center.min(1.0 - center);
            let width = rng.gen_range(spec.min_width.min(wmax)..=wmax);
            let tau = rng.gen_range(ra..=rb).exp();
            let zp: Vec<f64> = z.iter().map(|&zz| bump(zz, center, width)).collect();
            let tp: Vec<f64> = t.iter().map(|&tt| 1.0 - (-tt / tau).exp()).collect();
            for (j, zv) in zp.iter().enumerate() {
                for (n, tv) in tp.iter().enumerate() {
                    let v = amp * (zv * tv);
                    field.values_mut()[[c, m, j, n]] = v;
                    field.values_mut()[[c, partner, j, n]] = v.conj();
                }
            }
        }
    }
    field
}
