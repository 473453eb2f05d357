use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative slack used when deciding whether `R|k'|` sits on the annulus edge.
const EDGE_SLACK: f64 = 1e-12;

/// Torus side `length`, spatial dimension `dim` and bandwidth `bandwidth` (R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub length: f64,
    pub dim: usize,
    pub bandwidth: f64,
}

impl BandSpec {
    pub fn new(length: f64, dim: usize, bandwidth: f64) -> Result<Self> {
        let band = BandSpec {
            length,
            dim,
            bandwidth,
        };
        band.validate()?;
        Ok(band)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::InvalidBand(format!(
                "L = {} must be positive",
                self.length
            )));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::InvalidBand(format!(
                "R = {} must be positive",
                self.bandwidth
            )));
        }
        if self.dim != 2 && self.dim != 3 {
            return Err(Error::InvalidBand(format!(
                "d = {} must be 2 or 3",
                self.dim
            )));
        }
        Ok(())
    }

    /// Number of horizontal directions, d − 1.
    pub fn horizontal_dims(&self) -> usize {
        self.dim - 1
    }

    /// Lattice spacing 2π/L of the horizontal wavevectors.
    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Whether `1 ≤ R|k'| ≤ 4`.
    pub fn admits(&self, kabs: f64) -> bool {
        let s = self.bandwidth * kabs;
        s >= 1.0 - EDGE_SLACK && s <= 4.0 * (1.0 + EDGE_SLACK)
    }

    /// Largest lattice index that can appear in an admissible mode.
    pub fn max_index(&self) -> i64 {
        (4.0 * (1.0 + EDGE_SLACK) / (self.bandwidth * self.fundamental())).floor() as i64
    }

    /// Same torus and dimension with a different bandwidth.
    pub fn with_bandwidth(&self, bandwidth: f64) -> Result<Self> {
        BandSpec::new(self.length, self.dim, bandwidth)
    }
}

/// One horizontal wavevector `k' = 2πn/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub index: [i64; 2],
    pub k: [f64; 2],
    pub abs: f64,
    pub admissible: bool,
}

impl Mode {
    fn new(band: &BandSpec, index: [i64; 2]) -> Mode {
        let q = band.fundamental();
        let k = [q * index[0] as f64, q * index[1] as f64];
        let abs = k[0].hypot(k[1]);
        Mode {
            index,
            k,
            abs,
            admissible: abs > 0.0 && band.admits(abs),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.index == [0, 0]
    }
}

/// Finite, negation-closed set of modes sorted lexicographically by index.
///
/// Because the set is symmetric and sorted, the partner of mode `i` under
/// `k' ↦ −k'` is mode `len − 1 − i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavenumberLattice {
    band: BandSpec,
    modes: Vec<Mode>,
}

impl WavenumberLattice {
    /// All admissible modes plus `halo` shells of neighbours (Chebyshev
    /// distance in index space).
    pub fn build(band: BandSpec, halo: usize) -> Result<Self> {
        band.validate()?;
        let m = band.max_index();
        let hd = band.horizontal_dims();
        let span = |lim: i64| -> Vec<i64> { (-lim..=lim).collect() };
        let second = if hd == 2 { span(m) } else { vec![0] };
        let mut core = Vec::new();
        for &i in &span(m) {
            for &j in &second {
                let mode = Mode::new(&band, [i, j]);
                if mode.admissible {
                    core.push(mode.index);
                }
            }
        }
        if core.is_empty() {
            return Err(Error::EmptyBand {
                length: band.length,
                bandwidth: band.bandwidth,
            });
        }
        let h = halo as i64;
        let mut indices: Vec<[i64; 2]> = if h == 0 {
            core
        } else {
            let mut all = Vec::new();
            let reach = m + h;
            let second = if hd == 2 { span(reach) } else { vec![0] };
            for &i in &span(reach) {
                for &j in &second {
                    let near = core
                        .iter()
                        .any(|c| (c[0] - i).abs() <= h && (c[1] - j).abs() <= h);
                    if near {
                        all.push([i, j]);
                    }
                }
            }
            all
        };
        indices.sort();
        let modes = indices.into_iter().map(|ix| Mode::new(&band, ix)).collect();
        Ok(WavenumberLattice { band, modes })
    }

    pub fn band(&self) -> &BandSpec {
        &self.band
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode(&self, i: usize) -> &Mode {
        &self.modes[i]
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Index of the mode `−k'`.
    pub fn partner(&self, i: usize) -> usize {
        self.modes.len() - 1 - i
    }

    pub fn position(&self, index: [i64; 2]) -> Option<usize> {
        self.modes.binary_search_by(|m| m.index.cmp(&index)).ok()
    }

    /// Largest |index| component present.
    pub fn max_index(&self) -> i64 {
        self.modes
            .iter()
            .map(|m| m.index[0].abs().max(m.index[1].abs()))
            .max()
            .unwrap_or(0)
    }

    /// Positions of the admissible modes whose partner comes later, i.e. one
    /// representative per ± pair.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.modes[i].admissible && i > self.partner(i))
            .collect()
    }
}
