//! Real trigonometric polynomials on one horizontal slice, and their
//! horizontal averages `⟨|·|⟩'`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// One Fourier term: lattice index and a coefficient per component.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub index: [i64; 2],
    pub coeff: Vec<Complex64>,
}

/// Real (possibly vector-valued) trigonometric polynomial on `[0, L)^{hdim}`.
///
/// Terms are stored for both `k'` and `−k'` with conjugate coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicePoly {
    pub length: f64,
    pub hdim: usize,
    pub components: usize,
    pub terms: Vec<Term>,
}

impl SlicePoly {
    pub fn fundamental(&self) -> f64 {
        TAU / self.length
    }

    pub fn wavevector(&self, index: [i64; 2]) -> [f64; 2] {
        let q = self.fundamental();
        [q * index[0] as f64, q * index[1] as f64]
    }

    pub fn max_index(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.index[0].abs().max(t.index[1].abs()))
            .max()
            .unwrap_or(0)
    }

    /// Largest and smallest `|k'|` present.
    pub fn spectrum_range(&self) -> (f64, f64) {
        let abs: Vec<f64> = self
            .terms
            .iter()
            .map(|t| norm(self.wavevector(t.index)))
            .collect();
        let lo = abs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = abs.iter().copied().fold(0.0, f64::max);
        (lo, hi)
    }

    /// Apply a Fourier multiplier term by term.
    pub fn map<F>(&self, components: usize, symbol: F) -> SlicePoly
    where
        F: Fn([f64; 2], &[Complex64]) -> Vec<Complex64>,
    {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                index: t.index,
                coeff: symbol(self.wavevector(t.index), &t.coeff),
            })
            .collect();
        SlicePoly {
            length: self.length,
            hdim: self.hdim,
            components,
            terms,
        }
    }

    /// `∇'r` of a scalar.
    pub fn gradient(&self) -> SlicePoly {
        let hd = self.hdim;
        self.map(hd, |k, c| {
            (0..hd).map(|j| Complex64::new(0.0, k[j]) * c[0]).collect()
        })
    }

    /// `(−Δ')^{s/2}` componentwise; the zero mode maps to zero.
    pub fn fractional(&self, s: f64) -> SlicePoly {
        self.map(self.components, |k, c| {
            let a = norm(k);
            let m = if a == 0.0 { 0.0 } else { a.powf(s) };
            c.iter().map(|v| v * m).collect()
        })
    }

    /// `∇'·r` of a vector.
    pub fn divergence(&self) -> SlicePoly {
        let hd = self.hdim;
        self.map(1, |k, c| {
            vec![(0..hd).map(|j| Complex64::new(0.0, k[j]) * c[j]).sum()]
        })
    }

    /// Values of every component at `x`.
    pub fn evaluate(&self, x: [f64; 2]) -> Vec<f64> {
        let mut out = vec![0.0; self.components];
        for t in &self.terms {
            let k = self.wavevector(t.index);
            let e = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1]);
            for (o, c) in out.iter_mut().zip(&t.coeff) {
                *o += (c * e).re;
            }
        }
        out
    }

    /// `⟨|r|⟩'`, the horizontal average of the Euclidean magnitude.
    ///
    /// Scalars on a one-dimensional torus are integrated exactly between
    /// located sign changes; everything else uses the periodic trapezoid rule.
    pub fn mean_abs(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        if self.hdim == 1 && self.components == 1 {
            return self.mean_abs_exact();
        }
        let n = self.max_index().max(1) as usize;
        let points = if self.hdim == 1 {
            64 * (2 * n + 1)
        } else {
            (64 * (2 * n + 1)).min(512)
        };
        let h = self.length / points as f64;
        let mut total = 0.0;
        let cols = if self.hdim == 1 { 1 } else { points };
        for i in 0..points {
            for j in 0..cols {
                let v = self.evaluate([h * i as f64, h * j as f64]);
                total += v.iter().map(|x| x * x).sum::<f64>().sqrt();
            }
        }
        total / (points * cols) as f64
    }

    fn mean_abs_exact(&self) -> f64 {
        let value = |x: f64| self.evaluate([x, 0.0])[0];
        let c0: f64 = self
            .terms
            .iter()
            .filter(|t| t.index[0] == 0)
            .map(|t| t.coeff[0].re)
            .sum();
        let primitive = |x: f64| {
            let mut f = c0 * x;
            for t in self.terms.iter().filter(|t| t.index[0] != 0) {
                let k = self.wavevector(t.index)[0];
                f += (t.coeff[0] * Complex64::from_polar(1.0, k * x) / Complex64::new(0.0, k)).re;
            }
            f
        };
        let l = self.length;
        let n = self.max_index().max(1) as usize;
        let points = 64 * (2 * n + 1);
        let h = l / points as f64;
        let samples: Vec<f64> = (0..=points).map(|i| value(h * i as f64)).collect();
        let mut roots = Vec::new();
        for i in 0..points {
            let (fa, fb) = (samples[i], samples[i + 1]);
            if (fa >= 0.0) != (fb >= 0.0) {
                let (mut lo, mut hi) = (h * i as f64, h * (i + 1) as f64);
                let up = fa < 0.0;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (value(mid) >= 0.0) == up {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        if roots.is_empty() {
            return (primitive(l) - primitive(0.0)).abs() / l;
        }
        let mut total = 0.0;
        for w in roots.windows(2) {
            total += (primitive(w[1]) - primitive(w[0])).abs();
        }
        let (first, last) = (roots[0], *roots.last().unwrap());
        total += (primitive(first + l) - primitive(last)).abs();
        total / l
    }
}

fn norm(k: [f64; 2]) -> f64 {
    k[0].hypot(k[1])
}

/// Spectral support `lo ≤ R|k'| ≤ hi` used to draw conforming slices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn contains(&self, bandwidth: f64, kabs: f64) -> bool {
        let s = bandwidth * kabs;
        s >= self.lo * (1.0 - 1e-12) && s <= self.hi * (1.0 + 1e-12)
    }

    /// Representatives (one of each ± pair, plus the zero mode when allowed).
    pub fn indices(&self, length: f64, hdim: usize, bandwidth: f64) -> Vec<[i64; 2]> {
        let q = TAU / length;
        let m = (self.hi * (1.0 + 1e-12) / (bandwidth * q)).floor() as i64;
        let mut out = Vec::new();
        let second: Vec<i64> = if hdim == 2 {
            (-m..=m).collect()
        } else {
            vec![0]
        };
        for i in -m..=m {
            for &j in &second {
                if [i, j] < [0, 0] {
                    continue;
                }
                let kabs = q * (i as f64).hypot(j as f64);
                if self.contains(bandwidth, kabs) {
                    out.push([i, j]);
                }
            }
        }
        out
    }
}

/// Random real slice with 1 to `max_modes` pairs drawn from `support`;
/// log-uniform magnitudes in `[0.1, 10]`, uniform phases.
pub fn random_slice(
    length: f64,
    hdim: usize,
    components: usize,
    bandwidth: f64,
    support: Support,
    max_modes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SlicePoly> {
    let mut reps = support.indices(length, hdim, bandwidth);
    if reps.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no lattice modes with {} ≤ R|k'| ≤ {} at R = {bandwidth}",
            support.lo, support.hi
        )));
    }
    reps.shuffle(rng);
    let count = rng.gen_range(1..=max_modes.max(1)).min(reps.len());
    let mut terms = Vec::new();
    for &ix in &reps[..count] {
        let coeff: Vec<Complex64> = (0..components)
            .map(|_| {
                let mag = rng.gen_range(0.1f64.ln()..=10f64.ln()).exp();
                Complex64::from_polar(mag, rng.gen_range(0.0..TAU))
            })
            .collect();
        if ix == [0, 0] {
            terms.push(Term {
                index: ix,
                coeff: coeff.iter().map(|c| Complex64::new(c.re, 0.0)).collect(),
            });
        } else {
            terms.push(Term {
                index: [-ix[0], -ix[1]],
                coeff: coeff.iter().map(|c| c.conj()).collect(),
            });
            terms.push(Term { index: ix, coeff });
        }
    }
    Ok(SlicePoly {
        length,
        hdim,
        components,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cosine(n: i64, amp: f64) -> SlicePoly {
        let c = Complex64::new(amp / 2.0, 0.0);
        SlicePoly {
            length: TAU,
            hdim: 1,
            components: 1,
            terms: vec![
                Term {
                    index: [-n, 0],
                    coeff: vec![c],
                },
                Term {
                    index: [n, 0],
                    coeff: vec![c],
                },
            ],
        }
    }

    #[test]
    fn exact_average_of_cosine() {
        // ⟨|A cos nx|⟩ = 2A/π.
        for n in 1..4 {
            let m = cosine(n, 3.0).mean_abs();
            assert!((m - 6.0 / PI).abs() < 1e-13, "{m}");
        }
    }

    #[test]
    fn exact_average_with_offset() {
        // |c + cos x| for c > 1 has no zeros: the mean is c.
        let mut p = cosine(1, 1.0);
        p.terms.push(Term {
            index: [0, 0],
            coeff: vec![Complex64::new(1.5, 0.0)],
        });
        assert!((p.mean_abs() - 1.5).abs() < 1e-14);
        // c = 1/2 crosses zero twice per period; compare with quadrature split at the zeros.
        let mut q = cosine(1, 1.0);
        q.terms.push(Term {
            index: [0, 0],
            coeff: vec![Complex64::new(0.5, 0.0)],
        });
        let oracle = crate::quadrature::integrate_pieces(
            |x: f64| (0.5 + x.cos()).abs(),
            &[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0, TAU],
            1e-14,
        ) / TAU;
        assert!((q.mean_abs() - oracle).abs() < 1e-12);
    }

    #[test]
    fn gradient_of_single_mode_scales_by_k() {
        let p = cosine(3, 1.0);
        let g = p.gradient();
        assert!((g.mean_abs() - 3.0 * p.mean_abs()).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_average_matches_trapezoid() {
        let c = Complex64::new(0.5, 0.0);
        let p = SlicePoly {
            length: TAU,
            hdim: 2,
            components: 1,
            terms: vec![
                Term {
                    index: [-1, 0],
                    coeff: vec![c],
                },
                Term {
                    index: [0, -1],
                    coeff: vec![c],
                },
                Term {
                    index: [0, 1],
                    coeff: vec![c],
                },
                Term {
                    index: [1, 0],
                    coeff: vec![c],
                },
            ],
        };
        // ⟨|cos x + cos y|⟩ = 8/π²; the zero lines cost O(h²) on the grid.
        assert!((p.mean_abs() - 8.0 / (PI * PI)).abs() < 1e-4);
    }

    #[test]
    fn random_slices_conform() {
        let mut rng = crate::harness::ensemble::sample_rng(1, 5, 0);
        let sup = Support { lo: 1.0, hi: 4.0 };
        for _ in 0..20 {
            let p = random_slice(TAU, 1, 1, 0.5, sup, 5, &mut rng).unwrap();
            let (lo, hi) = p.spectrum_range();
            assert!(0.5 * lo >= 1.0 - 1e-12 && 0.5 * hi <= 4.0 + 1e-12);
            // Real-valued: the imaginary part of the full sum vanishes.
            let x = 0.37;
            let im: f64 = p
                .terms
                .iter()
                .map(|t| (t.coeff[0] * Complex64::from_polar(1.0, t.index[0] as f64 * x)).im)
                .sum();
            assert!(im.abs() < 1e-12);
        }
    }
}
