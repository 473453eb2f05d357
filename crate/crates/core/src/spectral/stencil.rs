//! Finite differences on (z, t) profiles.
//!
//! Interior rows are centered; the first and last rows use one-sided
//! stencils of the same order. `dz4` is the fourth-order variant used where a
//! derivative is fed into further differentiation.

use ndarray::{Array2, ArrayView2, Axis};
use num_complex::Complex64;

fn first_derivative_axis(u: ArrayView2<'_, Complex64>, h: f64, axis: Axis) -> Array2<Complex64> {
    let n = u.len_of(axis);
    assert!(n >= 3, "need at least three nodes");
    let mut out = Array2::zeros(u.raw_dim());
    let c = 1.0 / (2.0 * h);
    for j in 0..n {
        let (a, w) = if j == 0 {
            (0, [-3.0, 4.0, -1.0])
        } else if j == n - 1 {
            (n - 3, [1.0, -4.0, 3.0])
        } else {
            (j - 1, [-1.0, 0.0, 1.0])
        };
        let mut dst = out.index_axis_mut(axis, j);
        for (o, wk) in w.iter().enumerate() {
            if *wk != 0.0 {
                let src = u.index_axis(axis, a + o);
                dst.zip_mut_with(&src, |d, s| *d += s * (wk * c));
            }
        }
    }
    out
}

/// ∂z on axis 0.
pub fn dz(u: ArrayView2<'_, Complex64>, h: f64) -> Array2<Complex64> {
    first_derivative_axis(u, h, Axis(0))
}

/// ∂t on axis 1.
pub fn dt(u: ArrayView2<'_, Complex64>, dt: f64) -> Array2<Complex64> {
    first_derivative_axis(u, dt, Axis(1))
}

fn first_derivative4_axis(u: ArrayView2<'_, Complex64>, h: f64, axis: Axis) -> Array2<Complex64> {
    let n = u.len_of(axis);
    assert!(n >= 5, "need at least five nodes");
    let mut out = Array2::zeros(u.raw_dim());
    let c = 1.0 / (12.0 * h);
    const EDGE: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
    const NEAR: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
    const MID: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
    for j in 0..n {
        let (start, w, sign) = match j {
            0 => (0, EDGE, 1.0),
            1 => (0, NEAR, 1.0),
            _ if j == n - 1 => (n - 5, rev(EDGE), -1.0),
            _ if j == n - 2 => (n - 5, rev(NEAR), -1.0),
            _ => (j - 2, MID, 1.0),
        };
        let mut dst = out.index_axis_mut(axis, j);
        for (o, wk) in w.iter().enumerate() {
            if *wk != 0.0 {
                let src = u.index_axis(axis, start + o);
                dst.zip_mut_with(&src, |d, s| *d += s * (sign * wk * c));
            }
        }
    }
    out
}

/// Fourth-order ∂z on axis 0: five-point centered inside, one-sided
/// five-point stencils on the two rows next to each end.
pub fn dz4(u: ArrayView2<'_, Complex64>, h: f64) -> Array2<Complex64> {
    first_derivative4_axis(u, h, Axis(0))
}

/// Fourth-order ∂t on axis 1.
pub fn dt4(u: ArrayView2<'_, Complex64>, dt: f64) -> Array2<Complex64> {
    first_derivative4_axis(u, dt, Axis(1))
}

/// Fourth-order ∂z² on axis 0 (six-point one-sided rows near the ends).
pub fn dzz4(u: ArrayView2<'_, Complex64>, h: f64) -> Array2<Complex64> {
    let n = u.nrows();
    assert!(n >= 6, "need at least six nodes");
    let mut out = Array2::zeros(u.raw_dim());
    let c = 1.0 / (12.0 * h * h);
    const EDGE: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    const NEAR: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    const MID: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
    for j in 0..n {
        let (start, w): (usize, Vec<f64>) = match j {
            0 => (0, EDGE.to_vec()),
            1 => (0, NEAR.to_vec()),
            _ if j == n - 1 => (n - 6, EDGE.iter().rev().copied().collect()),
            _ if j == n - 2 => (n - 6, NEAR.iter().rev().copied().collect()),
            _ => (j - 2, MID.to_vec()),
        };
        let mut dst = out.row_mut(j);
        for (o, wk) in w.iter().enumerate() {
            dst.zip_mut_with(&u.row(start + o), |d, s| *d += s * (wk * c));
        }
    }
    out
}

/// Fourth-order version of [`heat_operator`].
pub fn heat_operator4(
    u: ArrayView2<'_, Complex64>,
    a: f64,
    h: f64,
    step: f64,
) -> Array2<Complex64> {
    let mut out = dt4(u, step);
    out -= &dzz4(u, h);
    out.zip_mut_with(&u, |o, v| *o += v * (a * a));
    out
}

fn rev(w: [f64; 5]) -> [f64; 5] {
    [w[4], w[3], w[2], w[1], w[0]]
}

/// ∂z² on axis 0: centered inside, `(2u0 − 5u1 + 4u2 − u3)/h²` at the ends.
pub fn dzz(u: ArrayView2<'_, Complex64>, h: f64) -> Array2<Complex64> {
    let n = u.nrows();
    assert!(n >= 4, "need at least four nodes");
    let mut out = Array2::zeros(u.raw_dim());
    let c = 1.0 / (h * h);
    for j in 0..n {
        let (start, w): (usize, &[f64]) = if j == 0 {
            (0, &[2.0, -5.0, 4.0, -1.0])
        } else if j == n - 1 {
            (n - 4, &[-1.0, 4.0, -5.0, 2.0])
        } else {
            (j - 1, &[1.0, -2.0, 1.0])
        };
        let mut dst = out.row_mut(j);
        for (o, wk) in w.iter().enumerate() {
            dst.zip_mut_with(&u.row(start + o), |d, s| *d += s * (wk * c));
        }
    }
    out
}

/// Per-mode heat operator `∂t − ∂z² + a²`.
pub fn heat_operator(u: ArrayView2<'_, Complex64>, a: f64, h: f64, step: f64) -> Array2<Complex64> {
    let mut out = dt(u, step);
    out -= &dzz(u, h);
    out.zip_mut_with(&u, |o, v| *o += v * (a * a));
    out
}
