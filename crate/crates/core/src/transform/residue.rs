//! Exact closed-contour integrals of products of exponential factors.
//!
//! Every shift, interpolation and resampling kernel reduces to
//!
//! ```text
//! I = -(1/2πi) ∮ Π_i (1 - s·a_i) / Π_j (1 - s·b_j) ds
//! ```
//!
//! over a circle enclosing every `1/b_j`. The value is a finite residue
//! sum; no quadrature is needed.

use num_complex::Complex64;

use super::contour::Contour;
use crate::error::Result;
use crate::pairwise_sum;
use crate::timescale::IDENTITY_RTOL;

/// Relative separation below which distinct poles are treated as a cluster
/// and the expansion at infinity is used instead of per-pole residues.
const CLUSTER_RTOL: f64 = 1e-2;

fn same(x: f64, y: f64) -> bool {
    (x - y).abs() <= IDENTITY_RTOL * x.abs().max(y.abs())
}

/// Cancels equal numerator/denominator values and drops unit factors.
fn reduce(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a: Vec<f64> = num.iter().copied().filter(|x| *x != 0.0).collect();
    let mut b: Vec<f64> = den.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut ra, mut rb) = (Vec::with_capacity(a.len()), Vec::with_capacity(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if same(a[i], b[j]) {
            i += 1;
            j += 1;
        } else if a[i] < b[j] {
            ra.push(a[i]);
            i += 1;
        } else {
            rb.push(b[j]);
            j += 1;
        }
    }
    ra.extend_from_slice(&a[i..]);
    rb.extend_from_slice(&b[j..]);
    (ra, rb)
}

/// `-(1/2πi)∮ Π(1 - s a)/Π(1 - s b) ds` with the contour around all `1/b`.
///
/// `den` values must be nonzero.
pub fn ratio_integral(num: &[f64], den: &[f64]) -> f64 {
    let (a, b) = reduce(num, den);
    let (p, q) = (a.len(), b.len());
    if q == 0 || q >= p + 2 {
        return 0.0;
    }
    if p == 0 && q == 1 {
        return 1.0 / b[0];
    }
    let mut poles: Vec<(f64, usize)> = Vec::new();
    for &x in &b {
        match poles.last_mut() {
            Some((y, m)) if same(*y, x) => *m += 1,
            _ => poles.push((x, 1)),
        }
    }
    let clustered = poles.windows(2).any(|w| (w[1].0 - w[0].0).abs() < CLUSTER_RTOL * w[0].0.abs().max(w[1].0.abs()));
    if clustered {
        at_infinity(&a, &b)
    } else {
        residue_sum(&a, &poles)
    }
}

/// Sum of residues, one pole at a time, from the logarithmic derivative of
/// the regular part.
fn residue_sum(a: &[f64], poles: &[(f64, usize)]) -> f64 {
    let mut residues = Vec::with_capacity(poles.len());
    for (i, &(beta, m)) in poles.iter().enumerate() {
        let s0 = 1.0 / beta;
        let mut regular = 1.0;
        for &x in a {
            regular *= 1.0 - s0 * x;
        }
        for (j, &(y, my)) in poles.iter().enumerate() {
            if j != i {
                regular /= (1.0 - s0 * y).powi(my as i32);
            }
        }
        // normalized Taylor coefficients of the regular part at s0
        let ra: Vec<f64> = a.iter().map(|x| x / (1.0 - s0 * x)).collect();
        let rb: Vec<(f64, usize)> =
            poles.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &(y, my))| (y / (1.0 - s0 * y), my)).collect();
        let power_sum = |j: i32| -> f64 {
            rb.iter().map(|&(r, my)| my as f64 * r.powi(j)).sum::<f64>() - ra.iter().map(|r| r.powi(j)).sum::<f64>()
        };
        let sums: Vec<f64> = (1..m as i32).map(power_sum).collect();
        let mut h = vec![1.0; m];
        for k in 1..m {
            h[k] = (1..=k).map(|j| sums[j - 1] * h[k - j]).sum::<f64>() / k as f64;
        }
        residues.push(Complex64::new(regular * h[m - 1] / (-beta).powi(m as i32), 0.0));
    }
    -pairwise_sum(&residues).re
}

/// Coefficient extraction at infinity: with `u = 1/s` the integral is minus
/// the `u^d` coefficient of `Π(u - a)/Π(u - b)`, `d = 1 + p - q`.
fn at_infinity(a: &[f64], b: &[f64]) -> f64 {
    let d = 1 + a.len() - b.len();
    let beta = b.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let mut series = vec![0.0; d + 1];
    series[0] = 1.0;
    for &x in a {
        let x = x / beta;
        for k in (0..=d).rev() {
            series[k] = if k > 0 { series[k - 1] } else { 0.0 } - x * series[k];
        }
    }
    for &y in b {
        let y = y / beta;
        let mut prev = 0.0;
        for s in series.iter_mut() {
            // (v - y)·T = S  ⇒  T_k = (T_{k-1} - S_k)/y
            let t = (prev - *s) / y;
            *s = t;
            prev = t;
        }
    }
    -series[d] / beta
}

/// The same integral by trapezoidal quadrature on `contour`; used to
/// cross-check [`ratio_integral`].
pub fn ratio_integral_quadrature(num: &[f64], den: &[f64], contour: &Contour) -> Result<f64> {
    let v = contour.integrate(|s| {
        let mut g = Complex64::new(1.0, 0.0);
        for &x in num {
            g *= 1.0 - s * x;
        }
        for &y in den {
            g /= 1.0 - s * y;
        }
        Ok(g)
    })?;
    Ok(-v.re)
}
