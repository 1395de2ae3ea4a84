//! Fractional-order nabla derivatives.
//!
//! The kernel is the causal inverse transform of `s^α`. On a uniform scale
//! it is the Grünwald–Letnikov sequence `h^{-α}(-α)_n/n!`. On a general
//! scale the `n`-th weight after `t0` is
//!
//! ```text
//! w_n = μ_{n+1} · x^{n-1-α}[μ_1, …, μ_{n+1}]
//! ```
//!
//! a divided difference over the forward graininess values `μ_k` of the
//! steps following `t0`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::calculus::{antiderivative, Signal};
use crate::error::{Error, Result};
use crate::systems::convolve::{convolve, ConvolutionPath};
use crate::timescale::{Direction, TimeScale};
use crate::transform::contour::{Contour, DEFAULT_NODES};
use crate::transform::{unit_step, StepFlavor};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const SEPARATION_RTOL: f64 = 1e-6;
/// Spread (relative to the mean) below which the divided difference is
/// summed as a Taylor series around the mean.
const CLUSTER_SPREAD: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    UniformGl,
    DistinctResidue,
    Contour,
}

impl KernelMethod {
    pub fn name(self) -> &'static str {
        match self {
            KernelMethod::UniformGl => "uniform_GL",
            KernelMethod::DistinctResidue => "distinct_residue",
            KernelMethod::Contour => "contour",
        }
    }
}

/// Weights per instant; zero before `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalKernel {
    pub alpha: f64,
    pub scale: Arc<TimeScale>,
    pub weights: Vec<Complex64>,
    pub method: KernelMethod,
}

impl FractionalKernel {
    pub fn as_signal(&self) -> Result<Signal> {
        Signal::new(self.scale.clone(), self.weights.clone())
    }
}

fn gl_weights(alpha: f64, h: f64, n_terms: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n_terms);
    let mut x = h.powf(-alpha);
    for n in 0..n_terms {
        if n > 0 {
            x *= (n as f64 - 1.0 - alpha) / n as f64;
        }
        w.push(x);
    }
    w
}

/// Grünwald–Letnikov weights `w_0 = h^{-α}`, `w_n = w_{n-1}(n-1-α)/n` on the
/// scale `{0, h, …, (n_terms-1)h}` with `t0 = 0`.
pub fn gl_kernel_uniform(alpha: f64, h: f64, n_terms: usize) -> Result<FractionalKernel> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep { step: h });
    }
    if n_terms == 0 {
        return Err(Error::TooShort { len: 0 });
    }
    let instants = (0..n_terms).map(|n| n as f64 * h).collect();
    let scale = Arc::new(TimeScale::new(instants, 0)?);
    let weights = gl_weights(alpha, h, n_terms).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    Ok(FractionalKernel { alpha, scale, weights, method: KernelMethod::UniformGl })
}

/// Kernel weight at absolute index `n` from the distinct-graininess residue
/// sum. Zero before `t0`.
pub fn kernel_distinct(ts: &TimeScale, alpha: f64, n: usize) -> Result<Complex64> {
    ts.check_index(n)?;
    let c = ts.t0_index();
    if n < c {
        return Ok(ZERO);
    }
    if n + 1 >= ts.len() {
        return Err(Error::BoundaryIndex { index: n });
    }
    let j = n - c;
    let mu: Vec<f64> = (c + 1..=n + 1).map(|i| ts.step(i)).collect();
    let q = j as f64 - 1.0 - alpha;
    let dd = power_divided_difference(&mu, q).map_err(|e| match e {
        Error::RepeatedGraininess { first, second } => {
            Error::RepeatedGraininess { first: first + c + 1, second: second + c + 1 }
        }
        other => other,
    })?;
    Ok(Complex64::new(mu[j] * dd, 0.0))
}

/// `x^q[x_0, …, x_j]` for positive `x_i`.
fn power_divided_difference(x: &[f64], q: f64) -> Result<f64> {
    let j = x.len() - 1;
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let spread = x.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max) / mean;
    if spread < CLUSTER_SPREAD {
        return Ok(taylor_divided_difference(x, q, mean, spread));
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    for w in order.windows(2) {
        let (a, b) = (x[w[0]], x[w[1]]);
        if (b - a) < SEPARATION_RTOL * b {
            return Err(Error::RepeatedGraininess { first: w[0].min(w[1]), second: w[0].max(w[1]) });
        }
    }
    let mut acc = 0.0;
    for k in 0..=j {
        let mut term = x[k].powf(q);
        for m in 0..=j {
            if m != k {
                term /= x[k] - x[m];
            }
        }
        acc += term;
    }
    Ok(acc)
}

/// Expands `x^q` around `c`: the divided difference of `(x - c)^{j+r}` over
/// `j + 1` points is the complete homogeneous polynomial `h_r` of the
/// offsets, so `x^q[…] = c^{q-j} Σ_r C(q, j+r) h_r(d/c)`.
fn taylor_divided_difference(x: &[f64], q: f64, c: f64, spread: f64) -> f64 {
    let j = x.len() - 1;
    let terms = if spread == 0.0 { 1 } else { ((-40.0 / spread.log2()).ceil() as usize + 8).min(400) };
    let d: Vec<f64> = x.iter().map(|v| (v - c) / c).collect();
    // h[r] over the variables seen so far
    let mut h = vec![0.0; terms];
    h[0] = 1.0;
    for &di in &d {
        for r in 1..terms {
            h[r] += di * h[r - 1];
        }
    }
    let mut binom = 1.0;
    for i in 0..j {
        binom *= (q - i as f64) / (i as f64 + 1.0);
    }
    let mut acc = 0.0;
    for (r, hr) in h.iter().enumerate() {
        acc += binom * hr;
        let k = (j + r) as f64;
        binom *= (q - k) / (k + 1.0);
    }
    c.powf(q - j as f64) * acc
}

/// Weight by quadrature: `μ_{n+1} · -(1/2πi)∮ s^α Π_{k=1}^{j+1} (1 - s μ_k)^{-1} ds`
/// on a circle around the `1/μ_k` that keeps the origin and the branch cut
/// outside.
pub fn kernel_contour(ts: &TimeScale, alpha: f64, n: usize, nodes: usize) -> Result<Complex64> {
    ts.check_index(n)?;
    let c = ts.t0_index();
    if n < c {
        return Ok(ZERO);
    }
    if n + 1 >= ts.len() {
        return Err(Error::BoundaryIndex { index: n });
    }
    let mu: Vec<f64> = (c + 1..=n + 1).map(|i| ts.step(i)).collect();
    let inside: Vec<Complex64> = mu.iter().map(|m| Complex64::new(1.0 / m, 0.0)).collect();
    let contour = Contour::auto(&inside, &[], true, nodes)?;
    if contour.center - contour.radius <= 0.0 {
        return Err(Error::ContourInvalid("circle reaches the branch cut of s^α".into()));
    }
    let v = contour.integrate(|s| {
        let mut g = s.powf(alpha);
        for m in &mu {
            g /= 1.0 - s * m;
        }
        Ok(g)
    })?;
    Ok(-v * mu[mu.len() - 1])
}

/// Kernel over the whole window of `ts`. Uniform scales use the
/// Grünwald–Letnikov recurrence; otherwise the residue sum, falling back to
/// quadrature when graininess values repeat. On nonuniform scales the last
/// instant has no forward step and its weight is left at zero.
pub fn fractional_kernel(ts: &Arc<TimeScale>, alpha: f64) -> Result<FractionalKernel> {
    let len = ts.len();
    let c = ts.t0_index();
    let mut weights = vec![ZERO; len];
    if let Some(h) = ts.uniform_step() {
        for (w, x) in weights[c..].iter_mut().zip(gl_weights(alpha, h, len - c)) {
            *w = Complex64::new(x, 0.0);
        }
        return Ok(FractionalKernel { alpha, scale: ts.clone(), weights, method: KernelMethod::UniformGl });
    }
    let mut method = KernelMethod::DistinctResidue;
    for (n, w) in weights.iter_mut().enumerate().take(len - 1).skip(c) {
        *w = match kernel_distinct(ts, alpha, n) {
            Ok(w) => w,
            Err(Error::RepeatedGraininess { .. }) => {
                method = KernelMethod::Contour;
                kernel_contour(ts, alpha, n, DEFAULT_NODES)?
            }
            Err(e) => return Err(e),
        };
    }
    Ok(FractionalKernel { alpha, scale: ts.clone(), weights, method })
}

/// `D^α f = δ^{(α)} ∗ f`, where `δ^{(α)}` has transform `s^α`.
///
/// On uniform scales this is `Σ_m w_m f(t_{n-m})`.
pub fn fractional_derivative(f: &Signal, alpha: f64, path: ConvolutionPath) -> Result<Signal> {
    let ts = f.scale_arc();
    let kernel = fractional_kernel(ts, alpha)?;
    let len = ts.len();
    let density: Vec<Complex64> = (0..len)
        .map(|n| {
            let w = kernel.weights[n];
            if w == ZERO {
                ZERO
            } else {
                let mu = ts.uniform_step().unwrap_or_else(|| ts.step(n + 1));
                w / mu
            }
        })
        .collect();
    let delta = Signal::new(ts.clone(), density)?;
    convolve(&delta, f, path)
}

/// `N`-fold nabla anti-derivative of the causal unit step; on `hZ` the value
/// at `t0 + n h` is `h^N (N+n)!/(N! n!)`.
pub fn power_function(ts: &Arc<TimeScale>, order: usize) -> Result<Signal> {
    let mut f = unit_step(ts, StepFlavor::Causal);
    if order > 0 && ts.t0_index() == 0 {
        return Err(Error::WindowTooSmall("the power function needs an instant before t0".into()));
    }
    for _ in 0..order {
        f = antiderivative(&f, Direction::Nabla)?;
    }
    Ok(f)
}
