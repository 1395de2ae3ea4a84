//! Irregular to uniform resampling.

use num_complex::Complex64;

use super::convolve::{interpolate, ExpProduct, KernelMethod};
use crate::calculus::Signal;
use crate::error::{Error, Result};
use crate::timescale::{uniform_grid, TimeScale};
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ResampleOptions {
    /// Permit targets that are not differences of two instants; those use
    /// the transform-preserving kernel instead of interpolation.
    pub allow_off_scale: bool,
    pub method: KernelMethod,
}

/// Resamples `f` onto `{t0 + n h}` covering the window.
///
/// Each target `t0 + n h` is evaluated with [`interpolate`]. Targets off the
/// super time scale are an error unless `allow_off_scale` is set, in which
/// case the sample is the inverse, on the uniform grid, of `f`'s transform:
/// `Σ_k μ_k f(t_k) · -(1/2πi)∮ (1 - s h)^{-(n+1)} / e_∇(t_k, t0; s) ds`.
pub fn resample_uniform(f: &Signal, h: f64, opts: ResampleOptions) -> Result<Signal> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::IncompatibleStep(format!("step {h} is not a positive number")));
    }
    let ts = f.scale();
    let t0 = ts.t0();
    let rel = |t: f64| (t - t0) / h;
    let n_lo = snap(rel(ts.instant(0))).ceil() as i64;
    let n_hi = snap(rel(ts.instant(ts.len() - 1))).floor() as i64;
    let grid = uniform_grid(ts, h, n_lo, n_hi).map_err(|e| match e {
        Error::InvalidStep { step } => Error::IncompatibleStep(format!("step {step} is not usable")),
        other => other,
    })?;
    if same_instants(ts, &grid) {
        return Ok(Signal::clipped(Arc::new(grid), f.values().to_vec(), f.support()));
    }
    let mut values = Vec::with_capacity(grid.len());
    for n in n_lo..=n_hi {
        let target = n as f64 * h;
        let v = match interpolate(f, target, opts.method) {
            Err(Error::TargetOffSuperScale { .. }) if opts.allow_off_scale => {
                transform_preserving(f, h, n, opts.method)?
            }
            Err(Error::TargetOffSuperScale { .. }) => {
                return Err(Error::IncompatibleStep(format!(
                    "target t0 + {target} is not a difference of two usable instants"
                )));
            }
            other => other?,
        };
        values.push(v);
    }
    Signal::new(Arc::new(grid), values)
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * (1.0 + x.abs()) {
        r
    } else {
        x
    }
}

fn same_instants(a: &TimeScale, b: &TimeScale) -> bool {
    let tol = a.position_tolerance();
    a.len() == b.len()
        && a.t0_index() == b.t0_index()
        && a.instants().iter().zip(b.instants()).all(|(x, y)| (x - y).abs() <= tol)
}

fn transform_preserving(f: &Signal, h: f64, n: i64, method: KernelMethod) -> Result<Complex64> {
    let Some((lo, hi)) = f.support() else {
        return Ok(ZERO);
    };
    let ts = f.scale();
    if hi + 1 >= ts.len() {
        return Err(Error::SupportTouchesBoundary { lo, hi });
    }
    let power = -(n + 1) as i32;
    let mut acc = ZERO;
    for k in lo..=hi {
        let fk = f.value(k);
        if fk != ZERO {
            let w = ExpProduct::new(ts).nabla(k, ts.t0_index(), -1).factor(h, power).integral(method)?;
            acc += fk * ts.step(k + 1) * w;
        }
    }
    Ok(acc)
}
