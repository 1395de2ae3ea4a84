//! Nabla and delta generalized exponentials and Hilger-circle geometry.
//!
//! Between instants `t_j` and `t_i` the nabla exponential is
//! `Π (1 - s·g)^{-1}` over the steps from `t_j` to `t_i` when `i > j` and
//! `Π (1 - s·g)` when `i < j`; the delta exponential uses `1 + s·g` with
//! the exponents swapped.

use std::sync::Arc;

use num_complex::Complex64;

use crate::calculus::Signal;
use crate::error::{Error, Result};
use crate::timescale::{Direction, TimeScale};

const LOG_SPACE_THRESHOLD: usize = 64;
const POLE_RTOL: f64 = 1e-14;

/// `1 - s·g` (nabla) or `1 + s·g` (delta).
#[inline]
pub(crate) fn factor(s: Complex64, g: f64, kind: Direction) -> Complex64 {
    match kind {
        Direction::Nabla => Complex64::new(1.0, 0.0) - s * g,
        Direction::Delta => Complex64::new(1.0, 0.0) + s * g,
    }
}

#[inline]
pub(crate) fn is_pole(f: Complex64, s: Complex64, g: f64) -> bool {
    f.norm() < POLE_RTOL * (1.0 + (s * g).norm())
}

/// Exponential `e(t_at, t_ref; s)` of the given kind.
pub fn exp(ts: &TimeScale, at: usize, reference: usize, s: Complex64, kind: Direction) -> Result<Complex64> {
    ts.check_index(at)?;
    ts.check_index(reference)?;
    if at == reference {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (lo, hi) = (at.min(reference), at.max(reference));
    // Exponent applied to every factor of the run of steps lo+1..=hi.
    let forward = at > reference;
    let inverse = match kind {
        Direction::Nabla => forward,
        Direction::Delta => !forward,
    };
    let count = hi - lo;
    if count <= LOG_SPACE_THRESHOLD {
        let mut p = Complex64::new(1.0, 0.0);
        for k in lo + 1..=hi {
            let g = ts.step(k);
            let f = factor(s, g, kind);
            if inverse {
                if is_pole(f, s, g) {
                    return Err(Error::PoleHit { s });
                }
                p /= f;
            } else {
                p *= f;
            }
        }
        return Ok(p);
    }
    let mut log = Complex64::new(0.0, 0.0);
    for k in lo + 1..=hi {
        let g = ts.step(k);
        let f = factor(s, g, kind);
        if is_pole(f, s, g) {
            if inverse {
                return Err(Error::PoleHit { s });
            }
            return Ok(Complex64::new(0.0, 0.0));
        }
        log += f.ln();
    }
    Ok(if inverse { (-log).exp() } else { log.exp() })
}

pub fn nabla_exp(ts: &TimeScale, at: usize, reference: usize, s: Complex64) -> Result<Complex64> {
    exp(ts, at, reference, s, Direction::Nabla)
}

pub fn delta_exp(ts: &TimeScale, at: usize, reference: usize, s: Complex64) -> Result<Complex64> {
    exp(ts, at, reference, s, Direction::Delta)
}

/// The exponential `t_n ↦ e(t_n, t_ref; s)` sampled over the whole window.
///
/// Built incrementally outward from the reference instant, so every sample
/// costs one complex multiplication.
pub fn sample(ts: &Arc<TimeScale>, reference: usize, s: Complex64, kind: Direction) -> Result<Signal> {
    ts.check_index(reference)?;
    let mut values = vec![Complex64::new(0.0, 0.0); ts.len()];
    values[reference] = Complex64::new(1.0, 0.0);
    for n in reference + 1..ts.len() {
        let g = ts.step(n);
        let f = factor(s, g, kind);
        values[n] = match kind {
            Direction::Nabla => {
                if is_pole(f, s, g) {
                    return Err(Error::PoleHit { s });
                }
                values[n - 1] / f
            }
            Direction::Delta => values[n - 1] * f,
        };
    }
    for n in (0..reference).rev() {
        let g = ts.step(n + 1);
        let f = factor(s, g, kind);
        values[n] = match kind {
            Direction::Nabla => values[n + 1] * f,
            Direction::Delta => {
                if is_pole(f, s, g) {
                    return Err(Error::PoleHit { s });
                }
                values[n + 1] / f
            }
        };
    }
    Signal::new(ts.clone(), values)
}

/// Smallest and largest graininess of a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilgerGeometry {
    pub h_min: f64,
    pub h_max: f64,
}

impl HilgerGeometry {
    pub fn new(h_min: f64, h_max: f64) -> Result<Self> {
        if !(h_min > 0.0 && h_min.is_finite()) {
            return Err(Error::InvalidStep { step: h_min });
        }
        if !(h_max >= h_min && h_max.is_finite()) {
            return Err(Error::InvalidStep { step: h_max });
        }
        Ok(HilgerGeometry { h_min, h_max })
    }

    pub fn of(ts: &TimeScale) -> Self {
        HilgerGeometry { h_min: ts.h_min(), h_max: ts.h_max() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HilgerRegion {
    InsideInner,
    OutsideOuter,
    Intermediate,
}

pub fn hilger_classify(geom: &HilgerGeometry, s: Complex64) -> HilgerRegion {
    let one = Complex64::new(1.0, 0.0);
    if (one - s * geom.h_min).norm() < 1.0 {
        HilgerRegion::InsideInner
    } else if (one - s * geom.h_max).norm() > 1.0 {
        HilgerRegion::OutsideOuter
    } else {
        HilgerRegion::Intermediate
    }
}

/// Both sides of `e(a·t_at, a·t_ref; s) = e(t_at, t_ref; a·s)` for the nabla kind,
/// with the reference at the scale's `t0`.
pub fn scale_change_check(ts: &TimeScale, a: f64, at: usize, s: Complex64) -> Result<(Complex64, Complex64)> {
    let scaled = ts.scaled(a)?;
    let lhs = nabla_exp(&scaled, at, ts.t0_index(), s)?;
    let rhs = nabla_exp(ts, at, ts.t0_index(), s * a)?;
    Ok((lhs, rhs))
}
