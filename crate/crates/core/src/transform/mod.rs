//! Nabla and delta Laplace-type transforms.
//!
//! The direct transforms are exact finite sums over a signal's support.
//! Inverses come in two flavours: a closed-form catalog for rational
//! functions and trapezoidal quadrature of the inversion integral on a
//! circle, which serves as an independent oracle.

pub mod contour;
pub mod residue;

use std::sync::Arc;

use num_complex::Complex64;

pub use contour::{reciprocal_graininess, Contour, DEFAULT_NODES};

use crate::calculus::Signal;
use crate::error::{Error, Result};
use crate::exponential::{exp, factor, is_pole};
use crate::systems::rational::{RationalTransform, Roc};
use crate::timescale::{Direction, TimeScale};
use crate::{scaled_sum, Scaled};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const POLE_ON_SCALE_RTOL: f64 = 1e-12;

/// Direct transform of a finite-support signal.
///
/// Nabla: `Σ μ_n f(t_n) e_Δ(t_n, t0; -s)`. Delta: `Σ ν_n f(t_n) e_∇(t_n, t0; -s)`.
pub fn direct_transform(f: &Signal, s: Complex64, kind: Direction) -> Result<Complex64> {
    let Some((lo, hi)) = f.support() else {
        return Ok(ZERO);
    };
    let ts = f.scale();
    let len = ts.len();
    match kind {
        Direction::Nabla if hi + 1 >= len => return Err(Error::SupportTouchesBoundary { lo, hi }),
        Direction::Delta if lo == 0 => return Err(Error::SupportTouchesBoundary { lo, hi }),
        _ => {}
    }
    let c = ts.t0_index();
    let weight = |n: usize| match kind {
        Direction::Nabla => ts.step(n + 1),
        Direction::Delta => ts.step(n),
    };
    // forward steps divide for delta, backward steps divide for nabla
    let divides_forward = kind == Direction::Delta;
    let mut left: Vec<Scaled> = Vec::new();
    let mut e = Scaled::one();
    for n in (lo..c).rev() {
        let g = ts.step(n + 1);
        let fac = factor(s, g, kind);
        e = if divides_forward {
            e.mul(fac)
        } else {
            if is_pole(fac, s, g) {
                return Err(Error::PoleHit { s });
            }
            e.div(fac)
        };
        if n <= hi {
            left.push(e.mul(f.value(n) * weight(n)));
        }
    }
    left.reverse();
    let mut e = Scaled::one();
    for n in c..=hi {
        if n > c {
            let g = ts.step(n);
            let fac = factor(s, g, kind);
            e = if divides_forward {
                if is_pole(fac, s, g) {
                    return Err(Error::PoleHit { s });
                }
                e.div(fac)
            } else {
                e.mul(fac)
            };
        }
        if n >= lo {
            left.push(e.mul(f.value(n) * weight(n)));
        }
    }
    Ok(scaled_sum(&left))
}

/// Signal whose nabla transform is identically one: `1/μ(t0)` at `t0`.
pub fn impulse(ts: &Arc<TimeScale>) -> Result<Signal> {
    impulse_for(ts, Direction::Nabla)
}

/// Impulse of either kind; the delta impulse has amplitude `1/ν(t0)`.
pub fn impulse_for(ts: &Arc<TimeScale>, kind: Direction) -> Result<Signal> {
    let c = ts.t0_index();
    let g = ts.graininess(
        c,
        match kind {
            Direction::Nabla => Direction::Delta,
            Direction::Delta => Direction::Nabla,
        },
    )?;
    let mut values = vec![ZERO; ts.len()];
    values[c] = Complex64::new(1.0 / g, 0.0);
    Signal::with_support(ts.clone(), values, Some((c, c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFlavor {
    Causal,
    Anticausal,
}

/// Causal step (`1` from `t0` on) or anti-causal step (`-1` strictly before `t0`).
pub fn unit_step(ts: &Arc<TimeScale>, flavor: StepFlavor) -> Signal {
    let c = ts.t0_index();
    let len = ts.len();
    let (values, support) = match flavor {
        StepFlavor::Causal => ((0..len).map(|n| if n >= c { ONE } else { ZERO }).collect(), Some((c, len - 1))),
        StepFlavor::Anticausal => {
            ((0..len).map(|n| if n < c { -ONE } else { ZERO }).collect(), (c > 0).then(|| (0, c - 1)))
        }
    };
    Signal::clipped(ts.clone(), values, support)
}

/// Factor `e_Δ(t_m, t0; -s)` multiplying the nabla transform of a signal
/// delayed by `t_m - t0`.
pub fn shifted_transform_factor(ts: &TimeScale, m: usize, s: Complex64) -> Result<Complex64> {
    exp(ts, m, ts.t0_index(), -s, Direction::Delta)
}

/// Circle through the origin and `p` centered on the real axis, or `None`
/// when `Re p <= 0`.
pub fn roc_circle(p: Complex64) -> Option<(f64, f64)> {
    if p.re <= 0.0 {
        return None;
    }
    let center = p.norm_sqr() / (2.0 * p.re);
    Some((center, center.abs()))
}

/// Inversion integral evaluated by quadrature.
///
/// Nabla: `f(t_n) = -(1/2πi)∮ F(s) e_∇(t_{n+1}, t0; s) ds`.
/// Delta: `f(t_n) = (1/2πi)∮ F(s) e_Δ(t_{n-1}, t0; s) ds`.
///
/// The contour must enclose every reciprocal graininess point of the
/// window; `outside` lists poles of `F` that must stay outside.
pub fn contour_inverse(
    f: impl Fn(Complex64) -> Result<Complex64>,
    ts: &TimeScale,
    at: usize,
    contour: &Contour,
    kind: Direction,
    outside: &[Complex64],
) -> Result<Complex64> {
    ts.check_index(at)?;
    contour.validate(&reciprocal_graininess(ts, kind), outside)?;
    let c = ts.t0_index();
    let (kernel_at, sign) = match kind {
        Direction::Nabla => {
            if at + 1 >= ts.len() {
                return Err(Error::BoundaryIndex { index: at });
            }
            (at + 1, -1.0)
        }
        Direction::Delta => {
            if at == 0 {
                return Err(Error::BoundaryIndex { index: at });
            }
            (at - 1, 1.0)
        }
    };
    let v = contour.integrate(|s| Ok(f(s)? * exp(ts, kernel_at, c, s, kind)?))?;
    Ok(v * sign)
}

/// Inverse nabla transform of a strictly proper rational function.
///
/// A causal simple pole `p` contributes `c·e_∇(t_{n+1}, t0; p)` for
/// `t_n >= t0`; an anti-causal one contributes `-c·e_∇(t_{n+1}, t0; p)`
/// for `t_n < t0`. Higher-order poles use the `p`-derivatives of that
/// kernel. The last instant of the window has no successor and is left
/// outside the result's support.
pub fn invert_rational(h: &RationalTransform, ts: &Arc<TimeScale>) -> Result<Signal> {
    if !h.is_strictly_proper() {
        return Err(Error::ImproperRational { num: h.num_degree(), den: h.den_degree() });
    }
    let steps = ts.steps();
    for pole in h.poles() {
        if pole.roc.is_none() {
            return Err(Error::UntaggedPole { pole: pole.location });
        }
        let p = pole.location;
        if steps.iter().any(|&g| (ONE - p * g).norm() < POLE_ON_SCALE_RTOL * (1.0 + (p * g).norm())) {
            return Err(Error::PoleOnScale { pole: p });
        }
    }
    let len = ts.len();
    let c = ts.t0_index();
    let mut values = vec![ZERO; len];
    let mut causal = false;
    let mut anticausal = false;
    for (pole, coeffs) in h.poles().iter().zip(h.partial_fractions()) {
        let p = pole.location;
        let m = coeffs.len();
        match pole.roc {
            Some(Roc::Causal) => {
                causal = true;
                let mut kernel = KernelDerivatives::new(m, 1.0);
                for n in c..len.saturating_sub(1) {
                    kernel.push(p, steps[n]); // step ending at t_{n+1}
                    values[n] += kernel.combine(&coeffs);
                }
            }
            Some(Roc::Anticausal) => {
                anticausal = true;
                let mut kernel = KernelDerivatives::new(m, -1.0);
                for n in (0..c).rev() {
                    if n + 1 < c {
                        kernel.push(p, steps[n + 1]); // step ending at t_{n+2}
                    }
                    values[n] -= kernel.combine(&coeffs);
                }
            }
            None => unreachable!(),
        }
    }
    let mut support: Option<(usize, usize)> = None;
    if anticausal && c > 0 {
        support = Some((0, c - 1));
    }
    if causal && c + 1 < len {
        support = Some((support.map_or(c, |s| s.0), len - 2));
    }
    let values: Vec<Complex64> = values;
    if let Some(n) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::InvalidSignal(format!("inverse overflows at index {n}")));
    }
    Ok(Signal::clipped(ts.clone(), values, support))
}

/// Running `p`-derivatives of `E(p) = Π (1 - p g)^{-q}` as factors are added.
///
/// Keeps `E` and the power sums `Σ (g/(1 - p g))^j`; the normalized
/// derivatives `E^{(r)}/r!` follow from the logarithmic-derivative recurrence.
struct KernelDerivatives {
    value: Complex64,
    power_sums: Vec<Complex64>,
    sign: f64,
}

impl KernelDerivatives {
    /// `sign = 1` for inverse factors (causal), `-1` for direct factors.
    fn new(order: usize, sign: f64) -> Self {
        KernelDerivatives { value: ONE, power_sums: vec![ZERO; order], sign }
    }

    fn push(&mut self, p: Complex64, g: f64) {
        let f = ONE - p * g;
        self.value = if self.sign > 0.0 { self.value / f } else { self.value * f };
        let r = g / f;
        let mut rj = ONE;
        for ps in self.power_sums.iter_mut() {
            rj *= r;
            *ps += rj;
        }
    }

    /// `Σ_r coeffs[r-1] · E^{(r-1)}/(r-1)!`.
    fn combine(&self, coeffs: &[Complex64]) -> Complex64 {
        let m = coeffs.len();
        let mut e = vec![ZERO; m];
        e[0] = self.value;
        for r in 1..m {
            let mut acc = ZERO;
            for j in 1..=r {
                acc += self.power_sums[j - 1] * e[r - j];
            }
            e[r] = acc * self.sign / r as f64;
        }
        coeffs.iter().zip(&e).map(|(c, e)| c * e).sum()
    }
}

#[cfg(test)]
mod tests;
