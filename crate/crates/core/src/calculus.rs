//! Finite-support signals and the nabla/delta calculus on them.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::timescale::{Direction, TimeScale};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex samples on a time scale, zero outside `support`.
///
/// `support` is an inclusive index interval; `None` is the zero signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    scale: Arc<TimeScale>,
    values: Vec<Complex64>,
    support: Option<(usize, usize)>,
}

impl Signal {
    /// Signal whose support is the hull of its nonzero samples.
    pub fn new(scale: Arc<TimeScale>, values: Vec<Complex64>) -> Result<Self> {
        check_values(&scale, &values)?;
        let support = nonzero_hull(&values);
        Ok(Signal { scale, values, support })
    }

    /// Signal with an explicitly declared support; samples outside it must be zero.
    pub fn with_support(
        scale: Arc<TimeScale>,
        values: Vec<Complex64>,
        support: Option<(usize, usize)>,
    ) -> Result<Self> {
        check_values(&scale, &values)?;
        if let Some((lo, hi)) = support {
            if lo > hi || hi >= values.len() {
                return Err(Error::InvalidSignal(format!("support [{lo}, {hi}] is not inside the window")));
            }
        }
        let inside = |n: usize| support.is_some_and(|(lo, hi)| (lo..=hi).contains(&n));
        if let Some(n) = (0..values.len()).find(|&n| !inside(n) && values[n] != ZERO) {
            return Err(Error::InvalidSignal(format!("sample {n} is nonzero outside the declared support")));
        }
        Ok(Signal { scale, values, support })
    }

    pub fn zeros(scale: Arc<TimeScale>) -> Self {
        let values = vec![ZERO; scale.len()];
        Signal { scale, values, support: None }
    }

    pub fn from_real(scale: Arc<TimeScale>, values: &[f64]) -> Result<Self> {
        Signal::new(scale, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f(n, t_n)` at every instant of the window.
    pub fn from_fn(scale: Arc<TimeScale>, f: impl Fn(usize, f64) -> Complex64) -> Result<Self> {
        let values = scale.instants().iter().enumerate().map(|(n, &t)| f(n, t)).collect();
        Signal::new(scale, values)
    }

    /// Builds a signal from values, zeroing everything outside `support`.
    pub(crate) fn clipped(scale: Arc<TimeScale>, mut values: Vec<Complex64>, support: Option<(usize, usize)>) -> Self {
        for (n, v) in values.iter_mut().enumerate() {
            if !support.is_some_and(|(lo, hi)| (lo..=hi).contains(&n)) {
                *v = ZERO;
            }
        }
        Signal { scale, values, support }
    }

    pub fn scale(&self) -> &TimeScale {
        &self.scale
    }

    pub fn scale_arc(&self) -> &Arc<TimeScale> {
        &self.scale
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, n: usize) -> Complex64 {
        self.values[n]
    }

    pub fn support(&self) -> Option<(usize, usize)> {
        self.support
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_none()
    }

    pub fn scale_by(&self, c: Complex64) -> Signal {
        Signal {
            scale: self.scale.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            support: if c == ZERO { None } else { self.support },
        }
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        same_scale(self, other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let support = union(self.support, other.support);
        Ok(Signal::clipped(self.scale.clone(), values, support))
    }

    /// Pointwise product with another signal on the same scale.
    pub fn mul(&self, other: &Signal) -> Result<Signal> {
        same_scale(self, other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        let support = match (self.support, other.support) {
            (Some((a, b)), Some((c, d))) if a.max(c) <= b.min(d) => Some((a.max(c), b.min(d))),
            _ => None,
        };
        Ok(Signal::clipped(self.scale.clone(), values, support))
    }

    /// The same samples on another scale with an equal number of instants.
    pub fn on_scale(&self, scale: Arc<TimeScale>) -> Result<Signal> {
        if scale.len() != self.len() {
            return Err(Error::ScaleMismatch(format!("{} instants vs {} samples", scale.len(), self.len())));
        }
        Ok(Signal { scale, values: self.values.clone(), support: self.support })
    }
}

fn check_values(scale: &TimeScale, values: &[Complex64]) -> Result<()> {
    if values.len() != scale.len() {
        return Err(Error::InvalidSignal(format!("{} samples for a window of {} instants", values.len(), scale.len())));
    }
    if let Some(n) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::InvalidSignal(format!("sample {n} is not finite")));
    }
    Ok(())
}

fn nonzero_hull(values: &[Complex64]) -> Option<(usize, usize)> {
    let lo = values.iter().position(|v| *v != ZERO)?;
    let hi = values.iter().rposition(|v| *v != ZERO)?;
    Some((lo, hi))
}

fn union(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
        (x, None) | (None, x) => x,
    }
}

pub(crate) fn same_scale(f: &Signal, g: &Signal) -> Result<()> {
    if Arc::ptr_eq(&f.scale, &g.scale) || f.scale == g.scale {
        Ok(())
    } else {
        Err(Error::ScaleMismatch("signals live on different time scales".into()))
    }
}

/// N-th order nabla or delta derivative.
///
/// Indices whose stencil leaves the window are excluded from the result's
/// support: nabla needs `n >= order`, delta needs `n + order < len`.
pub fn derivative(f: &Signal, direction: Direction, order: i64) -> Result<Signal> {
    let steps: Vec<f64> = f.scale.steps();
    difference(f, direction, order, |n| match direction {
        Direction::Nabla => steps[n - 1],
        Direction::Delta => steps[n],
    })
}

/// Backward difference divided by the forward graininess,
/// `(f(t_n) - f(t_{n-1})) / μ_n`.
///
/// This is the operator whose nabla transform is exactly `s·F(s)` on
/// every scale; it coincides with the nabla derivative on uniform scales.
/// Computable for `order <= n <= len - 2`.
pub fn sigma_difference(f: &Signal, order: i64) -> Result<Signal> {
    check_order(order)?;
    let steps = f.scale.steps();
    let len = f.len();
    let d = difference(f, Direction::Nabla, order, |n| steps.get(n).copied().unwrap_or(f64::NAN))?;
    let support = d.support.and_then(|(lo, hi)| (lo <= len - 2).then(|| (lo, hi.min(len - 2))));
    Ok(Signal::clipped(d.scale, d.values, support))
}

fn check_order(order: i64) -> Result<()> {
    if order < 1 {
        Err(Error::OrderZeroOrNegative { order })
    } else {
        Ok(())
    }
}

fn difference(f: &Signal, direction: Direction, order: i64, step: impl Fn(usize) -> f64) -> Result<Signal> {
    check_order(order)?;
    let len = f.len();
    let order = order as usize;
    if order >= len {
        return Err(Error::WindowTooSmall(format!("order {order} derivative needs more than {len} instants")));
    }
    let mut v = f.values.clone();
    for pass in 1..=order {
        let mut next = vec![ZERO; len];
        match direction {
            Direction::Nabla => {
                for n in pass..len {
                    next[n] = (v[n] - v[n - 1]) / step(n);
                }
            }
            Direction::Delta => {
                for n in 0..len - pass {
                    next[n] = (v[n + 1] - v[n]) / step(n);
                }
            }
        }
        v = next;
    }
    let (first, last) = match direction {
        Direction::Nabla => (order, len - 1),
        Direction::Delta => (0, len - 1 - order),
    };
    let support = f.support.and_then(|(lo, hi)| {
        let (lo, hi) = match direction {
            Direction::Nabla => (lo.max(first), (hi + order).min(last)),
            Direction::Delta => (lo.saturating_sub(order).max(first), hi.min(last)),
        };
        (lo <= hi).then_some((lo, hi))
    });
    Ok(Signal::clipped(f.scale.clone(), v, support))
}

/// Causal (nabla) or anti-causal (delta) anti-derivative with zero tail.
///
/// Nabla: `Σ_{m <= n} ν_m f(t_m)`, accumulated left to right.
/// Delta: `-Σ_{m >= n} μ_m f(t_m)`, accumulated right to left.
pub fn antiderivative(f: &Signal, direction: Direction) -> Result<Signal> {
    let len = f.len();
    let Some((lo, hi)) = f.support else {
        return Ok(Signal::zeros(f.scale.clone()));
    };
    let ts = &f.scale;
    let mut out = vec![ZERO; len];
    match direction {
        Direction::Nabla => {
            if lo == 0 {
                return Err(Error::SupportTouchesBoundary { lo, hi });
            }
            let mut acc = ZERO;
            for (n, o) in out.iter_mut().enumerate().skip(lo) {
                acc += f.values[n] * ts.step(n);
                *o = acc;
            }
            Ok(Signal::clipped(ts.clone(), out, Some((lo, len - 1))))
        }
        Direction::Delta => {
            if hi + 1 >= len {
                return Err(Error::SupportTouchesBoundary { lo, hi });
            }
            let mut acc = ZERO;
            for n in (0..=hi).rev() {
                acc -= f.values[n] * ts.step(n + 1);
                out[n] = acc;
            }
            Ok(Signal::clipped(ts.clone(), out, Some((0, hi))))
        }
    }
}

/// Nabla integral over `(t_a, t_b]` or delta integral over `[t_a, t_b)`.
pub fn definite_integral(f: &Signal, a: usize, b: usize, direction: Direction) -> Result<Complex64> {
    let ts = &f.scale;
    ts.check_index(a)?;
    ts.check_index(b)?;
    if a > b {
        return Err(Error::ReversedInterval { a, b });
    }
    let terms: Vec<Complex64> = match direction {
        Direction::Nabla => (a + 1..=b).map(|n| f.values[n] * ts.step(n)).collect(),
        Direction::Delta => (a..b).map(|n| f.values[n] * ts.step(n + 1)).collect(),
    };
    Ok(terms.iter().sum())
}
