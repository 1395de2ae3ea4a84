//! Circular integration paths and trapezoidal quadrature on them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pairwise_sum;
use crate::timescale::{Direction, TimeScale};

pub const DEFAULT_NODES: usize = 4096;
pub const MIN_NODES: usize = 256;
const VALIDATION_MARGIN: f64 = 1e-6;
const AUTO_MARGINS: [f64; 4] = [0.1, 0.05, 0.02, 0.01];

/// Circle `|s - center| = radius` traversed counterclockwise.
///
/// The center lies on the real axis. Nabla problems put it on the positive
/// side, where the reciprocal graininess points live; delta problems mirror
/// it to the negative side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub center: f64,
    pub radius: f64,
    pub nodes: usize,
}

impl Contour {
    pub fn new(center: f64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(Error::ContourInvalid(format!("center {center}, radius {radius}")));
        }
        if nodes < MIN_NODES || !nodes.is_power_of_two() {
            return Err(Error::ContourInvalid(format!("{nodes} nodes; need a power of two >= {MIN_NODES}")));
        }
        Ok(Contour { center, radius, nodes })
    }

    pub fn node(&self, j: usize) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / self.nodes as f64;
        Complex64::new(self.center, 0.0) + Complex64::from_polar(self.radius, theta)
    }

    /// `(1/2πi)∮ f(s) ds` by the trapezoidal rule.
    pub fn integrate(&self, f: impl Fn(Complex64) -> Result<Complex64>) -> Result<Complex64> {
        let n = self.nodes as f64;
        let mut terms = Vec::with_capacity(self.nodes);
        for j in 0..self.nodes {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n;
            let arm = Complex64::from_polar(self.radius, theta);
            let s = Complex64::new(self.center, 0.0) + arm;
            let v = f(s)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::ContourInvalid(format!("integrand is not finite at s = {s}")));
            }
            terms.push(v * arm / n);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Checks that `inside` points are enclosed and `outside` points excluded,
    /// both with a margin of `1e-6·radius`.
    pub fn validate(&self, inside: &[Complex64], outside: &[Complex64]) -> Result<()> {
        let c = Complex64::new(self.center, 0.0);
        if let Some(x) = inside.iter().find(|x| (*x - c).norm() > self.radius * (1.0 - VALIDATION_MARGIN)) {
            return Err(Error::ContourInvalid(format!("{x} is not strictly inside the contour")));
        }
        if let Some(y) = outside.iter().find(|y| (*y - c).norm() < self.radius * (1.0 + VALIDATION_MARGIN)) {
            return Err(Error::ContourInvalid(format!("{y} is not strictly outside the contour")));
        }
        Ok(())
    }

    /// Chooses a circle enclosing `inside` and excluding `outside`.
    ///
    /// The origin is a soft constraint when `avoid_origin` is set: it is
    /// kept outside whenever some circle allows it.
    pub fn auto(inside: &[Complex64], outside: &[Complex64], avoid_origin: bool, nodes: usize) -> Result<Contour> {
        if inside.is_empty() {
            return Err(Error::ContourInvalid("nothing to enclose".into()));
        }
        let with_origin: Vec<Complex64> =
            outside.iter().copied().chain(std::iter::once(Complex64::new(0.0, 0.0))).collect();
        let attempts: Vec<&[Complex64]> = if avoid_origin { vec![&with_origin, outside] } else { vec![outside] };
        for excluded in attempts {
            for margin in AUTO_MARGINS {
                if let Some((c, r)) = fit(inside, excluded, margin) {
                    return Contour::new(c, r, nodes);
                }
            }
        }
        Err(Error::ContourInvalid("no circle separates the enclosed points from the excluded poles".into()))
    }
}

/// Radii bounds `(r_min, r_max)` for a center `c`.
fn bounds(c: f64, inside: &[Complex64], outside: &[Complex64], margin: f64) -> (f64, f64) {
    let cc = Complex64::new(c, 0.0);
    let r_min = inside.iter().map(|x| (x - cc).norm()).fold(0.0, f64::max) / (1.0 - margin);
    let r_max = outside.iter().map(|y| (y - cc).norm()).fold(f64::INFINITY, f64::min) / (1.0 + margin);
    (r_min, r_max)
}

fn pick_radius(r_min: f64, r_max: f64, c: f64) -> f64 {
    match (r_min > 0.0, r_max.is_finite()) {
        (true, _) => r_min,
        (false, true) => 0.5 * r_max,
        (false, false) => c.abs().max(1.0),
    }
}

fn fit(inside: &[Complex64], outside: &[Complex64], margin: f64) -> Option<(f64, f64)> {
    let lo = inside.iter().map(|x| x.re).fold(f64::INFINITY, f64::min);
    let hi = inside.iter().map(|x| x.re).fold(f64::NEG_INFINITY, f64::max);
    let c0 = 0.5 * (lo + hi);
    let (r_min, r_max) = bounds(c0, inside, outside, margin);
    if r_min < r_max {
        return Some((c0, pick_radius(r_min, r_max, c0)));
    }
    let all_lo = outside.iter().map(|y| y.re).fold(lo, f64::min);
    let all_hi = outside.iter().map(|y| y.re).fold(hi, f64::max);
    let width = (all_hi - all_lo).max(1e-3);
    let (a, b) = (all_lo - width, all_hi + width);
    const GRID: usize = 4000;
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..=GRID {
        let c = a + (b - a) * i as f64 / GRID as f64;
        let (r_min, r_max) = bounds(c, inside, outside, margin);
        let ratio = if r_min > 0.0 { r_max / r_min } else { f64::INFINITY };
        if ratio > 1.0 && best.is_none_or(|(_, _, q)| ratio > q) {
            best = Some((c, pick_radius(r_min, r_max, c), ratio));
        }
    }
    best.map(|(c, r, _)| (c, r))
}

/// The singular points `1/g` (nabla) or `-1/g` (delta) of the exponential
/// kernels over every step of the window.
pub fn reciprocal_graininess(ts: &TimeScale, kind: Direction) -> Vec<Complex64> {
    let sign = match kind {
        Direction::Nabla => 1.0,
        Direction::Delta => -1.0,
    };
    let mut steps = ts.steps();
    steps.sort_by(f64::total_cmp);
    steps.dedup();
    steps.into_iter().map(|g| Complex64::new(sign / g, 0.0)).collect()
}
