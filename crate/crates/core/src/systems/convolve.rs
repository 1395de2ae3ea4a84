//! Generalized shifts, interpolation, convolution and correlation.
//!
//! Shifting a signal by `t_m - t0` multiplies its nabla transform by
//! `e_Δ(t_m, t0; -s)`. Inverting that product gives the shifted samples
//!
//! ```text
//! g_[m](t_n) = Σ_k μ_k g(t_k) Φ(k, m, n),
//! Φ(k, m, n) = -(1/2πi)∮ e_∇(t_{n+1}, t_m; s) / e_∇(t_k, t0; s) ds,
//! ```
//!
//! which collapses to a plain index shift whenever the translation maps
//! instants onto instants.

use num_complex::Complex64;

use crate::calculus::{same_scale, Signal};
use crate::error::{Error, Result};
use crate::timescale::TimeScale;
use crate::transform::contour::Contour;
use crate::transform::residue::{ratio_integral, ratio_integral_quadrature};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How the contour integrals of exponential products are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelMethod {
    /// Closed-form residue sum.
    #[default]
    Exact,
    /// Trapezoidal quadrature on an automatically chosen circle.
    Quadrature { nodes: usize },
}

/// Which convolution algorithm is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvolutionPath {
    /// Index-shift evaluation only; errors on scales that are not closed
    /// under the needed translations.
    #[default]
    Fast,
    /// Falls back to the interpolating kernel when the fast path does not apply.
    General(KernelMethod),
}

/// Product of nabla exponential factors `Π (1 - s g)^{e}` over the steps of
/// a window, plus extra factors with arbitrary graininess.
#[derive(Debug, Clone)]
pub struct ExpProduct<'a> {
    ts: &'a TimeScale,
    exponents: Vec<i32>,
    extra: Vec<(f64, i32)>,
}

impl<'a> ExpProduct<'a> {
    pub fn new(ts: &'a TimeScale) -> Self {
        ExpProduct { ts, exponents: vec![0; ts.len() - 1], extra: Vec::new() }
    }

    /// Multiplies by `e_∇(t_i, t_j; s)^power`.
    pub fn nabla(mut self, i: usize, j: usize, power: i32) -> Self {
        let (lo, hi, sign) = if i >= j { (j, i, -1) } else { (i, j, 1) };
        for l in lo + 1..=hi {
            self.exponents[l - 1] += sign * power;
        }
        self
    }

    /// Multiplies by `(1 - s g)^power`.
    pub fn factor(mut self, g: f64, power: i32) -> Self {
        self.extra.push((g, power));
        self
    }

    fn lists(&self) -> (Vec<f64>, Vec<f64>) {
        let (mut num, mut den) = (Vec::new(), Vec::new());
        let steps = self.exponents.iter().enumerate().map(|(l, &e)| (self.ts.step(l + 1), e));
        for (g, e) in steps.chain(self.extra.iter().copied()) {
            let list = if e > 0 { &mut num } else { &mut den };
            list.extend(std::iter::repeat_n(g, e.unsigned_abs() as usize));
        }
        (num, den)
    }

    /// `-(1/2πi)∮ product ds` around every reciprocal graininess point.
    pub fn integral(&self, method: KernelMethod) -> Result<f64> {
        let (num, den) = self.lists();
        match method {
            KernelMethod::Exact => Ok(ratio_integral(&num, &den)),
            KernelMethod::Quadrature { nodes } => {
                if den.is_empty() {
                    return Ok(0.0);
                }
                let inside: Vec<Complex64> = den.iter().map(|g| Complex64::new(1.0 / g, 0.0)).collect();
                let contour = Contour::auto(&inside, &[], true, nodes)?;
                ratio_integral_quadrature(&num, &den, &contour)
            }
        }
    }
}

/// `Φ(k, m, n)`, the weight of `g(t_k)` in the sample at `t_n` of `g`
/// delayed by `t_m - t0`.
pub fn shift_kernel(ts: &TimeScale, k: usize, m: usize, n: usize, method: KernelMethod) -> Result<f64> {
    if n + 1 >= ts.len() {
        return Err(Error::BoundaryIndex { index: n });
    }
    ExpProduct::new(ts).nabla(n + 1, m, 1).nabla(k, ts.t0_index(), -1).integral(method)
}

fn require_mu(f: &Signal) -> Result<(usize, usize)> {
    let (lo, hi) = f.support().expect("nonzero signal");
    if hi + 1 >= f.len() {
        return Err(Error::SupportTouchesBoundary { lo, hi });
    }
    Ok((lo, hi))
}

/// `g` delayed by `t_m - t0`, sampled at `t_n`.
pub fn shifted_sample(g: &Signal, m: usize, n: usize, method: KernelMethod) -> Result<Complex64> {
    let Some(_) = g.support() else {
        return Ok(ZERO);
    };
    let (lo, hi) = require_mu(g)?;
    let ts = g.scale();
    let mut acc = ZERO;
    for k in lo..=hi {
        let gk = g.value(k);
        if gk != ZERO {
            acc += gk * ts.step(k + 1) * shift_kernel(ts, k, m, n, method)?;
        }
    }
    Ok(acc)
}

/// Value of `f` at `t0 + target`, where `target` is a difference of two
/// instants.
///
/// A target landing on an instant returns that sample. Otherwise a pair
/// `t_n - t_m = target` is used, preferring `t_m` between `t0` and `t_n`,
/// then `t_n` inside the support of `f`, then `m` closest to `t0`. Such a
/// pair reproduces a signal that is constant over a support containing
/// `t0` and `t_n`.
pub fn interpolate(f: &Signal, target: f64, method: KernelMethod) -> Result<Complex64> {
    let ts = f.scale();
    let c = ts.t0_index();
    if let Some(j) = ts.index_of(ts.t0() + target) {
        return Ok(f.value(j));
    }
    let mut pairs: Vec<(usize, usize)> = (0..ts.len())
        .filter_map(|m| ts.index_of(ts.instant(m) + target).filter(|&n| n + 1 < ts.len()).map(|n| (m, n)))
        .collect();
    let (lo, hi) = f.support().unwrap_or((c, c));
    pairs.sort_by_key(|&(m, n)| (!(c.min(n)..=c.max(n)).contains(&m), !(lo..=hi).contains(&n), m.abs_diff(c), m));
    match pairs.first() {
        Some(&(m, n)) => shifted_sample(f, m, n, method),
        None => Err(Error::TargetOffSuperScale { target }),
    }
}

/// `(f ∗ g)(t_n) = Σ_m μ_m f(t_m) g_[m](t_n)`.
pub fn convolve(f: &Signal, g: &Signal, path: ConvolutionPath) -> Result<Signal> {
    same_scale(f, g)?;
    let ts = f.scale_arc().clone();
    let len = ts.len();
    let (Some((flo, fhi)), Some((glo, ghi))) = (f.support(), g.support()) else {
        return Ok(Signal::zeros(ts));
    };
    let c = ts.t0_index() as i64;
    let upper = fhi as i64 + ghi as i64 - c;
    let lower = flo as i64 + glo as i64 - c;
    if let Some(h) = ts.uniform_step() {
        let mut values = vec![ZERO; len];
        for (n, v) in values.iter_mut().enumerate() {
            let mut acc = ZERO;
            for m in flo..=fhi {
                let k = n as i64 - m as i64 + c;
                if (glo as i64..=ghi as i64).contains(&k) {
                    acc += mass(f.value(m), h) * g.value(k as usize);
                }
            }
            *v = acc;
        }
        return Ok(Signal::clipped(ts, values, minkowski(lower, upper, len as i64 - 1)));
    }
    require_mu(f)?;
    require_mu(g)?;
    // either factor may supply the translations
    for (a, sa, b, sb) in [(f, (flo, fhi), g, (glo, ghi)), (g, (glo, ghi), f, (flo, fhi))] {
        if shift_closed(&ts, a, sa, sb) {
            let mut values = vec![ZERO; len];
            for m in sa.0..=sa.1 {
                let w = mass(a.value(m), ts.step(m + 1));
                for k in sb.0..=sb.1 {
                    let n = (k as i64 + m as i64 - c) as usize;
                    values[n] += w * b.value(k);
                }
            }
            return Ok(Signal::clipped(ts, values, minkowski(lower, upper, len as i64 - 1)));
        }
    }
    let ConvolutionPath::General(method) = path else {
        return Err(Error::NotShiftClosed(
            "translations of the kernel do not land on instants; request the general path".into(),
        ));
    };
    let top = upper.min(len as i64 - 2);
    let mut values = vec![ZERO; len];
    for n in 0..=top.max(-1) {
        let n = n as usize;
        let mut acc = ZERO;
        for m in flo..=fhi {
            let fm = f.value(m);
            if fm != ZERO {
                acc += fm * ts.step(m + 1) * shifted_sample(g, m, n, method)?;
            }
        }
        values[n] = acc;
    }
    Signal::new(ts, values)
}

/// `v·step`, evaluated so that an impulse amplitude `1/step` gives exactly one.
fn mass(v: Complex64, step: f64) -> Complex64 {
    v / (1.0 / step)
}

fn minkowski(lower: i64, upper: i64, last: i64) -> Option<(usize, usize)> {
    let (lo, hi) = (lower.max(0), upper.min(last));
    (lo <= hi).then_some((lo as usize, hi as usize))
}

/// True when translating the instants between `t0` and `t_k`, `t_{k+1}` by
/// `t_m - t0` lands on instants for every nonzero sample `m` of `f` and `k`
/// in the second; then every `Φ(k, m, ·)` is a single spike.
fn shift_closed(ts: &TimeScale, f: &Signal, (flo, fhi): (usize, usize), (glo, ghi): (usize, usize)) -> bool {
    let c = ts.t0_index();
    let len = ts.len() as i64;
    let tol = ts.position_tolerance();
    let (ilo, ihi) = (c.min(glo), c.max(ghi + 1));
    (flo..=fhi).filter(|&m| f.value(m) != ZERO).all(|m| {
        let shift = ts.instant(m) - ts.t0();
        (ilo..=ihi).all(|i| {
            let j = i as i64 + m as i64 - c as i64;
            (0..len).contains(&j) && (ts.instant(j as usize) - ts.instant(i) - shift).abs() <= 4.0 * tol
        })
    })
}

/// `t0 + d ↦ g(t0 - d)`, the time reversal about `t0`.
///
/// On scales symmetric about `t0` (uniform scales included) this permutes
/// samples and the nabla transform of the result is `G_Δ(-s)`. Elsewhere the
/// general path evaluates `g(t0 - d)` with [`interpolate`]; the reversed
/// instants always lie on the super time scale.
pub fn reflect(g: &Signal, path: ConvolutionPath) -> Result<Signal> {
    let ts = g.scale_arc().clone();
    let len = ts.len();
    let Some((lo, hi)) = g.support() else {
        return Ok(Signal::zeros(ts));
    };
    let c = ts.t0_index();
    let tol = ts.position_tolerance();
    let mirror = |i: usize| -> Option<usize> {
        let j = 2 * c as i64 - i as i64;
        (0..len as i64).contains(&j).then_some(j as usize)
    };
    let from = c.min(lo).saturating_sub(1);
    let symmetric = (from..=c.max(hi))
        .all(|i| mirror(i).is_some_and(|j| (ts.instant(j) - ts.t0() - (ts.t0() - ts.instant(i))).abs() <= 4.0 * tol));
    if symmetric || ts.uniform_step().is_some() {
        if let (Some(a), Some(b)) = (mirror(hi), mirror(lo)) {
            let values = (0..len).map(|j| mirror(j).map_or(ZERO, |k| g.value(k))).collect();
            return Ok(Signal::clipped(ts, values, Some((a, b))));
        }
    }
    let ConvolutionPath::General(method) = path else {
        return Err(Error::ReflectionOffGrid(format!(
            "support [{lo}, {hi}] has no mirror image about t0 on this scale"
        )));
    };
    let mut values = Vec::with_capacity(len);
    for n in 0..len {
        values.push(interpolate(g, ts.t0() - ts.instant(n), method)?);
    }
    Signal::new(ts, values)
}

/// Cross-correlation `f ⋆ g = f ∗ reflect(g)`; on symmetric scales its nabla
/// transform is `F_∇(s)·G_Δ(-s)`.
pub fn correlate(f: &Signal, g: &Signal, path: ConvolutionPath) -> Result<Signal> {
    same_scale(f, g)?;
    convolve(f, &reflect(g, path)?, path)
}
