//! Signals and systems on nonuniform discrete time scales.
//!
//! The crate works on finite windows of strictly increasing instants and
//! provides the causal (nabla) and anti-causal (delta) calculus on them:
//! derivatives and anti-derivatives, the generalized exponentials, the
//! matching Laplace-type transforms with exact series and contour
//! inversion, rational transfer functions, convolution, fractional
//! derivatives and conversion to uniform grids.
//!
//! ```
//! use chronoscale::{TimeScale, Direction, exponential::exp};
//! use num_complex::Complex64;
//!
//! let ts = TimeScale::new(vec![0.0, 1.0, 1.5], 0).unwrap();
//! let e = exp(&ts, 2, 0, Complex64::new(0.5, 0.0), Direction::Nabla).unwrap();
//! assert!((e.re - 8.0 / 3.0).abs() < 1e-15);
//! ```

pub mod calculus;
pub mod cli;
pub mod error;
pub mod exponential;
pub mod fractional;
pub mod io;
pub mod poly;
pub mod systems;
pub mod timescale;
pub mod transform;

pub use calculus::Signal;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use timescale::{Direction, SuperTimeScale, TimeScale};

/// Fixed-order pairwise sum; the grouping depends only on the length.
pub(crate) fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `x · 2^k` without intermediate overflow for any representable result.
pub(crate) fn ldexp(mut x: f64, mut k: i32) -> f64 {
    const BIG: f64 = 1.0715086071862673e301; // 2^1000
    const SMALL: f64 = 9.332636185032189e-302; // 2^-1000
    while k > 1000 {
        x *= BIG;
        k -= 1000;
    }
    while k < -1000 {
        x *= SMALL;
        k += 1000;
    }
    x * 2f64.powi(k)
}

/// Complex value kept as `mantissa · 2^exponent` so that long products of
/// factors neither overflow nor underflow.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    mantissa: Complex64,
    exponent: i32,
}

impl Scaled {
    pub(crate) fn one() -> Self {
        Scaled { mantissa: Complex64::new(1.0, 0.0), exponent: 0 }
    }

    pub(crate) fn mul(self, z: Complex64) -> Self {
        Scaled { mantissa: self.mantissa * z, exponent: self.exponent }.normalized()
    }

    pub(crate) fn div(self, z: Complex64) -> Self {
        Scaled { mantissa: self.mantissa / z, exponent: self.exponent }.normalized()
    }

    fn normalized(mut self) -> Self {
        let a = self.mantissa.norm();
        if a != 0.0 && a.is_finite() && !(1e-150..=1e150).contains(&a) {
            let k = a.log2().floor() as i32;
            self.mantissa = self.mantissa.unscale(2f64.powi(k.clamp(-1000, 1000)));
            self.exponent += k.clamp(-1000, 1000);
        }
        self
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.mantissa.norm_sqr() == 0.0
    }
}

/// Sum of scaled terms, rescaled to a common exponent before a pairwise sum.
pub(crate) fn scaled_sum(terms: &[Scaled]) -> Complex64 {
    let top = terms.iter().filter(|t| !t.is_zero()).map(|t| t.exponent).max();
    let Some(top) = top else {
        return Complex64::new(0.0, 0.0);
    };
    let aligned: Vec<Complex64> = terms
        .iter()
        .map(|t| {
            let k = t.exponent - top;
            Complex64::new(ldexp(t.mantissa.re, k), ldexp(t.mantissa.im, k))
        })
        .collect();
    let s = pairwise_sum(&aligned);
    Complex64::new(ldexp(s.re, top), ldexp(s.im, top))
}
