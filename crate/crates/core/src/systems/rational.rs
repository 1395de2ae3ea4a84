//! Rational transfer functions with per-pole region-of-convergence tags.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Roc {
    Causal,
    Anticausal,
}

impl std::str::FromStr for Roc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "causal" => Ok(Roc::Causal),
            "anticausal" => Ok(Roc::Anticausal),
            other => Err(Error::Parse(format!("unknown roc `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: Complex64,
    pub multiplicity: usize,
    pub roc: Option<Roc>,
}

/// `H(s) = Σ b_k s^k / Σ a_k s^k` with monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTransform {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    poles: Vec<Pole>,
}

impl RationalTransform {
    /// Normalizes to a monic denominator and finds the poles; every pole is
    /// tagged causal.
    pub fn new(num: &[Complex64], den: &[Complex64]) -> Result<Self> {
        let (num, den) = normalize(num, den)?;
        let poles = poly::roots_with_multiplicity(&den)
            .into_iter()
            .map(|(location, multiplicity)| Pole { location, multiplicity, roc: Some(Roc::Causal) })
            .collect();
        Ok(RationalTransform { num, den, poles })
    }

    /// Uses caller-supplied poles, which must reproduce the denominator.
    pub fn with_poles(num: &[Complex64], den: &[Complex64], poles: Vec<Pole>) -> Result<Self> {
        let (num, den) = normalize(num, den)?;
        let roots: Vec<(Complex64, usize)> = poles.iter().map(|p| (p.location, p.multiplicity)).collect();
        let expanded = poly::from_roots(&roots);
        let scale = den.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let ok = expanded.len() == den.len()
            && expanded.iter().zip(&den).all(|(a, b)| (a - b).norm() <= poly::REPRODUCTION_RTOL * scale);
        if !ok {
            return Err(Error::DegenerateDenominator("listed poles do not reproduce the denominator".into()));
        }
        Ok(RationalTransform { num, den, poles })
    }

    /// Builds `num/den` from poles alone: `den = Π (s - p)^m`.
    pub fn from_poles(num: &[Complex64], poles: Vec<Pole>) -> Result<Self> {
        let roots: Vec<(Complex64, usize)> = poles.iter().map(|p| (p.location, p.multiplicity)).collect();
        let den = poly::from_roots(&roots);
        Self::with_poles(num, &den, poles)
    }

    pub fn num(&self) -> &[Complex64] {
        &self.num
    }

    pub fn den(&self) -> &[Complex64] {
        &self.den
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn num_degree(&self) -> usize {
        poly::degree(&self.num).unwrap_or(0)
    }

    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    pub fn is_strictly_proper(&self) -> bool {
        poly::degree(&self.num).is_none_or(|m| m < self.den_degree())
    }

    pub fn set_roc(&mut self, roc: Roc) {
        for p in &mut self.poles {
            p.roc = Some(roc);
        }
    }

    pub fn set_pole_roc(&mut self, index: usize, roc: Option<Roc>) {
        self.poles[index].roc = roc;
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        poly::eval(&self.num, s) / poly::eval(&self.den, s)
    }

    /// Partial-fraction coefficients: entry `[i][r]` multiplies
    /// `(s - p_i)^{-(r+1)}`.
    pub fn partial_fractions(&self) -> Vec<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.poles.len());
        for (i, pi) in self.poles.iter().enumerate() {
            let m = pi.multiplicity;
            let shifted_num = poly::taylor_shift(&self.num, pi.location);
            let mut q = vec![ONE];
            for (k, pk) in self.poles.iter().enumerate() {
                if k != i {
                    for _ in 0..pk.multiplicity {
                        q = poly::mul(&q, &[pi.location - pk.location, ONE]);
                    }
                }
            }
            let t = poly::series_div(&shifted_num, &q, m);
            // t[r] multiplies (s - p)^{r - m}
            out.push((0..m).map(|j| t[m - 1 - j]).collect());
        }
        out
    }
}

fn normalize(num: &[Complex64], den: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let den = poly::trim(den);
    let Some(n) = poly::degree(&den) else {
        return Err(Error::DegenerateDenominator("all denominator coefficients are zero".into()));
    };
    if n == 0 {
        return Err(Error::DegenerateDenominator("the denominator has no poles".into()));
    }
    let lead = den[n];
    let mut num: Vec<Complex64> = poly::trim(num).iter().map(|b| b / lead).collect();
    if num.is_empty() {
        num.push(ZERO);
    }
    Ok((num, den.iter().map(|a| a / lead).collect()))
}

/// Transfer function of `Σ a_k y^{∇^k} = Σ b_k x^{∇^k}`: `H = Σ b_k s^k / Σ a_k s^k`.
pub fn transfer_function(a: &[Complex64], b: &[Complex64]) -> Result<RationalTransform> {
    RationalTransform::new(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn linear_and_quadratic_poles() {
        let h = transfer_function(&[r(3.0), r(1.0)], &[r(1.0)]).unwrap();
        assert_eq!(h.poles().len(), 1);
        assert!((h.poles()[0].location - r(-3.0)).norm() < 1e-15);
        let h = transfer_function(&[r(2.0), r(3.0), r(1.0)], &[r(1.0)]).unwrap();
        let mut p: Vec<f64> = h.poles().iter().map(|p| p.location.re).collect();
        p.sort_by(f64::total_cmp);
        assert!((p[0] + 2.0).abs() < 1e-14 && (p[1] + 1.0).abs() < 1e-14);
        assert!(h.poles().iter().all(|p| p.roc == Some(Roc::Causal)));
    }

    #[test]
    fn degenerate_denominators() {
        assert!(matches!(transfer_function(&[], &[r(1.0)]), Err(Error::DegenerateDenominator(_))));
        assert!(matches!(transfer_function(&[ZERO, ZERO], &[r(1.0)]), Err(Error::DegenerateDenominator(_))));
        assert!(matches!(transfer_function(&[r(2.0)], &[r(1.0)]), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn normalization_makes_denominator_monic() {
        let h = transfer_function(&[r(2.0), r(2.0)], &[r(4.0)]).unwrap();
        assert_eq!(h.den(), &[r(1.0), r(1.0)]);
        assert_eq!(h.num(), &[r(2.0)]);
        assert!(h.is_strictly_proper());
        let g = transfer_function(&[r(1.0), r(1.0)], &[ZERO, r(1.0)]).unwrap();
        assert!(!g.is_strictly_proper());
    }

    #[test]
    fn partial_fractions_reconstruct() {
        // (s + 3) / ((s + 1)^2 (s - 2))
        let poles = vec![
            Pole { location: r(-1.0), multiplicity: 2, roc: Some(Roc::Causal) },
            Pole { location: r(2.0), multiplicity: 1, roc: Some(Roc::Anticausal) },
        ];
        let h = RationalTransform::from_poles(&[r(3.0), r(1.0)], poles).unwrap();
        let pf = h.partial_fractions();
        for s in [Complex64::new(0.3, 0.7), Complex64::new(-2.0, 1.0), r(5.0)] {
            let mut v = ZERO;
            for (p, c) in h.poles().iter().zip(&pf) {
                for (k, ck) in c.iter().enumerate() {
                    v += ck / (s - p.location).powi(k as i32 + 1);
                }
            }
            assert!((v - h.eval(s)).norm() < 1e-13 * h.eval(s).norm());
        }
    }

    #[test]
    fn listed_poles_must_match() {
        let bad = vec![Pole { location: r(-2.0), multiplicity: 1, roc: None }];
        assert!(RationalTransform::with_poles(&[r(1.0)], &[r(1.0), r(1.0)], bad).is_err());
    }
}
