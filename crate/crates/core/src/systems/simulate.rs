//! Time-domain marching solver for linear dynamic equations
//! `Σ a_k D^k y = Σ b_k D^k x` with zero initial state.

use num_complex::Complex64;

use crate::calculus::{derivative, sigma_difference, Signal};
use crate::error::{Error, Result};
use crate::poly;
use crate::timescale::Direction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const SINGULAR_RTOL: f64 = 1e-14;

/// Which difference operator `D` the equation is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimulationRule {
    /// The nabla derivative, `(y_n - y_{n-1}) / ν_n`.
    #[default]
    Nabla,
    /// `(y_n - y_{n-1}) / μ_n`, whose nabla transform is `s·Y(s)` on every
    /// scale; its impulse response is the inverse of the transfer function.
    TransformMatched,
}

impl std::str::FromStr for SimulationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nabla" => Ok(SimulationRule::Nabla),
            "matched" => Ok(SimulationRule::TransformMatched),
            other => Err(Error::Parse(format!("unknown simulation rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub output: Signal,
    /// Number of marching steps taken.
    pub steps: usize,
    /// Smallest `|Σ a_k α_k| / Σ |a_k α_k|` seen; the step is singular when
    /// this drops below `1e-14`.
    pub min_guard: f64,
}

/// Marches `n` forward from the start of `x`'s support.
///
/// The k-th difference of `y` at `t_n` is affine in `y_n`,
/// `α_k y_n + β_k`, with `α_k = α_{k-1}/step_n` and
/// `β_k = (β_{k-1} - D^{k-1}y(t_{n-1}))/step_n`, so each step solves one
/// scalar equation.
pub fn simulate(a: &[Complex64], b: &[Complex64], x: &Signal, rule: SimulationRule) -> Result<Simulation> {
    let a = poly::trim(a);
    let b = poly::trim(b);
    let Some(order) = poly::degree(&a) else {
        return Err(Error::DegenerateDenominator("all equation coefficients a_k are zero".into()));
    };
    let ts = x.scale_arc().clone();
    let len = ts.len();
    let Some((lo, _)) = x.support() else {
        return Ok(Simulation { output: Signal::zeros(ts), steps: 0, min_guard: 1.0 });
    };
    let input_order = poly::degree(&b).unwrap_or(0);
    let history = order.max(input_order).max(1);
    if lo < history {
        return Err(Error::WindowTooSmall(format!(
            "input starts at index {lo}; the equation needs {history} earlier instants"
        )));
    }
    let end = match rule {
        SimulationRule::Nabla => len - 1,
        SimulationRule::TransformMatched => len - 2,
    };
    if lo > end {
        return Err(Error::WindowTooSmall(format!("no instant after index {lo} to march over")));
    }
    // D^k x for k = 0..=input_order
    let mut inputs = vec![x.clone()];
    for k in 1..=input_order as i64 {
        inputs.push(match rule {
            SimulationRule::Nabla => derivative(x, Direction::Nabla, k)?,
            SimulationRule::TransformMatched => sigma_difference(x, k)?,
        });
    }
    let mut y = vec![ZERO; len];
    let mut prev = vec![ZERO; order];
    let mut alpha = vec![ZERO; order + 1];
    let mut beta = vec![ZERO; order + 1];
    let mut min_guard = f64::INFINITY;
    for (n, slot) in y.iter_mut().enumerate().take(end + 1).skip(lo) {
        let step = match rule {
            SimulationRule::Nabla => ts.step(n),
            SimulationRule::TransformMatched => ts.step(n + 1),
        };
        alpha[0] = Complex64::new(1.0, 0.0);
        beta[0] = ZERO;
        for k in 1..=order {
            alpha[k] = alpha[k - 1] / step;
            beta[k] = (beta[k - 1] - prev[k - 1]) / step;
        }
        let lead: Complex64 = a.iter().zip(&alpha).map(|(ak, al)| ak * al).sum();
        let size: f64 = a.iter().zip(&alpha).map(|(ak, al)| (ak * al).norm()).sum();
        let guard = lead.norm() / size;
        min_guard = min_guard.min(guard);
        if guard < SINGULAR_RTOL {
            return Err(Error::SingularStep { index: n });
        }
        let rhs: Complex64 = b.iter().zip(&inputs).map(|(bk, d)| bk * d.value(n)).sum();
        let offset: Complex64 = a.iter().zip(&beta).map(|(ak, be)| ak * be).sum();
        let yn = (rhs - offset) / lead;
        *slot = yn;
        for k in 0..order {
            prev[k] = alpha[k] * yn + beta[k];
        }
    }
    let output = Signal::with_support(ts, y, Some((lo, end)))?;
    Ok(Simulation { output, steps: end - lo + 1, min_guard })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timescale::TimeScale;
    use crate::transform::impulse;
    use std::sync::Arc;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn hz(h: f64, before: usize, after: usize) -> Arc<TimeScale> {
        let t = (0..before + after + 1).map(|n| (n as f64 - before as f64) * h).collect();
        Arc::new(TimeScale::new(t, before).unwrap())
    }

    #[test]
    fn first_order_impulse_response_by_hand() {
        let (h, a) = (0.5, 0.8);
        let ts = hz(h, 2, 20);
        let x = impulse(&ts).unwrap();
        let sim = simulate(&[r(a), r(1.0)], &[r(1.0)], &x, SimulationRule::Nabla).unwrap();
        for n in 0..=20 {
            let expect = (1.0 + a * h).powi(-(n as i32 + 1));
            assert!((sim.output.value(n + 2) - r(expect)).norm() < 1e-14 * expect);
        }
        assert_eq!(sim.steps, 21);
        assert!(sim.min_guard > 0.1);
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let ts = hz(1.0, 2, 5);
        let sim = simulate(&[r(1.0), r(1.0)], &[r(1.0)], &Signal::zeros(ts), SimulationRule::Nabla).unwrap();
        assert!(sim.output.is_zero());
    }

    #[test]
    fn singular_step_is_reported() {
        // a(s) = s - 1 vanishes at 1/ν with ν = 1
        let ts = hz(1.0, 2, 5);
        let x = impulse(&ts).unwrap();
        assert_eq!(
            simulate(&[r(-1.0), r(1.0)], &[r(1.0)], &x, SimulationRule::Nabla),
            Err(Error::SingularStep { index: 2 })
        );
    }

    #[test]
    fn history_is_required() {
        let ts = hz(1.0, 1, 5);
        let x = impulse(&ts).unwrap();
        assert!(matches!(
            simulate(&[r(1.0), r(2.0), r(1.0)], &[r(1.0)], &x, SimulationRule::Nabla),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn rules_agree_on_uniform_scales() {
        let ts = hz(0.25, 3, 30);
        let x =
            Signal::from_fn(ts.clone(), |n, _| if (3..9).contains(&n) { Complex64::new(n as f64, 1.0) } else { ZERO })
                .unwrap();
        let a = [r(2.0), r(3.0), r(1.0)];
        let b = [r(1.0), r(0.5)];
        let p = simulate(&a, &b, &x, SimulationRule::Nabla).unwrap().output;
        let q = simulate(&a, &b, &x, SimulationRule::TransformMatched).unwrap().output;
        for n in 0..ts.len() - 1 {
            assert!((p.value(n) - q.value(n)).norm() < 1e-12 * (1.0 + p.value(n).norm()));
        }
    }
}
