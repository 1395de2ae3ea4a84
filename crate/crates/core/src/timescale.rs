//! Discrete nonuniform time scales.
//!
//! A [`TimeScale`] is a finite, strictly increasing window of instants
//! `t_0 < t_1 < ... < t_{L-1}` together with the index of the reference
//! instant. Every graininess quantity is a single subtraction of stored
//! instants, so `ν_n = t_n - t_{n-1}` and `μ_n = t_{n+1} - t_n` are exact
//! up to one rounding.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Causal (`Nabla`, backward) or anti-causal (`Delta`, forward) flavour of
/// an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Nabla,
    Delta,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nabla" => Ok(Direction::Nabla),
            "delta" => Ok(Direction::Delta),
            other => Err(Error::Parse(format!("unknown direction `{other}`"))),
        }
    }
}

/// Relative tolerance used whenever two real instants or steps are
/// compared for identity.
pub(crate) const IDENTITY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TimeScaleFile {
    instants: Vec<f64>,
    t0_index: usize,
}

/// Ordered instants with a reference index.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    instants: Vec<f64>,
    t0_index: usize,
}

impl TimeScale {
    pub fn new(instants: Vec<f64>, t0_index: usize) -> Result<Self> {
        if instants.len() < 2 {
            return Err(Error::TooShort { len: instants.len() });
        }
        if t0_index >= instants.len() {
            return Err(Error::IndexOutOfRange { index: t0_index, len: instants.len() });
        }
        for (i, t) in instants.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::Parse(format!("instant {i} is not finite")));
            }
        }
        if let Some(i) = (1..instants.len()).find(|&i| instants[i] <= instants[i - 1]) {
            return Err(Error::NonMonotone { index: i });
        }
        Ok(TimeScale { instants, t0_index })
    }

    pub fn len(&self) -> usize {
        self.instants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instants.is_empty()
    }

    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    pub fn instant(&self, n: usize) -> f64 {
        self.instants[n]
    }

    pub fn t0_index(&self) -> usize {
        self.t0_index
    }

    pub fn t0(&self) -> f64 {
        self.instants[self.t0_index]
    }

    /// `t_i - t_{i-1}` for `1 <= i < len`; the step that ends at `t_i`.
    #[inline]
    pub(crate) fn step(&self, i: usize) -> f64 {
        self.instants[i] - self.instants[i - 1]
    }

    /// All consecutive steps, `steps()[i - 1] = t_i - t_{i-1}`.
    pub fn steps(&self) -> Vec<f64> {
        self.instants.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn graininess(&self, n: usize, direction: Direction) -> Result<f64> {
        self.check_index(n)?;
        match direction {
            Direction::Nabla if n >= 1 => Ok(self.step(n)),
            Direction::Delta if n + 1 < self.len() => Ok(self.step(n + 1)),
            _ => Err(Error::BoundaryIndex { index: n }),
        }
    }

    /// Backward graininess `ν_n = t_n - t_{n-1}`.
    pub fn nu(&self, n: usize) -> Result<f64> {
        self.graininess(n, Direction::Nabla)
    }

    /// Forward graininess `μ_n = t_{n+1} - t_n`.
    pub fn mu(&self, n: usize) -> Result<f64> {
        self.graininess(n, Direction::Delta)
    }

    /// `ν^k(t_from) = t_from - t_{from-k}` or `μ^k(t_from) = t_{from+k} - t_from`,
    /// computed as a single difference of stored instants.
    pub fn cumulative_graininess(&self, from: usize, steps: usize, direction: Direction) -> Result<f64> {
        self.check_index(from)?;
        if steps == 0 {
            return Ok(0.0);
        }
        match direction {
            Direction::Nabla => {
                if steps > from {
                    return Err(Error::BoundaryIndex { index: from });
                }
                Ok(self.instants[from] - self.instants[from - steps])
            }
            Direction::Delta => {
                if from + steps >= self.len() {
                    return Err(Error::BoundaryIndex { index: from });
                }
                Ok(self.instants[from + steps] - self.instants[from])
            }
        }
    }

    pub fn h_min(&self) -> f64 {
        self.instants.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn h_max(&self) -> f64 {
        self.instants.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// The common step when every graininess agrees to relative `1e-12`.
    pub fn uniform_step(&self) -> Option<f64> {
        let (lo, hi) = (self.h_min(), self.h_max());
        if hi - lo <= IDENTITY_RTOL * hi {
            Some(0.5 * (lo + hi))
        } else {
            None
        }
    }

    /// Absolute tolerance for comparing positions on this scale.
    pub(crate) fn position_tolerance(&self) -> f64 {
        let first = self.instants[0];
        let last = self.instants[self.len() - 1];
        IDENTITY_RTOL * first.abs().max(last.abs()).max(last - first)
    }

    /// Index of the instant equal to `t` (to the identity tolerance).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = self.position_tolerance();
        let pos = self.instants.partition_point(|&x| x < t - tol);
        (pos < self.len() && (self.instants[pos] - t).abs() <= tol).then_some(pos)
    }

    /// The scale `a·T` with the same reference index.
    pub fn scaled(&self, a: f64) -> Result<TimeScale> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidStep { step: a });
        }
        TimeScale::new(self.instants.iter().map(|t| a * t).collect(), self.t0_index)
    }

    pub fn super_time_scale(&self) -> SuperTimeScale {
        super_time_scale(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TimeScaleFile { instants: self.instants.clone(), t0_index: self.t0_index })
            .expect("time scale serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TimeScaleFile = serde_json::from_str(text)?;
        TimeScale::new(file.instants, file.t0_index)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub(crate) fn check_index(&self, n: usize) -> Result<()> {
        if n < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: n, len: self.len() })
        }
    }
}

pub fn build_time_scale(instants: &[f64], t0_index: usize) -> Result<TimeScale> {
    TimeScale::new(instants.to_vec(), t0_index)
}

/// The set of all pairwise differences `t_n - t_k`, sorted, with the index
/// of `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperTimeScale {
    instants: Vec<f64>,
    origin_index: usize,
}

impl SuperTimeScale {
    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    pub fn origin_index(&self) -> usize {
        self.origin_index
    }

    pub fn len(&self) -> usize {
        self.instants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instants.is_empty()
    }

    /// Membership test with absolute tolerance `tol`.
    pub fn contains(&self, d: f64, tol: f64) -> bool {
        let pos = self.instants.partition_point(|&x| x < d - tol);
        pos < self.len() && (self.instants[pos] - d).abs() <= tol
    }
}

pub fn super_time_scale(ts: &TimeScale) -> SuperTimeScale {
    let t = ts.instants();
    let tol = ts.position_tolerance();
    // Only non-negative differences are enumerated; the negative half is the
    // mirror image, which keeps the result exactly negation-symmetric.
    let mut positive: Vec<f64> = Vec::with_capacity(t.len() * (t.len() - 1) / 2);
    for n in 0..t.len() {
        for k in 0..n {
            positive.push(t[n] - t[k]);
        }
    }
    positive.sort_by(f64::total_cmp);
    let mut dedup: Vec<f64> = Vec::with_capacity(positive.len());
    for d in positive {
        match dedup.last() {
            Some(&last) if d - last <= tol => {}
            _ => dedup.push(d),
        }
    }
    let mut instants: Vec<f64> = dedup.iter().rev().map(|d| -d).collect();
    let origin_index = instants.len();
    instants.push(0.0);
    instants.extend(dedup);
    SuperTimeScale { instants, origin_index }
}

/// Uniform scale `{t_0 + n·h : n_min <= n <= n_max}` whose reference index
/// sits at `n = 0`.
pub fn uniform_grid(ts: &TimeScale, h: f64, n_min: i64, n_max: i64) -> Result<TimeScale> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep { step: h });
    }
    if n_min > 0 || n_max < 0 {
        return Err(Error::WindowTooSmall(format!("uniform grid range {n_min}..={n_max} must contain 0")));
    }
    let origin = ts.t0();
    let instants = (n_min..=n_max).map(|n| origin + n as f64 * h).collect();
    TimeScale::new(instants, (-n_min) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_scale_has_unit_graininess() {
        let ts = build_time_scale(&[0.0, 1.0, 2.0, 3.0], 0).unwrap();
        for n in 1..4 {
            assert_eq!(ts.nu(n).unwrap(), 1.0);
        }
        for n in 0..3 {
            assert_eq!(ts.mu(n).unwrap(), 1.0);
        }
        assert_eq!(ts.uniform_step(), Some(1.0));
    }

    #[test]
    fn construction_errors() {
        assert!(build_time_scale(&[-1.0, 0.0, 0.5, 1.5], 1).is_ok());
        assert_eq!(build_time_scale(&[0.0, 1.0, 1.0], 0), Err(Error::NonMonotone { index: 2 }));
        assert_eq!(build_time_scale(&[0.0], 0), Err(Error::TooShort { len: 1 }));
        assert_eq!(build_time_scale(&[0.0, 1.0], 2), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn graininess_examples() {
        let ts = build_time_scale(&[0.0, 1.0, 1.5], 0).unwrap();
        assert_eq!(ts.graininess(2, Direction::Nabla).unwrap(), 0.5);
        assert_eq!(ts.graininess(1, Direction::Delta).unwrap(), 0.5);
        let two = build_time_scale(&[0.0, 1.0], 0).unwrap();
        assert_eq!(two.graininess(0, Direction::Nabla), Err(Error::BoundaryIndex { index: 0 }));
        assert_eq!(two.graininess(1, Direction::Delta), Err(Error::BoundaryIndex { index: 1 }));
        let half = uniform_grid(&two, 0.5, -3, 3).unwrap();
        assert_eq!(half.nu(3).unwrap(), 0.5);
    }

    #[test]
    fn cumulative_graininess_examples() {
        let hz = build_time_scale(&[0.0, 1.0, 2.0, 3.0, 4.0], 0).unwrap();
        assert_eq!(hz.cumulative_graininess(0, 3, Direction::Delta).unwrap(), 3.0);
        assert_eq!(hz.cumulative_graininess(2, 0, Direction::Nabla).unwrap(), 0.0);
        let ts = build_time_scale(&[0.0, 1.0, 1.5, 3.0], 0).unwrap();
        assert_eq!(ts.cumulative_graininess(3, 2, Direction::Nabla).unwrap(), 2.0);
        assert_eq!(ts.cumulative_graininess(1, 2, Direction::Nabla), Err(Error::BoundaryIndex { index: 1 }));
    }

    #[test]
    fn super_scale_examples() {
        let s = build_time_scale(&[0.0, 1.0, 2.0], 0).unwrap().super_time_scale();
        assert_eq!(s.instants(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(s.origin_index(), 2);
        let s = build_time_scale(&[0.0, 1.0, 2.5], 0).unwrap().super_time_scale();
        assert_eq!(s.instants(), &[-2.5, -1.5, -1.0, 0.0, 1.0, 1.5, 2.5]);
    }

    #[test]
    fn uniform_grid_examples() {
        let base = build_time_scale(&[0.0, 1.0], 0).unwrap();
        let g = uniform_grid(&base, 1.0, -2, 2).unwrap();
        assert_eq!(g.instants(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(g.t0_index(), 2);
        let g = uniform_grid(&base, 0.25, 0, 3).unwrap();
        assert_eq!(g.instants(), &[0.0, 0.25, 0.5, 0.75]);
        assert_eq!(uniform_grid(&base, 0.0, 0, 3), Err(Error::InvalidStep { step: 0.0 }));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let ts = build_time_scale(&[-0.1, 0.2, 0.30000000000000004, 1.0 / 3.0], 1).unwrap();
        let back = TimeScale::from_json(&ts.to_json()).unwrap();
        assert_eq!(back, ts);
        for (a, b) in back.instants().iter().zip(ts.instants()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scale() -> impl Strategy<Value = TimeScale> {
            (prop::collection::vec(0.05f64..3.0, 1..24), -5.0f64..5.0).prop_flat_map(|(steps, start)| {
                let mut t = vec![start];
                for s in &steps {
                    t.push(t.last().unwrap() + s);
                }
                let len = t.len();
                (Just(t), 0..len).prop_map(|(t, i)| TimeScale::new(t, i).unwrap())
            })
        }

        proptest! {
            #[test]
            fn nabla_at_next_equals_delta_here(ts in scale()) {
                for n in 0..ts.len() - 1 {
                    prop_assert_eq!(ts.nu(n + 1).unwrap(), ts.mu(n).unwrap());
                }
            }

            #[test]
            fn cumulative_is_single_difference(ts in scale(), k in 0usize..8) {
                let n = ts.len() - 1;
                if k <= n {
                    let c = ts.cumulative_graininess(n, k, Direction::Nabla).unwrap();
                    prop_assert_eq!(c, ts.instant(n) - ts.instant(n - k));
                    let sum: f64 = (n - k + 1..=n).map(|i| ts.nu(i).unwrap()).sum();
                    prop_assert!((c - sum).abs() <= 1e-12 * (1.0 + c.abs()));
                }
            }

            #[test]
            fn super_scale_is_symmetric_and_contains_shifted_parent(ts in scale()) {
                let s = ts.super_time_scale();
                let tol = ts.position_tolerance();
                for d in s.instants() {
                    prop_assert!(s.contains(-d, tol));
                }
                for t in ts.instants() {
                    prop_assert!(s.contains(t - ts.t0(), 4.0 * tol));
                }
                prop_assert_eq!(s.instants()[s.origin_index()], 0.0);
            }
        }
    }
}
