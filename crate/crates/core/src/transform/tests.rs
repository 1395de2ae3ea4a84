use super::*;
use crate::calculus::{derivative, sigma_difference};
use crate::systems::rational::Pole;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hz(h: f64, before: usize, after: usize) -> Arc<TimeScale> {
    let t = (0..before + after + 1).map(|n| (n as f64 - before as f64) * h).collect();
    Arc::new(TimeScale::new(t, before).unwrap())
}

fn random_scale(rng: &mut ChaCha8Rng, len: usize, c: usize, g: (f64, f64)) -> Arc<TimeScale> {
    let mut t = vec![0.0];
    for _ in 1..len {
        let last = t[t.len() - 1];
        t.push(last + rng.gen_range(g.0..g.1));
    }
    let shift = t[c];
    Arc::new(TimeScale::new(t.into_iter().map(|x| x - shift).collect(), c).unwrap())
}

fn random_signal(rng: &mut ChaCha8Rng, ts: &Arc<TimeScale>, lo: usize, hi: usize) -> Signal {
    let values = (0..ts.len())
        .map(|n| if (lo..=hi).contains(&n) { cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) } else { ZERO })
        .collect();
    Signal::new(ts.clone(), values).unwrap()
}

fn causal_pole(p: Complex64) -> RationalTransform {
    RationalTransform::from_poles(&[ONE], vec![Pole { location: p, multiplicity: 1, roc: Some(Roc::Causal) }]).unwrap()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn impulse_amplitudes() {
    let ts = hz(1.0, 3, 3);
    assert_eq!(impulse(&ts).unwrap().value(3), ONE);
    let ts = Arc::new(TimeScale::new(vec![0.0, 0.5, 1.5], 0).unwrap());
    let d = impulse(&ts).unwrap();
    assert_eq!(d.value(0), cx(2.0, 0.0));
    assert_eq!(d.support(), Some((0, 0)));
}

#[test]
fn impulse_transforms_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let c = rng.gen_range(1..10);
        let ts = random_scale(&mut rng, 12, c, (0.1, 2.0));
        let d = impulse(&ts).unwrap();
        let s = cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        assert!(close(direct_transform(&d, s, Direction::Nabla).unwrap(), ONE, 1e-15));
        let dd = impulse_for(&ts, Direction::Delta).unwrap();
        assert!(close(direct_transform(&dd, s, Direction::Delta).unwrap(), ONE, 1e-15));
    }
}

#[test]
fn zero_signal_transforms_to_zero() {
    let ts = hz(0.5, 2, 4);
    assert_eq!(direct_transform(&Signal::zeros(ts), cx(0.3, 1.0), Direction::Nabla).unwrap(), ZERO);
}

#[test]
fn matches_z_transform() {
    let h = 0.25;
    let ts = hz(h, 1, 33);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_signal(&mut rng, &ts, 1, 32);
    for _ in 0..10 {
        let s = cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let z = ONE / (ONE - s * h);
        let series: Complex64 = (0..32).map(|n| f.value(n + 1) * z.powi(-(n as i32))).sum();
        let ours = direct_transform(&f, s, Direction::Nabla).unwrap() / h;
        assert!(close(ours, series, 1e-12), "{ours} vs {series}");
    }
}

#[test]
fn pole_hits_are_reported() {
    let ts = hz(0.5, 2, 4);
    let f = Signal::from_fn(ts.clone(), |n, _| if n == 4 { ONE } else { ZERO }).unwrap();
    assert_eq!(direct_transform(&f, cx(-2.0, 0.0), Direction::Delta), Err(Error::PoleHit { s: cx(-2.0, 0.0) }));
    let g = Signal::from_fn(ts, |n, _| if n == 1 { ONE } else { ZERO }).unwrap();
    assert_eq!(direct_transform(&g, cx(2.0, 0.0), Direction::Nabla), Err(Error::PoleHit { s: cx(2.0, 0.0) }));
}

#[test]
fn support_must_leave_room() {
    let ts = hz(1.0, 1, 3);
    let f = Signal::from_fn(ts, |n, _| if n == 4 { ONE } else { ZERO }).unwrap();
    assert!(matches!(direct_transform(&f, ONE, Direction::Nabla), Err(Error::SupportTouchesBoundary { .. })));
}

#[test]
fn catalog_examples() {
    let ts = hz(1.0, 3, 12);
    let f = invert_rational(&causal_pole(cx(-1.0, 0.0)), &ts).unwrap();
    for n in 0..12 {
        assert!((f.value(n + 3) - cx(0.5f64.powi(n as i32 + 1), 0.0)).norm() < 1e-15);
    }
    assert_eq!(f.value(2), ZERO);
    assert_eq!(f.support(), Some((3, 14)));

    let step = invert_rational(&causal_pole(ZERO), &ts).unwrap();
    for n in 3..15 {
        assert_eq!(step.value(n), ONE);
    }
    assert_eq!(step.value(0), ZERO);
}

#[test]
fn anticausal_catalog_matches_geometric_series() {
    let (h, p) = (1.0, cx(0.5, 0.0));
    let c = 60;
    let ts = hz(h, c, 4);
    let mut tf = causal_pole(p);
    tf.set_roc(Roc::Anticausal);
    let f = invert_rational(&tf, &ts).unwrap();
    for n in 0..c {
        let expect = -(ONE - p * h).powi((c - n - 1) as i32);
        assert!((f.value(n) - expect).norm() < 1e-14);
    }
    assert_eq!(f.value(c), ZERO);
    // |1 - ph| / |1 - sh| = 1/4 leaves a 4^-60 truncation error
    let s = cx(-1.0, 0.0);
    let direct = direct_transform(&f, s, Direction::Nabla).unwrap();
    assert!(close(direct, ONE / (s - p), 1e-14));
}

#[test]
fn catalog_rejects_bad_inputs() {
    let ts = hz(0.5, 2, 4);
    let improper = RationalTransform::new(&[ONE, ONE], &[ONE, ONE]).unwrap();
    assert!(matches!(invert_rational(&improper, &ts), Err(Error::ImproperRational { .. })));
    assert!(matches!(invert_rational(&causal_pole(cx(2.0, 0.0)), &ts), Err(Error::PoleOnScale { .. })));
    let mut untagged = causal_pole(cx(-1.0, 0.0));
    untagged.set_pole_roc(0, None);
    assert!(matches!(invert_rational(&untagged, &ts), Err(Error::UntaggedPole { .. })));
}

#[test]
fn repeated_pole_catalog_matches_contour() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let ts = random_scale(&mut rng, 14, 4, (0.2, 1.5));
    let poles = vec![
        Pole { location: cx(-1.5, 0.5), multiplicity: 2, roc: Some(Roc::Causal) },
        Pole { location: cx(-0.7, 0.0), multiplicity: 3, roc: Some(Roc::Causal) },
    ];
    let tf = RationalTransform::from_poles(&[cx(0.3, 0.0), ONE], poles.clone()).unwrap();
    let f = invert_rational(&tf, &ts).unwrap();
    let outside: Vec<Complex64> = poles.iter().map(|p| p.location).collect();
    let k = Contour::auto(&reciprocal_graininess(&ts, Direction::Nabla), &outside, false, DEFAULT_NODES).unwrap();
    for n in 0..ts.len() - 1 {
        let v = contour_inverse(|s| Ok(tf.eval(s)), &ts, n, &k, Direction::Nabla, &outside).unwrap();
        assert!(close(f.value(n), v, 1e-9), "{n}: {} vs {v}", f.value(n));
    }
}

#[test]
fn contour_of_constant_one_is_the_impulse() {
    let ts = Arc::new(TimeScale::new(vec![-1.0, 0.0, 0.5, 1.5, 1.75, 3.0], 1).unwrap());
    for kind in [Direction::Nabla, Direction::Delta] {
        let k = Contour::auto(&reciprocal_graininess(&ts, kind), &[], false, DEFAULT_NODES).unwrap();
        let impulse = impulse_for(&ts, kind).unwrap();
        let range = match kind {
            Direction::Nabla => 0..ts.len() - 1,
            Direction::Delta => 1..ts.len(),
        };
        for n in range {
            let v = contour_inverse(|_| Ok(ONE), &ts, n, &k, kind, &[]).unwrap();
            assert!((v - impulse.value(n)).norm() < 1e-10, "{kind:?} {n}: {v}");
        }
    }
}

#[test]
fn contour_inverse_boundaries() {
    let ts = hz(1.0, 1, 3);
    let k = Contour::auto(&reciprocal_graininess(&ts, Direction::Nabla), &[], false, 256).unwrap();
    assert_eq!(contour_inverse(|_| Ok(ONE), &ts, 4, &k, Direction::Nabla, &[]), Err(Error::BoundaryIndex { index: 4 }));
    let bad = Contour::new(0.2, 0.1, 256).unwrap();
    assert!(matches!(contour_inverse(|_| Ok(ONE), &ts, 1, &bad, Direction::Nabla, &[]), Err(Error::ContourInvalid(_))));
}

#[test]
fn roc_circles() {
    assert_eq!(roc_circle(cx(2.0, 0.0)), Some((1.0, 1.0)));
    assert_eq!(roc_circle(cx(1.0, 1.0)), Some((1.0, 1.0)));
    assert_eq!(roc_circle(cx(-1.0, 0.0)), None);
}

#[test]
fn round_trip_on_random_scales() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let ts = random_scale(&mut rng, 16, 6, (0.25, 2.0));
        let f = random_signal(&mut rng, &ts, 2, 13);
        for kind in [Direction::Nabla, Direction::Delta] {
            let k = Contour::auto(&reciprocal_graininess(&ts, kind), &[], false, DEFAULT_NODES).unwrap();
            let range = match kind {
                Direction::Nabla => 0..ts.len() - 1,
                Direction::Delta => 1..ts.len(),
            };
            for n in range {
                let v = contour_inverse(|s| direct_transform(&f, s, kind), &ts, n, &k, kind, &[]).unwrap();
                assert!((v - f.value(n)).norm() < 1e-8, "{kind:?} {n} {}", (v - f.value(n)).norm());
            }
        }
    }
}

#[test]
fn derivative_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ts = hz(0.3, 5, 20);
    let f = random_signal(&mut rng, &ts, 5, 14);
    let uneven = random_scale(&mut rng, 26, 5, (0.2, 1.2));
    let g = random_signal(&mut rng, &uneven, 5, 14);
    for order in 1..=3 {
        for _ in 0..5 {
            let s = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let lhs = direct_transform(&derivative(&f, Direction::Nabla, order).unwrap(), s, Direction::Nabla).unwrap();
            let rhs = s.powi(order as i32) * direct_transform(&f, s, Direction::Nabla).unwrap();
            assert!(close(lhs, rhs, 1e-10), "uniform {order}");
            let lhs = direct_transform(&sigma_difference(&g, order).unwrap(), s, Direction::Nabla).unwrap();
            let rhs = s.powi(order as i32) * direct_transform(&g, s, Direction::Nabla).unwrap();
            assert!(close(lhs, rhs, 1e-10), "nonuniform {order}");
        }
    }
}

#[test]
fn time_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ts = random_scale(&mut rng, 10, 3, (0.2, 1.5));
    let f = random_signal(&mut rng, &ts, 1, 8);
    for a in [0.5, 3.0] {
        let scaled = Arc::new(ts.scaled(a).unwrap());
        let g = f.on_scale(scaled).unwrap();
        let s = cx(0.4, -0.3);
        let lhs = direct_transform(&g, s, Direction::Nabla).unwrap();
        let rhs = direct_transform(&f, s * a, Direction::Nabla).unwrap() * a;
        assert!(close(lhs, rhs, 1e-13));
    }
}

#[test]
fn modulation_on_uniform_scales() {
    let h = 0.5;
    let ts = hz(h, 3, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_signal(&mut rng, &ts, 1, 12);
    let s0 = cx(0.3, 0.2);
    let e = crate::exponential::sample(&ts, 3, s0, Direction::Nabla).unwrap();
    let g = f.mul(&e).unwrap();
    for _ in 0..5 {
        let s = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let lhs = direct_transform(&g, s, Direction::Nabla).unwrap();
        let rhs = direct_transform(&f, (s - s0) / (ONE - s0 * h), Direction::Nabla).unwrap();
        assert!(close(lhs, rhs, 1e-10));
    }
}

#[test]
fn shift_factor_on_uniform_scales() {
    let ts = hz(0.25, 4, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_signal(&mut rng, &ts, 4, 10);
    for m in [1usize, 4, 7, 12] {
        let d = m as i64 - 4;
        let shifted = Signal::from_fn(ts.clone(), |n, _| {
            let k = n as i64 - d;
            if (0..ts.len() as i64).contains(&k) {
                f.value(k as usize)
            } else {
                ZERO
            }
        })
        .unwrap();
        for _ in 0..5 {
            let s = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let lhs = shifted_transform_factor(&ts, m, s).unwrap() * direct_transform(&f, s, Direction::Nabla).unwrap();
            let rhs = direct_transform(&shifted, s, Direction::Nabla).unwrap();
            assert!(close(lhs, rhs, 1e-10), "m = {m}");
        }
    }
}

#[test]
fn final_value_is_the_weighted_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ts = random_scale(&mut rng, 20, 3, (0.1, 2.0));
    let g = random_signal(&mut rng, &ts, 3, 17);
    let total: Complex64 = (3..=17).map(|n| g.value(n) * ts.mu(n).unwrap()).sum();
    let limit = direct_transform(&g, cx(1e-9, 0.0), Direction::Nabla).unwrap();
    assert!((limit - total).norm() <= 1e-6 * total.norm());
}

/// `lim_{s → 1/h} s F(s)` on a uniform scale.
fn initial_value(f: &Signal, h: f64) -> Complex64 {
    let s = cx(1.0 / h, 0.0);
    s * direct_transform(f, s, Direction::Nabla).unwrap()
}

#[test]
fn initial_value_on_uniform_scales() {
    let ts = hz(0.5, 2, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let f = random_signal(&mut rng, &ts, 2, 7);
    assert!(close(initial_value(&f, 0.5), f.value(2), 1e-14));
}

#[test]
fn unit_steps() {
    let ts = hz(1.0, 2, 3);
    let u = unit_step(&ts, StepFlavor::Causal);
    assert_eq!(u.support(), Some((2, 5)));
    let a = unit_step(&ts, StepFlavor::Anticausal);
    assert_eq!(a.values()[..3], [-ONE, -ONE, ZERO]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_is_linear(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ts = random_scale(&mut rng, 10, 4, (0.1, 2.0));
        let f = random_signal(&mut rng, &ts, 1, 8);
        let g = random_signal(&mut rng, &ts, 2, 7);
        let s = cx(re, im);
        prop_assume!(ts.steps().iter().all(|&x| (ONE - s * x).norm() > 1e-3 && (ONE + s * x).norm() > 1e-3));
        let a = cx(0.7, -1.1);
        for kind in [Direction::Nabla, Direction::Delta] {
            let lhs = direct_transform(&f.scale_by(a).add(&g).unwrap(), s, kind).unwrap();
            let rhs = a * direct_transform(&f, s, kind).unwrap() + direct_transform(&g, s, kind).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
