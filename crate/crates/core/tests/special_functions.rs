use harmap_core::complexfn::{hyp2f1, hyp2f1_derivative, principal_pow, PowerSeries, DEFAULT_TOL};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn log_identity_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::from_polar(0.9 * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>());
        if z.norm() < 1e-8 {
            continue;
        }
        let oracle = -(c(1.0, 0.0) - z).ln() / z;
        worst = worst.max((hyp2f1(1.0, 1.0, 2.0, z, DEFAULT_TOL).unwrap() - oracle).norm());
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn euler_transformation_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = c(1.0, 0.0);
    for _ in 0..60 {
        let a = rng.gen_range(0.2..3.0);
        let b = rng.gen_range(-0.8..2.5);
        let cc = rng.gen_range(1.1..4.0);
        let z = Complex64::from_polar(0.95 * rng.gen::<f64>(), rng.gen_range(-3.1..3.1));
        let lhs = hyp2f1(a, b, cc, z, DEFAULT_TOL).unwrap();
        let rhs = principal_pow(one - z, cc - a - b).unwrap() * hyp2f1(cc - a, cc - b, cc, z, DEFAULT_TOL).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "a={a} b={b} c={cc} z={z}");
    }
}

#[test]
fn frozen_high_precision_values() {
    // computed with mpmath at 30 digits
    let cases = [
        (0.5, 1.5, 2.0, c(0.3, 0.4), c(1.0704749162363965, 0.20529585512664086)),
        (2.0, 0.5, 3.0, c(0.9, 0.3), c(1.411440919763738, 0.45379170224967222)),
        (3.0, 1.5, 4.0, c(-0.95, 0.1), c(0.45599336042061367, 0.028433910264991158)),
        (1.25, 0.75, 2.5, c(0.7, -0.65), c(1.1085483570877853, -0.45609248261546479)),
        (2.0, 2.5, 3.0, c(0.6, 0.8), c(-0.32719989570171071, 1.2128322892827978)),
        (4.0, -0.5, 5.0, c(-1.0, 0.0), c(1.3401791142019167, 0.0)),
        (2.0, 1.0, 3.0, c(0.99, 0.05), c(4.2934097090817518, 2.2726615923597975)),
    ];
    for (a, b, cc, z, expected) in cases {
        let got = hyp2f1(a, b, cc, z, DEFAULT_TOL).unwrap();
        assert!((got - expected).norm() <= 1e-11 * expected.norm(), "{a} {b} {cc} {z}: {got}");
    }
}

#[test]
fn value_at_minus_one_used_by_covering() {
    let v = hyp2f1(1.0, 2.0, 3.0, c(-1.0, 0.0), DEFAULT_TOL).unwrap();
    assert!((v.re - 2.0 * (1.0 - 2f64.ln())).abs() < 1e-13);
    // the same number by summing the alternating series with averaging of
    // consecutive partial sums (an independent path)
    let mut partial = 0.0;
    let mut prev;
    let mut avg = 0.0;
    for k in 0..200_000u64 {
        // 2F1(1,2;3;z) = sum 2/(k+2) z^k
        prev = partial;
        partial += 2.0 / (k as f64 + 2.0) * if k % 2 == 0 { 1.0 } else { -1.0 };
        avg = 0.5 * (prev + partial);
    }
    assert!((v.re - avg).abs() < 1e-9);
}

proptest! {
    #[test]
    fn derivative_matches_contiguous_relation(
        a in 0.1f64..2.5, b in 0.1f64..2.5, cc in 1.2f64..4.0,
        r in 0.0f64..0.9, t in -3.1f64..3.1,
    ) {
        let z = Complex64::from_polar(r, t);
        let d = hyp2f1_derivative(a, b, cc, z, DEFAULT_TOL).unwrap();
        let step = 1e-6;
        let fd = (hyp2f1(a, b, cc, z + step, DEFAULT_TOL).unwrap() - hyp2f1(a, b, cc, z - step, DEFAULT_TOL).unwrap()) / (2.0 * step);
        prop_assert!((d - fd).norm() <= 1e-6 * d.norm().max(1.0));
    }

    #[test]
    fn truncated_product_matches_cauchy_product(
        xs in proptest::collection::vec(-2.0f64..2.0, 1..12),
        ys in proptest::collection::vec(-2.0f64..2.0, 1..12),
        order in 0usize..14,
    ) {
        let (p, q) = (PowerSeries::from_real(&xs), PowerSeries::from_real(&ys));
        let prod = p.truncated_mul(&q, order);
        for k in 0..=order {
            let mut exact = 0.0;
            for i in 0..=k {
                if i < xs.len() && k - i < ys.len() {
                    exact += xs[i] * ys[k - i];
                }
            }
            prop_assert!((prod.coeff(k).re - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn derive_inverts_integrate(xs in proptest::collection::vec(-3.0f64..3.0, 1..20)) {
        let p = PowerSeries::from_real(&xs);
        let back = p.integrate().derive().unwrap();
        prop_assert_eq!(back.order(), p.order());
        for k in 0..xs.len() {
            prop_assert!((back.coeff(k) - p.coeff(k)).norm() < 1e-13);
        }
        prop_assert_eq!(p.integrate().coeff(0), c(0.0, 0.0));
    }
}
