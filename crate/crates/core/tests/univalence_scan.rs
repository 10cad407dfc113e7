use std::time::Instant;

use harmap_core::mappings::{bl_polynomial, counterexample, identity};
use harmap_core::univalence::{
    find_symmetric_collision, univalence_scan, winding_number, CollisionSearchParams, ScanParams, Verdict,
};
use harmap_core::Error;
use num_complex::Complex64;

#[test]
fn threshold_polynomials_at_acceptance_resolution() {
    let p = ScanParams::new(0.999, 512).unwrap();
    for (lambda, expected) in [(0.30, Verdict::CertifiedAtResolution), (0.40, Verdict::Collision)] {
        let start = Instant::now();
        let rep = univalence_scan(&bl_polynomial(lambda).unwrap(), &p).unwrap();
        let secs = start.elapsed().as_secs_f64();
        assert_eq!(rep.verdict, expected, "lambda {lambda}: {rep:?}");
        assert!(secs < 30.0, "lambda {lambda} took {secs} s");
    }
}

#[test]
fn collision_is_reverified_by_direct_evaluation() {
    let f = bl_polynomial(0.45).unwrap();
    let p = ScanParams::new(0.999, 256).unwrap();
    let rep = univalence_scan(&f, &p).unwrap();
    let (z1, z2) = rep.collision_pair().expect("collision");
    assert!((f.evaluate(z1).unwrap() - f.evaluate(z2).unwrap()).norm() <= p.collision_tol);
    assert!((z1 - z2).norm() >= p.separation_floor);
    assert!(z1.norm() <= p.r && z2.norm() <= p.r);
}

#[test]
fn counterexample_scan_finds_conjugate_pair() {
    let f = counterexample(1.25).unwrap();
    let rep = univalence_scan(&f, &ScanParams::new(0.999, 512).unwrap()).unwrap();
    assert_eq!(rep.verdict, Verdict::Collision);
    let (z1, z2) = rep.collision_pair().unwrap();
    assert!((z2 - z1.conj()).norm() < 1e-12);
    assert!(rep.image_gap.unwrap() < 1e-8);
}

#[test]
fn small_disk_is_injective() {
    let f = counterexample(1.25).unwrap();
    let rep = univalence_scan(&f, &ScanParams::new(0.3, 128).unwrap()).unwrap();
    assert_eq!(rep.verdict, Verdict::CertifiedAtResolution);
    assert_eq!(rep.unconfirmed, 0);
    assert!(rep.jacobian_min > 0.0);
}

#[test]
fn identity_scan() {
    let rep = univalence_scan(&identity(), &ScanParams::new(0.99, 128).unwrap()).unwrap();
    assert_eq!(rep.verdict, Verdict::CertifiedAtResolution);
}

#[test]
fn collisions_persist_under_refinement() {
    // the collision set is two-dimensional, so the refined pair need not be
    // the same; what must persist is that a collision is found
    for lambda in [0.35, 0.4, 0.45] {
        let f = bl_polynomial(lambda).unwrap();
        let coarse = univalence_scan(&f, &ScanParams::new(0.999, 128).unwrap()).unwrap();
        let fine = univalence_scan(&f, &ScanParams::new(0.999, 256).unwrap()).unwrap();
        assert_eq!(coarse.verdict, Verdict::Collision, "lambda {lambda}");
        assert_eq!(fine.verdict, Verdict::Collision, "lambda {lambda}");
    }
}

#[test]
fn mirror_identity_of_imaginary_part() {
    let f = counterexample(1.25).unwrap();
    for k in 1..20 {
        for l in 0..16 {
            let z = Complex64::from_polar(0.05 * k as f64, 0.2 * l as f64);
            let sum = f.evaluate(z).unwrap().im + f.evaluate(z.conj()).unwrap().im;
            assert!(sum.abs() < 1e-14);
        }
    }
}

#[test]
fn boundary_winding_about_collision_image() {
    let f = counterexample(1.25).unwrap();
    let c = find_symmetric_collision(&CollisionSearchParams::midpoint(1.25).unwrap()).unwrap();
    match winding_number(&f, 0.999, c.f_z1, 4096) {
        Ok(n) => assert!(n >= 2, "winding {n}"),
        Err(Error::OnCurve { .. }) => {}
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn winding_agrees_with_scan_on_small_disk() {
    let f = counterexample(1.25).unwrap();
    let w = f.evaluate(Complex64::new(0.1, 0.0)).unwrap();
    assert_eq!(winding_number(&f, 0.3, w, 256).unwrap(), 1);
}
