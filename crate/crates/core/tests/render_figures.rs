use harmap_core::mappings::{bl_polynomial, counterexample, FamilySpec};
use harmap_core::render::{
    auto_viewport, polyline_points, render_boundary_curve, render_image_domain, SceneSpec,
};
use harmap_core::univalence::{find_symmetric_collision, CollisionSearchParams};
use num_complex::Complex64;

fn mirror_defect(points: &[Complex64]) -> f64 {
    let mut sorted: Vec<Complex64> = points.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut worst = 0.0f64;
    for p in points {
        let target = p.conj();
        let start = sorted.partition_point(|q| q.re < target.re - 1e-9);
        let best = sorted[start..]
            .iter()
            .take_while(|q| q.re <= target.re + 1e-9)
            .map(|q| (q - target).norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    worst
}

fn all_points(svg: &str) -> Vec<Complex64> {
    polyline_points(svg).into_iter().flatten().collect()
}

#[test]
fn whole_image_is_deterministic_and_mirror_symmetric() {
    let f = counterexample(1.25).unwrap();
    let spec = SceneSpec::whole_image(FamilySpec::Counterexample { gamma: 1.25 }, &f).unwrap();
    let svg = render_image_domain(&spec, &f).unwrap();
    assert_eq!(svg, render_image_domain(&spec, &f).unwrap());
    let pts = all_points(&svg);
    assert!(pts.len() > 12 * 1024);
    assert!(mirror_defect(&pts) <= 1e-9);
    let vp = spec.viewport;
    let slack = 1e-8 * vp.half_width.max(1.0);
    for w in &pts {
        assert!((w.re - vp.center[0]).abs() <= vp.half_width + slack);
        assert!((w.im - vp.center[1]).abs() <= vp.half_width + slack);
    }
}

#[test]
fn zoom_contains_collision_image() {
    let f = counterexample(1.25).unwrap();
    let c = find_symmetric_collision(&CollisionSearchParams::midpoint(1.25).unwrap()).unwrap();
    let spec = SceneSpec::zoom(FamilySpec::Counterexample { gamma: 1.25 }, c.f_z1).unwrap();
    assert!(spec.viewport.contains(f.evaluate(c.z1).unwrap()));
    assert!(spec.viewport.contains(f.evaluate(c.z2).unwrap()));
    assert!((f.evaluate(c.z1).unwrap() - f.evaluate(c.z2).unwrap()).norm() < 1e-6);
    let svg = render_image_domain(&spec, &f).unwrap();
    assert_eq!(svg, render_image_domain(&spec, &f).unwrap());
    let pts = all_points(&svg);
    assert!(!pts.is_empty());
    assert!(mirror_defect(&pts) <= 1e-9);
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn proper_crossings(line: &[Complex64]) -> usize {
    let segs: Vec<(Complex64, Complex64)> = line.windows(2).map(|w| (w[0], w[1])).collect();
    let n = segs.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue; // closing segments share the start point
            }
            let ((a, b), (c, d)) = (segs[i], segs[j]);
            let (d1, d2) = (cross(b - a, c - a), cross(b - a, d - a));
            let (d3, d4) = (cross(d - c, a - c), cross(d - c, b - c));
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn boundary_curves() {
    let f = counterexample(1.25).unwrap();
    let vp = auto_viewport(&f, 0.999, 0.05).unwrap();
    let svg = render_boundary_curve(&f, 0.999, 1024, &vp).unwrap();
    assert_eq!(svg, render_boundary_curve(&f, 0.999, 1024, &vp).unwrap());
    let lines = polyline_points(&svg);
    assert_eq!(lines.len(), 1);
    assert!(proper_crossings(&lines[0]) >= 1, "f_5/4 boundary image should overlap itself");

    let bl = bl_polynomial(0.3).unwrap();
    let vp = auto_viewport(&bl, 0.999, 0.05).unwrap();
    let lines = polyline_points(&render_boundary_curve(&bl, 0.999, 1024, &vp).unwrap());
    assert_eq!(lines.len(), 1);
    let line = &lines[0];
    assert_eq!(line.first(), line.last());
    assert_eq!(proper_crossings(line), 0);
}
