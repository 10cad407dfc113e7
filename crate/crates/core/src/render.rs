//! Deterministic SVG pictures of `f(D_r)`: images of concentric circles and
//! radial segments, clipped to a square viewport in the `w = f(z)` plane.
//!
//! Parameter angles are generated symmetrically (`θ` and `-θ` computed from
//! the same integer), so for maps with real coefficients the emitted
//! point set is mirror symmetric bit for bit.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mappings::{FamilySpec, HarmonicMapping};

/// Adaptive subdivision stops after this many halvings of a parameter step.
const MAX_SUBDIVISION_DEPTH: u32 = 12;
/// Consecutive image points farther apart than `width / SPACING_DIVISOR`
/// get a midpoint inserted.
const SPACING_DIVISOR: f64 = 200.0;
const CANVAS_PX: u32 = 800;
const SIGNIFICANT_DIGITS: i32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: [f64; 2],
    pub half_width: f64,
}

impl Viewport {
    pub fn new(center: Complex64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::param(format!("viewport half-width {half_width} must be positive")));
        }
        Ok(Self {
            center: [center.re, center.im],
            half_width,
        })
    }

    pub fn contains(&self, w: Complex64) -> bool {
        (w.re - self.center[0]).abs() <= self.half_width && (w.im - self.center[1]).abs() <= self.half_width
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let [cx, cy] = self.center;
        let h = self.half_width;
        (cx - h, cx + h, cy - h, cy + h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub stroke: String,
    pub stroke_width: f64,
    pub boundary_stroke: String,
    pub boundary_width: f64,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            stroke: "#2b5d8a".into(),
            stroke_width: 0.6,
            boundary_stroke: "#b3261e".into(),
            boundary_width: 1.4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub mapping: FamilySpec,
    pub r: f64,
    pub circles: usize,
    pub rays: usize,
    pub viewport: Viewport,
    pub samples_per_curve: usize,
    pub style: Style,
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::param(format!("scene radius {} outside (0, 1)", self.r)));
        }
        if self.samples_per_curve < 128 {
            return Err(Error::param("samples_per_curve must be at least 128"));
        }
        if self.circles == 0 {
            return Err(Error::param("need at least one circle"));
        }
        Viewport::new(Complex64::default(), self.viewport.half_width).map(|_| ())
    }

    /// Whole image: `r = 0.999`, 12 circles, 24 rays, viewport fitted
    /// to the image of the outer circle with a 5% margin.
    pub fn whole_image(mapping: FamilySpec, f: &HarmonicMapping) -> Result<Self> {
        let r = 0.999;
        Ok(Self {
            mapping,
            r,
            circles: 12,
            rays: 24,
            viewport: auto_viewport(f, r, 0.05)?,
            samples_per_curve: 1024,
            style: Style::default(),
        })
    }

    /// Close-up: the same curves around `focus` with half-width 0.05.
    pub fn zoom(mapping: FamilySpec, focus: Complex64) -> Result<Self> {
        Ok(Self {
            mapping,
            r: 0.999,
            circles: 12,
            rays: 24,
            viewport: Viewport::new(focus, 0.05)?,
            samples_per_curve: 1024,
            style: Style::default(),
        })
    }
}

/// Square viewport around the image of `|z| = r`, enlarged by `margin`.
pub fn auto_viewport(f: &HarmonicMapping, r: f64, margin: f64) -> Result<Viewport> {
    let pts = sample_curve(f, &circle_params(r, 4096), None)?;
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for w in &pts {
        x0 = x0.min(w.re);
        x1 = x1.max(w.re);
        y0 = y0.min(w.im);
        y1 = y1.max(w.im);
    }
    let half = 0.5 * (x1 - x0).max(y1 - y0) * (1.0 + margin);
    Viewport::new(Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1)), half)
}

/// `2πk/n` for `k <= n/2`, `-2π(n-k)/n` above: mirror pairs share the same
/// integer, so `θ(n - k) = -θ(k)` exactly.
fn symmetric_angle(k: usize, n: usize) -> f64 {
    if 2 * k <= n {
        TAU * k as f64 / n as f64
    } else {
        -(TAU * (n - k) as f64 / n as f64)
    }
}

fn circle_params(rho: f64, samples: usize) -> Vec<Complex64> {
    let n = samples + samples % 2;
    (0..=n).map(|k| Complex64::from_polar(rho, symmetric_angle(k % n, n))).collect()
}

fn ray_params(r: f64, angle: f64, samples: usize) -> Vec<Complex64> {
    (0..=samples)
        .map(|m| Complex64::from_polar(r * m as f64 / samples as f64, angle))
        .collect()
}

fn eval(f: &HarmonicMapping, z: Complex64) -> Result<Complex64> {
    f.evaluate(z).map_err(|e| Error::Render { z, source: Box::new(e) })
}

/// Images of the parameter points, with midpoints inserted (in the
/// parameter domain, by polar interpolation) wherever consecutive images
/// are farther apart than the spacing limit.
fn sample_curve(f: &HarmonicMapping, params: &[Complex64], spacing: Option<f64>) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(params.len());
    let first = eval(f, params[0])?;
    out.push(first);
    let mut prev = (params[0], first);
    for &z in &params[1..] {
        let w = eval(f, z)?;
        if let Some(limit) = spacing {
            subdivide(f, prev, (z, w), limit, MAX_SUBDIVISION_DEPTH, &mut out)?;
        }
        out.push(w);
        prev = (z, w);
    }
    Ok(out)
}

fn polar_midpoint(a: Complex64, b: Complex64) -> Complex64 {
    // radii and angles averaged separately keep circle samples on the circle
    let (ra, ta) = (a.norm(), a.arg());
    let (rb, mut tb) = (b.norm(), b.arg());
    if ra == 0.0 || rb == 0.0 {
        return 0.5 * (a + b);
    }
    // crossing the negative real axis: unwrap before averaging
    if tb - ta > std::f64::consts::PI {
        tb -= TAU;
    } else if ta - tb > std::f64::consts::PI {
        tb += TAU;
    }
    Complex64::from_polar(0.5 * (ra + rb), 0.5 * (ta + tb))
}

fn subdivide(
    f: &HarmonicMapping,
    a: (Complex64, Complex64),
    b: (Complex64, Complex64),
    limit: f64,
    depth: u32,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    if depth == 0 || (a.1 - b.1).norm() <= limit {
        return Ok(());
    }
    let zm = polar_midpoint(a.0, b.0);
    let wm = eval(f, zm)?;
    subdivide(f, a, (zm, wm), limit, depth - 1, out)?;
    out.push(wm);
    subdivide(f, (zm, wm), b, limit, depth - 1, out)
}

/// Liang–Barsky clipping of one segment; `None` when it misses the box.
fn clip_segment(a: Complex64, b: Complex64, vp: &Viewport) -> Option<(Complex64, Complex64)> {
    let (x0, x1, y0, y1) = vp.bounds();
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [
        (-d.re, a.re - x0),
        (d.re, x1 - a.re),
        (-d.im, a.im - y0),
        (d.im, y1 - a.im),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let at = |t: f64| if t == 0.0 { a } else if t == 1.0 { b } else { a + d * t };
    Some((at(t0), at(t1)))
}

/// Splits a polyline into the runs that lie inside the viewport.
fn clip_polyline(points: &[Complex64], vp: &Viewport) -> Vec<Vec<Complex64>> {
    let mut runs = Vec::new();
    let mut current: Vec<Complex64> = Vec::new();
    for pair in points.windows(2) {
        match clip_segment(pair[0], pair[1], vp) {
            Some((p, q)) => {
                if current.last() != Some(&p) {
                    if current.len() >= 2 {
                        runs.push(std::mem::take(&mut current));
                    }
                    current.clear();
                    current.push(p);
                }
                current.push(q);
            }
            None => {
                if current.len() >= 2 {
                    runs.push(std::mem::take(&mut current));
                }
                current.clear();
            }
        }
    }
    if current.len() >= 2 {
        runs.push(current);
    }
    runs
}

/// Formats with at most 9 significant digits, fixed notation, no trailing
/// zeros, and no negative zero.
pub fn format_coord(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).clamp(0, 17) as usize;
    let mut s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

struct Curve {
    points: Vec<Complex64>,
    boundary: bool,
}

fn svg_document(comment: &str, vp: &Viewport, style: &Style, curves: &[Curve]) -> String {
    let (x0, _, _, y1) = vp.bounds();
    let size = 2.0 * vp.half_width;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS_PX}\" height=\"{CANVAS_PX}\" viewBox=\"{} {} {} {}\">",
        format_coord(x0),
        format_coord(-y1),
        format_coord(size),
        format_coord(size)
    );
    let _ = writeln!(out, "<!-- scene: {} -->", comment.replace("--", "-\\u002d"));
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke-linejoin=\"round\" stroke-linecap=\"round\" vector-effect=\"non-scaling-stroke\">"
    );
    for curve in curves {
        for run in clip_polyline(&curve.points, vp) {
            let (color, width) = if curve.boundary {
                (&style.boundary_stroke, style.boundary_width)
            } else {
                (&style.stroke, style.stroke_width)
            };
            let pts: Vec<String> = run
                .iter()
                .map(|w| format!("{},{}", format_coord(w.re), format_coord(-w.im)))
                .collect();
            let _ = writeln!(
                out,
                "<polyline stroke=\"{color}\" stroke-width=\"{}\" vector-effect=\"non-scaling-stroke\" points=\"{}\"/>",
                format_coord(width),
                pts.join(" ")
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Images of the circles `|z| = j r / circles` (the outermost drawn as the
/// boundary) and of the rays `arg z = 2πk / rays`, `0 <= |z| <= r`.
pub fn render_image_domain(spec: &SceneSpec, f: &HarmonicMapping) -> Result<String> {
    spec.validate()?;
    let spacing = 2.0 * spec.viewport.half_width / SPACING_DIVISOR;
    let mut params: Vec<(Vec<Complex64>, bool)> = Vec::new();
    for j in 1..=spec.circles {
        let rho = spec.r * j as f64 / spec.circles as f64;
        params.push((circle_params(rho, spec.samples_per_curve), j == spec.circles));
    }
    for k in 0..spec.rays {
        params.push((ray_params(spec.r, symmetric_angle(k, spec.rays), spec.samples_per_curve), false));
    }
    let curves: Vec<Curve> = params
        .par_iter()
        .map(|(ps, boundary)| {
            Ok(Curve {
                points: sample_curve(f, ps, Some(spacing))?,
                boundary: *boundary,
            })
        })
        .collect::<Result<_>>()?;
    let meta = serde_json::to_string(spec).map_err(|e| Error::Io(e.to_string()))?;
    Ok(svg_document(&meta, &spec.viewport, &spec.style, &curves))
}

/// The single closed curve `θ ↦ f(r e^{iθ})`.
pub fn render_boundary_curve(f: &HarmonicMapping, r: f64, m: usize, viewport: &Viewport) -> Result<String> {
    if m < 256 {
        return Err(Error::param(format!("need at least 256 samples, got {m}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param(format!("radius {r} outside (0, 1)")));
    }
    let spacing = 2.0 * viewport.half_width / SPACING_DIVISOR;
    let curve = Curve {
        points: sample_curve(f, &circle_params(r, m), Some(spacing))?,
        boundary: true,
    };
    let meta = serde_json::json!({
        "mapping": f.label(),
        "r": r,
        "samples": m,
        "viewport": viewport,
    });
    Ok(svg_document(&meta.to_string(), viewport, &Style::default(), &[curve]))
}

/// Points of every `<polyline>` in an SVG produced here, back in the
/// `w`-plane (the y axis un-flipped).
pub fn polyline_points(svg: &str) -> Vec<Vec<Complex64>> {
    svg.lines()
        .filter_map(|line| {
            let start = line.find("points=\"")? + 8;
            let rest = &line[start..];
            let body = &rest[..rest.find('"')?];
            Some(
                body.split_whitespace()
                    .filter_map(|pair| {
                        let (x, y) = pair.split_once(',')?;
                        Some(Complex64::new(x.parse().ok()?, -y.parse::<f64>().ok()?))
                    })
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{counterexample, identity};

    #[test]
    fn coordinate_format() {
        assert_eq!(format_coord(0.0), "0");
        assert_eq!(format_coord(-0.0), "0");
        assert_eq!(format_coord(1.5), "1.5");
        assert_eq!(format_coord(-2.0), "-2");
        assert_eq!(format_coord(0.123456789123), "0.123456789");
        assert_eq!(format_coord(12345.6789012), "12345.6789");
        assert_eq!(format_coord(-1e-12), "-0.000000000001");
        assert_eq!(format_coord(1e-300), "0");
    }

    #[test]
    fn symmetric_angles_are_exact_mirrors() {
        for n in [8, 24, 1024] {
            for k in (1..n).filter(|&k| 2 * k != n) {
                assert_eq!(symmetric_angle(n - k, n), -symmetric_angle(k, n));
            }
        }
    }

    #[test]
    fn clipping_keeps_points_inside() {
        let vp = Viewport::new(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let line = [Complex64::new(-3.0, 0.5), Complex64::new(3.0, 0.5), Complex64::new(3.0, 5.0)];
        let runs = clip_polyline(&line, &vp);
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0], vec![Complex64::new(-1.0, 0.5), Complex64::new(1.0, 0.5)]);
        assert!(clip_segment(Complex64::new(2.0, 2.0), Complex64::new(3.0, 3.0), &vp).is_none());
    }

    #[test]
    fn identity_circles_stay_circles() {
        let f = identity();
        let spec = SceneSpec {
            mapping: FamilySpec::Identity,
            r: 0.9,
            circles: 3,
            rays: 4,
            viewport: Viewport::new(Complex64::default(), 1.0).unwrap(),
            samples_per_curve: 128,
            style: Style::default(),
        };
        let svg = render_image_domain(&spec, &f).unwrap();
        let lines = polyline_points(&svg);
        assert_eq!(lines.len(), 7);
        for (j, line) in lines.iter().take(3).enumerate() {
            let rho = 0.9 * (j + 1) as f64 / 3.0;
            assert!(line.iter().all(|w| (w.norm() - rho).abs() < 1e-8));
        }
        for line in &lines[3..] {
            let dir = line.last().unwrap() / line.last().unwrap().norm();
            assert!(line.iter().all(|w| (w * dir.conj()).im.abs() < 1e-8));
        }
        assert!(svg.contains("stroke=\"#b3261e\""));
    }

    #[test]
    fn boundary_of_identity() {
        let vp = Viewport::new(Complex64::default(), 1.0).unwrap();
        let svg = render_boundary_curve(&identity(), 0.7, 256, &vp).unwrap();
        let lines = polyline_points(&svg);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].iter().all(|w| (w.norm() - 0.7).abs() < 1e-8));
        assert_eq!(lines[0].first(), lines[0].last());
        assert!(render_boundary_curve(&identity(), 0.7, 100, &vp).is_err());
    }

    #[test]
    fn determinism_and_comment_escaping() {
        let f = counterexample(1.25).unwrap();
        let spec = SceneSpec::whole_image(FamilySpec::Counterexample { gamma: 1.25 }, &f).unwrap();
        let a = render_image_domain(&spec, &f).unwrap();
        let b = render_image_domain(&spec, &f).unwrap();
        assert_eq!(a, b);
        let comment = a.lines().find(|l| l.starts_with("<!--")).unwrap();
        assert!(!comment[4..comment.len() - 3].contains("--"));
    }

    #[test]
    fn bad_specs() {
        let f = identity();
        let mut spec = SceneSpec::zoom(FamilySpec::Identity, Complex64::default()).unwrap();
        spec.samples_per_curve = 64;
        assert!(render_image_domain(&spec, &f).is_err());
        assert!(Viewport::new(Complex64::default(), 0.0).is_err());
    }
}
