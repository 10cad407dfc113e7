//! Injectivity testing: the symmetric collision of `f_gamma`, a grid scan
//! with collision refinement, and a discrete winding number.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mappings::{counterexample, HarmonicMapping};

pub const DEFAULT_COLLISION_TOL: f64 = 1e-8;
pub const DEFAULT_SEPARATION_FLOOR: f64 = 0.05;
pub const DEFAULT_SCAN_RADIUS: f64 = 0.999;
const MAX_BISECTIONS: usize = 200;
const MAX_NEWTON_STEPS: usize = 100;
const MAX_HALVINGS: usize = 40;
/// Candidates refined by the general (non-symmetric) search, best first.
const MAX_REFINED_CANDIDATES: usize = 512;

/// Infimum of the admissible `r0` for the symmetric collision of `f_gamma`:
/// `arg(1 - r e^{iθ})` reaches `-π/(γ+1)` only when `arcsin r > π/(γ+1)`.
pub fn feasibility_threshold(gamma: f64) -> Result<f64> {
    if !(gamma > 1.0 && gamma <= 1.75) {
        return Err(Error::param(format!("gamma = {gamma} outside (1, 7/4]")));
    }
    Ok((PI / (gamma + 1.0)).sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule", content = "r0")]
pub enum RStrategy {
    /// `r0 = (threshold + 1)/2`.
    Midpoint,
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionSearchParams {
    pub gamma: f64,
    pub r_strategy: RStrategy,
    pub tol: f64,
}

impl CollisionSearchParams {
    pub fn new(gamma: f64, r_strategy: RStrategy, tol: f64) -> Result<Self> {
        feasibility_threshold(gamma)?;
        if !(tol > 0.0) {
            return Err(Error::param(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self {
            gamma,
            r_strategy,
            tol,
        })
    }

    pub fn midpoint(gamma: f64) -> Result<Self> {
        Self::new(gamma, RStrategy::Midpoint, 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricCollision {
    pub gamma: f64,
    pub r0: f64,
    pub theta0: f64,
    pub threshold: f64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub f_z1: Complex64,
    pub image_gap: f64,
    pub separation: f64,
}

/// Solves `arg(1 - r0 e^{iθ}) = -π/(γ+1)` for `θ ∈ (arccos r0, π)` by
/// bisection and returns the conjugate pair `r0 e^{±iθ0}`, which `f_gamma`
/// maps to the same real point.
///
/// On `(0, π)` the argument falls from `0` to `-arcsin r0` at
/// `θ = arccos r0` and climbs back to `0` at `π`; the outer branch is used
/// because its root sits much farther from the real axis.
pub fn find_symmetric_collision(p: &CollisionSearchParams) -> Result<SymmetricCollision> {
    let threshold = feasibility_threshold(p.gamma)?;
    let r0 = match p.r_strategy {
        RStrategy::Midpoint => 0.5 * (threshold + 1.0),
        RStrategy::Explicit(r) => r,
    };
    if !(r0 > threshold) {
        return Err(Error::Infeasible { r0, threshold });
    }
    if r0 >= 1.0 {
        return Err(Error::param(format!("r0 = {r0} must be below 1")));
    }
    let target = -PI / (p.gamma + 1.0);
    let arg = |theta: f64| (-r0 * theta.sin()).atan2(1.0 - r0 * theta.cos());
    // G is negative at the bottom of the valley and positive near π
    let (mut lo, mut hi) = (r0.acos(), PI);
    let mut converged = false;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if arg(mid) - target < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !converged && hi - lo > 1e-15 {
        return Err(Error::NonConvergence {
            what: "collision angle bisection",
            limit: MAX_BISECTIONS,
        });
    }
    let theta0 = 0.5 * (lo + hi);
    let f = counterexample(p.gamma)?;
    let z1 = Complex64::from_polar(r0, theta0);
    let z2 = z1.conj();
    let f_z1 = f.evaluate(z1)?;
    let image_gap = (f_z1 - f.evaluate(z2)?).norm();
    if f_z1.im.abs() > p.tol || image_gap > 2.0 * p.tol {
        return Err(Error::NonConvergence {
            what: "symmetric collision (residual above tolerance)",
            limit: MAX_BISECTIONS,
        });
    }
    Ok(SymmetricCollision {
        gamma: p.gamma,
        r0,
        theta0,
        threshold,
        z1,
        z2,
        f_z1,
        image_gap,
        separation: (z1 - z2).norm(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub r: f64,
    /// Angles per circle; the grid has `cells / 4` circles.
    pub cells: usize,
    pub collision_tol: f64,
    pub separation_floor: f64,
}

impl ScanParams {
    pub fn new(r: f64, cells: usize) -> Result<Self> {
        let p = Self {
            r,
            cells,
            collision_tol: DEFAULT_COLLISION_TOL,
            separation_floor: DEFAULT_SEPARATION_FLOOR,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::param(format!("scan radius {} outside (0, 1)", self.r)));
        }
        if self.cells < 64 {
            return Err(Error::param(format!("need at least 64 cells, got {}", self.cells)));
        }
        if !(self.collision_tol > 0.0 && self.separation_floor > 0.0) {
            return Err(Error::param("collision tolerance and separation floor must be positive"));
        }
        Ok(())
    }

    fn circles(&self) -> usize {
        (self.cells / 4).max(16)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedAtResolution,
    Collision,
    DegenerateJacobian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceReport {
    pub verdict: Verdict,
    pub z1: Option<[f64; 2]>,
    pub z2: Option<[f64; 2]>,
    pub image_gap: Option<f64>,
    pub resolution: usize,
    pub radius: f64,
    pub circles: usize,
    /// `|f(z1) - f(z2)|` after refinement, or the smallest gap reached by
    /// any unconfirmed candidate.
    pub refinement_residual: f64,
    pub jacobian_min: f64,
    /// Grid point of smallest Jacobian (the offending point when degenerate).
    pub jacobian_argmin: [f64; 2],
    pub candidates: usize,
    pub unconfirmed: usize,
    pub notes: Vec<String>,
}

impl UnivalenceReport {
    pub fn collision_pair(&self) -> Option<(Complex64, Complex64)> {
        match (self.z1, self.z2) {
            (Some(a), Some(b)) => Some((Complex64::new(a[0], a[1]), Complex64::new(b[0], b[1]))),
            _ => None,
        }
    }
}

struct Grid {
    circles: usize,
    angles: usize,
    radius: f64,
    /// row-major `(circle i, angle j)`, circle 0 is the origin
    values: Vec<Complex64>,
}

impl Grid {
    fn point(&self, i: usize, j: usize) -> Complex64 {
        let rho = self.radius * i as f64 / self.circles as f64;
        Complex64::from_polar(rho, TAU * (j % self.angles) as f64 / self.angles as f64)
    }

    fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.angles + j % self.angles]
    }
}

/// Largest `|f(conj z) - conj f(z)|` relative to `|f|` on a few samples;
/// zero for maps with real Taylor coefficients.
fn mirror_defect(f: &HarmonicMapping, r: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..7 {
        let z = Complex64::from_polar(r * (0.3 + 0.1 * k as f64), 0.4 + 0.37 * k as f64);
        let a = f.evaluate(z.conj())?;
        let b = f.evaluate(z)?.conj();
        worst = worst.max((a - b).norm() / a.norm().max(1.0));
    }
    Ok(worst)
}

/// Samples `f` on the polar grid, bucketizes the images of grid quads and
/// refines candidate pairs into collisions `f(z1) = f(z2)`,
/// `|z1 - z2| >= separation_floor`, `|z1|, |z2| <= r`.
///
/// Maps with real coefficients are first searched for conjugate pairs (sign
/// changes of `Im f` along circles in the upper half-disk), which are exact
/// by symmetry. Unconfirmed candidates are reported but never change a
/// certified verdict.
pub fn univalence_scan(f: &HarmonicMapping, p: &ScanParams) -> Result<UnivalenceReport> {
    p.validate()?;
    let circles = p.circles();
    let angles = p.cells;
    let mut grid = Grid {
        circles,
        angles,
        radius: p.r,
        values: Vec::new(),
    };
    let rows: Vec<(Vec<Complex64>, (f64, Complex64))> = (0..=circles)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(angles);
            let mut jmin = (f64::INFINITY, Complex64::default());
            for j in 0..angles {
                let z = grid.point(i, j);
                row.push(f.evaluate(z)?);
                let jac = f.jacobian(z)?;
                if jac < jmin.0 {
                    jmin = (jac, z);
                }
            }
            Ok((row, jmin))
        })
        .collect::<Result<_>>()?;
    let mut jac_min = (f64::INFINITY, Complex64::default());
    for (row, jm) in rows {
        grid.values.extend(row);
        if jm.0 < jac_min.0 {
            jac_min = jm;
        }
    }

    let mut report = UnivalenceReport {
        verdict: Verdict::CertifiedAtResolution,
        z1: None,
        z2: None,
        image_gap: None,
        resolution: p.cells,
        radius: p.r,
        circles,
        refinement_residual: 0.0,
        jacobian_min: jac_min.0,
        jacobian_argmin: [jac_min.1.re, jac_min.1.im],
        candidates: 0,
        unconfirmed: 0,
        notes: Vec::new(),
    };

    let mut found = None;
    if mirror_defect(f, p.r)? < 1e-13 {
        report.notes.push("real coefficients: conjugate-pair search first".into());
        found = symmetric_search(f, &grid, p, &mut report)?;
    }
    if found.is_none() {
        found = general_search(f, &grid, p, &mut report)?;
    }
    if let Some((z1, z2, gap)) = found {
        report.verdict = Verdict::Collision;
        report.z1 = Some([z1.re, z1.im]);
        report.z2 = Some([z2.re, z2.im]);
        report.image_gap = Some(gap);
        report.refinement_residual = gap;
    } else if jac_min.0 <= 0.0 {
        report.verdict = Verdict::DegenerateJacobian;
        report.notes.push(format!("jacobian {} at z = {}", jac_min.0, jac_min.1));
    }
    if report.unconfirmed > 0 {
        report.notes.push(format!(
            "{} candidate pair(s) did not refine to a collision; best gap {:e}",
            report.unconfirmed, report.refinement_residual
        ));
    }
    Ok(report)
}

/// Conjugate pairs: along each circle `ρ_i`, a sign change of `Im f`
/// between adjacent angles in the upper half-disk (far enough from the
/// real axis) is bisected; `f(z) = f(conj z)` holds exactly there up to the
/// `Im f` residual.
fn symmetric_search(
    f: &HarmonicMapping,
    grid: &Grid,
    p: &ScanParams,
    report: &mut UnivalenceReport,
) -> Result<Option<(Complex64, Complex64, f64)>> {
    let half = grid.angles / 2;
    for i in 1..=grid.circles {
        let rho = p.r * i as f64 / grid.circles as f64;
        for j in 0..half {
            let (a, b) = (grid.value(i, j).im, grid.value(i, j + 1).im);
            if a == 0.0 || b == 0.0 || a.signum() == b.signum() {
                continue;
            }
            let step = TAU / grid.angles as f64;
            let (mut lo, mut hi) = (step * j as f64, step * (j + 1) as f64);
            // both conjugate points must be separated by the floor
            if 2.0 * rho * lo.sin().min(hi.sin()) < p.separation_floor {
                continue;
            }
            report.candidates += 1;
            let im = |t: f64| f.evaluate(Complex64::from_polar(rho, t)).map(|w| w.im);
            let sign_lo = a.signum();
            for _ in 0..MAX_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if im(mid)?.signum() == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let theta = if im(lo)?.abs() <= im(hi)?.abs() { lo } else { hi };
            let z1 = Complex64::from_polar(rho, theta);
            let z2 = z1.conj();
            let gap = (f.evaluate(z1)? - f.evaluate(z2)?).norm();
            if gap <= p.collision_tol {
                return Ok(Some((z1, z2, gap)));
            }
            report.unconfirmed += 1;
            report.refinement_residual = if report.unconfirmed == 1 {
                gap
            } else {
                report.refinement_residual.min(gap)
            };
        }
    }
    Ok(None)
}

#[derive(Clone, Copy)]
struct Quad {
    i: usize,
    j: usize,
    center: Complex64,
    /// image corners in cyclic order
    corners: [Complex64; 4],
    pad: f64,
    lo: [f64; 2],
    hi: [f64; 2],
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 > 0.0 {
        ((p - a).re * ab.re + (p - a).im * ab.im) / len2
    } else {
        0.0
    };
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

fn segments_distance(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let (d1, d2) = (cross(b - a, c - a), cross(b - a, d - a));
    let (d3, d4) = (cross(d - c, a - c), cross(d - c, b - c));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Crossing-number test; adequate for the (possibly non-convex) images of
/// small grid quads.
fn inside(p: Complex64, poly: &[Complex64; 4]) -> bool {
    let mut odd = false;
    for k in 0..4 {
        let (a, b) = (poly[k], poly[(k + 1) % 4]);
        if (a.im > p.im) != (b.im > p.im) && p.re < a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re) {
            odd = !odd;
        }
    }
    odd
}

fn polygon_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    if inside(a[0], b) || inside(b[0], a) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for k in 0..4 {
        for l in 0..4 {
            best = best.min(segments_distance(a[k], a[(k + 1) % 4], b[l], b[(l + 1) % 4]));
        }
    }
    best
}

fn quads(grid: &Grid) -> Vec<Quad> {
    let mut out = Vec::with_capacity(grid.circles * grid.angles);
    for i in 0..grid.circles {
        for j in 0..grid.angles {
            let corners = [
                grid.value(i, j),
                grid.value(i, j + 1),
                grid.value(i + 1, j + 1),
                grid.value(i + 1, j),
            ];
            let mut lo = [f64::INFINITY; 2];
            let mut hi = [f64::NEG_INFINITY; 2];
            for w in corners {
                lo = [lo[0].min(w.re), lo[1].min(w.im)];
                hi = [hi[0].max(w.re), hi[1].max(w.im)];
            }
            // allowance for the curvature of the image edges
            let pad = 0.1 * ((hi[0] - lo[0]) + (hi[1] - lo[1]));
            let center = 0.25 * (grid.point(i, j) + grid.point(i, j + 1) + grid.point(i + 1, j) + grid.point(i + 1, j + 1));
            out.push(Quad {
                i,
                j,
                center,
                corners,
                pad,
                lo: [lo[0] - pad, lo[1] - pad],
                hi: [hi[0] + pad, hi[1] + pad],
            });
        }
    }
    out
}

/// Image-space hash of quad bounding boxes; pairs of quads whose boxes
/// overlap and whose preimages are far apart are refined by damped
/// minimum-norm Gauss–Newton.
fn general_search(
    f: &HarmonicMapping,
    grid: &Grid,
    p: &ScanParams,
    report: &mut UnivalenceReport,
) -> Result<Option<(Complex64, Complex64, f64)>> {
    let qs = quads(grid);
    let mut extents: Vec<f64> = qs.iter().map(|q| (q.hi[0] - q.lo[0]).max(q.hi[1] - q.lo[1])).collect();
    extents.sort_by(f64::total_cmp);
    let cell = 2.0 * extents[extents.len() / 2].max(1e-12);
    let key = |x: f64, y: f64| ((x / cell).floor() as i64, (y / cell).floor() as i64);

    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (idx, q) in qs.iter().enumerate() {
        let (x0, y0) = key(q.lo[0], q.lo[1]);
        let (x1, y1) = key(q.hi[0], q.hi[1]);
        if (x1 - x0 + 1) * (y1 - y0 + 1) > 4096 {
            continue; // pathological box near a singularity; skipped, not claimed
        }
        for x in x0..=x1 {
            for y in y0..=y1 {
                buckets.entry((x, y)).or_default().push(idx);
            }
        }
    }
    // preimage quad diameter bound, to keep pairs that could straddle the floor
    let slack = p.r * (1.0 / grid.circles as f64 + TAU / grid.angles as f64);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut keys: Vec<_> = buckets.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let members = &buckets[&k];
        for (a_pos, &a) in members.iter().enumerate() {
            for &b in &members[a_pos + 1..] {
                let (qa, qb) = (&qs[a], &qs[b]);
                let overlap = qa.lo[0] <= qb.hi[0] && qb.lo[0] <= qa.hi[0] && qa.lo[1] <= qb.hi[1] && qb.lo[1] <= qa.hi[1];
                if overlap
                    && (qa.center - qb.center).norm() >= p.separation_floor + slack
                    && polygon_distance(&qa.corners, &qb.corners) <= qa.pad + qb.pad
                {
                    pairs.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    report.candidates += pairs.len();
    if pairs.is_empty() {
        return Ok(None);
    }
    // best-looking candidates first; ties by preimage order
    let mut scored: Vec<(f64, usize, usize)> = pairs
        .iter()
        .map(|&(a, b)| {
            let (qa, qb) = (&qs[a], &qs[b]);
            let gap = (grid.value(qa.i, qa.j) - grid.value(qb.i, qb.j)).norm();
            (gap, a, b)
        })
        .collect();
    scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    scored.truncate(MAX_REFINED_CANDIDATES);

    for chunk in scored.chunks(32) {
        let results: Vec<Result<Refined>> = chunk
            .par_iter()
            .map(|&(_, a, b)| refine_pair(f, qs[a].center, qs[b].center, p))
            .collect();
        for res in results {
            match res? {
                Refined::Collision(z1, z2, gap) => {
                    let (z1, z2) = if (z1.re, z1.im) <= (z2.re, z2.im) { (z1, z2) } else { (z2, z1) };
                    return Ok(Some((z1, z2, gap)));
                }
                Refined::Skipped => {}
                Refined::Stalled(gap) => {
                    report.refinement_residual = if report.unconfirmed == 0 {
                        gap
                    } else {
                        report.refinement_residual.min(gap)
                    };
                    report.unconfirmed += 1;
                }
            }
        }
    }
    Ok(None)
}

enum Refined {
    Collision(Complex64, Complex64, f64),
    Stalled(f64),
    /// the starting pair already violates the disk or separation constraint
    Skipped,
}

/// Damped Gauss–Newton on `F(z1, z2) = f(z1) - f(z2) = 0` (two equations in
/// four real unknowns) with the minimum-norm step `Jᵀ(JJᵀ)⁻¹(-F)`; a step is
/// halved until it lowers `|F|` and keeps both points in the scan disk and
/// at least `separation_floor` apart.
fn refine_pair(f: &HarmonicMapping, mut z1: Complex64, mut z2: Complex64, p: &ScanParams) -> Result<Refined> {
    let admissible = |a: Complex64, b: Complex64| a.norm() <= p.r && b.norm() <= p.r && (a - b).norm() >= p.separation_floor;
    if !admissible(z1, z2) {
        return Ok(Refined::Skipped);
    }
    let mut residual = f.evaluate(z1)? - f.evaluate(z2)?;
    for _ in 0..MAX_NEWTON_STEPS {
        if residual.norm() <= p.collision_tol {
            return Ok(Refined::Collision(z1, z2, residual.norm()));
        }
        let d1 = f.real_differential(z1)?;
        let d2 = f.real_differential(z2)?;
        // J = [D1, -D2], rows are (Re, Im) of F
        let j = [
            [d1[0][0], d1[0][1], -d2[0][0], -d2[0][1]],
            [d1[1][0], d1[1][1], -d2[1][0], -d2[1][1]],
        ];
        let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (m00, m01, m11) = (dot(&j[0], &j[0]), dot(&j[0], &j[1]), dot(&j[1], &j[1]));
        let det = m00 * m11 - m01 * m01;
        if !(det.abs() > 1e-300) {
            return Ok(Refined::Stalled(residual.norm()));
        }
        let (rx, ry) = (-residual.re, -residual.im);
        let y0 = (m11 * rx - m01 * ry) / det;
        let y1 = (m00 * ry - m01 * rx) / det;
        let step: [f64; 4] = std::array::from_fn(|k| j[0][k] * y0 + j[1][k] * y1);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let a = z1 + Complex64::new(step[0], step[1]) * t;
            let b = z2 + Complex64::new(step[2], step[3]) * t;
            if admissible(a, b) {
                let r = f.evaluate(a)? - f.evaluate(b)?;
                if r.norm() < residual.norm() {
                    z1 = a;
                    z2 = b;
                    residual = r;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if residual.norm() <= p.collision_tol {
        return Ok(Refined::Collision(z1, z2, residual.norm()));
    }
    Ok(Refined::Stalled(residual.norm()))
}

/// Winding number of `θ ↦ f(r e^{iθ}) - w`, accumulating argument
/// increments; intervals whose increment reaches π/2 are bisected.
pub fn winding_number(f: &HarmonicMapping, r: f64, w: Complex64, m: usize) -> Result<i64> {
    if m < 256 {
        return Err(Error::param(format!("need at least 256 samples, got {m}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param(format!("radius {r} outside (0, 1)")));
    }
    const ON_CURVE: f64 = 1e-9;
    let at = |theta: f64| -> Result<Complex64> {
        let d = f.evaluate(Complex64::from_polar(r, theta))? - w;
        if d.norm() < ON_CURVE {
            return Err(Error::OnCurve { w, distance: d.norm() });
        }
        Ok(d)
    };
    fn increment(
        at: &dyn Fn(f64) -> Result<Complex64>,
        t0: f64,
        t1: f64,
        v0: Complex64,
        v1: Complex64,
        depth: u32,
    ) -> Result<f64> {
        let d = (v1 / v0).arg();
        if d.abs() < 0.5 * PI || depth == 0 {
            return Ok(d);
        }
        let tm = 0.5 * (t0 + t1);
        let vm = at(tm)?;
        Ok(increment(at, t0, tm, v0, vm, depth - 1)? + increment(at, tm, t1, vm, v1, depth - 1)?)
    }
    let step = TAU / m as f64;
    let first = at(0.0)?;
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=m {
        let t1 = step * k as f64;
        let v1 = if k == m { first } else { at(t1)? };
        total += increment(&at, t1 - step, t1, prev, v1, 40)?;
        prev = v1;
    }
    Ok((total / TAU).round() as i64)
}
