//! Sampled certification of the analytic-side conditions: the curvature
//! quantity `Re(1 + z h''/h')`, membership in `M(alpha, zeta, n)` and
//! `P(beta)`, Kaplan's arc-integral criterion and the close-to-convexity
//! radius for `g' = z^n h'`.
//!
//! Every verdict here is "certified at resolution": it holds on the grid the
//! report embeds, nothing more.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_disk, Error, Result};
use crate::mappings::{
    AnalyticFn, ClassParams, ExtremalG, ExtremalH, HarmonicMapping, ShearCombination,
    SINGULAR_DERIVATIVE,
};
use crate::report::{BoundReport, GridInfo};

/// Outermost radius used when estimating suprema over the open disk.
pub const BOUNDARY_RADIUS: f64 = 1.0 - 1e-4;
/// Number of unimodular `lambda` sampled by the Kaplan check.
pub const KAPLAN_LAMBDA_SAMPLES: usize = 32;

/// Concentric circles `|z| = r_i` with `M` equally spaced angles each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles_per_circle: usize,
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angles_per_circle: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::param("grid needs at least one radius"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("grid radii must be strictly increasing"));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::param("grid radii must lie in (0, 1)"));
        }
        if angles_per_circle < 8 {
            return Err(Error::param("need at least 8 angles per circle"));
        }
        Ok(Self {
            radii,
            angles_per_circle,
        })
    }

    /// `count` radii `max_radius * j / count`, `j = 1..=count`.
    pub fn uniform(max_radius: f64, count: usize, angles_per_circle: usize) -> Result<Self> {
        let radii = (1..=count)
            .map(|j| max_radius * j as f64 / count as f64)
            .collect();
        Self::new(radii, angles_per_circle)
    }

    /// Uniform radii up to `BOUNDARY_RADIUS`.
    pub fn to_boundary(count: usize, angles_per_circle: usize) -> Result<Self> {
        Self::uniform(BOUNDARY_RADIUS, count, angles_per_circle)
    }

    /// Superset grid: midpoints inserted between radii, angle count doubled.
    pub fn refined(&self) -> Self {
        let mut radii = Vec::with_capacity(2 * self.radii.len());
        let mut prev = 0.0;
        for &r in &self.radii {
            let mid = 0.5 * (prev + r);
            if mid > 0.0 {
                radii.push(mid);
            }
            radii.push(r);
            prev = r;
        }
        Self {
            radii,
            angles_per_circle: 2 * self.angles_per_circle,
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles_per_circle(&self) -> usize {
        self.angles_per_circle
    }

    pub fn circle(&self, r: f64) -> impl Iterator<Item = Complex64> + '_ {
        let m = self.angles_per_circle;
        (0..m).map(move |j| Complex64::from_polar(r, TAU * j as f64 / m as f64))
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.radii.iter().flat_map(move |&r| self.circle(r))
    }

    pub fn info(&self) -> GridInfo {
        GridInfo {
            radii: self.radii.len(),
            max_radius: *self.radii.last().unwrap_or(&0.0),
            angles_per_circle: self.angles_per_circle,
        }
    }
}

/// Extremes of `Re(1 + z h''/h')` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub inf_est: f64,
    pub sup_est: f64,
    pub argmin_z: Complex64,
    pub argmax_z: Complex64,
    pub grid: GridInfo,
}

/// `beta` of the class `P(beta)`, `1 < beta <= 3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PBetaParams {
    pub beta: f64,
}

impl PBetaParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 1.0 && beta <= 1.5) {
            return Err(Error::param(format!("beta = {beta} outside (1, 3/2]")));
        }
        Ok(Self { beta })
    }
}

/// `1 + z h''(z)/h'(z)`.
pub fn curvature(h: &dyn AnalyticFn, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    let hp = h.derivative(z)?;
    if hp.norm() < SINGULAR_DERIVATIVE {
        return Err(Error::Singularity { z, modulus: hp.norm() });
    }
    Ok(1.0 + z * h.second_derivative(z)? / hp)
}

struct Extremes {
    min: f64,
    argmin: Complex64,
    max: f64,
    argmax: Complex64,
}

impl Extremes {
    fn empty() -> Self {
        Self {
            min: f64::INFINITY,
            argmin: Complex64::default(),
            max: f64::NEG_INFINITY,
            argmax: Complex64::default(),
        }
    }

    fn push(&mut self, z: Complex64, v: f64) {
        if v < self.min {
            self.min = v;
            self.argmin = z;
        }
        if v > self.max {
            self.max = v;
            self.argmax = z;
        }
    }

    /// First-seen wins on ties, so merging in index order is deterministic.
    fn merge(mut self, other: Self) -> Self {
        if other.min < self.min {
            self.min = other.min;
            self.argmin = other.argmin;
        }
        if other.max > self.max {
            self.max = other.max;
            self.argmax = other.argmax;
        }
        self
    }
}

pub fn curvature_extrema(h: &dyn AnalyticFn, grid: &DiskGrid) -> Result<CurvatureReport> {
    let per_circle: Vec<Extremes> = grid
        .radii()
        .par_iter()
        .map(|&r| {
            let mut ex = Extremes::empty();
            for z in grid.circle(r) {
                ex.push(z, curvature(h, z)?.re);
            }
            Ok(ex)
        })
        .collect::<Result<_>>()?;
    let ex = per_circle.into_iter().fold(Extremes::empty(), Extremes::merge);
    Ok(CurvatureReport {
        inf_est: ex.min,
        sup_est: ex.max,
        argmin_z: ex.argmin,
        argmax_z: ex.argmax,
        grid: grid.info(),
    })
}

/// Largest `|g'(z) - zeta z^n h'(z)|` over the grid, with its location.
pub fn shear_residual(
    f: &HarmonicMapping,
    zeta: Complex64,
    n: u32,
    grid: &DiskGrid,
) -> Result<(f64, Complex64)> {
    let mut worst = (0.0, Complex64::default());
    for z in grid.points() {
        let res = (f.g_prime(z)? - zeta * z.powu(n) * f.h_prime(z)?).norm();
        if res > worst.0 {
            worst = (res, z);
        }
    }
    Ok(worst)
}

/// Sampled membership in `M(alpha, zeta, n)`: passes iff
/// `inf Re(1 + z h''/h') >= alpha - tol` and `max |g' - zeta z^n h'| <= tol`
/// on the grid. The margin is the smaller of the two slacks.
pub fn check_membership(
    f: &HarmonicMapping,
    params: &ClassParams,
    grid: &DiskGrid,
    tol: f64,
) -> Result<BoundReport> {
    let curv = curvature_extrema(f.analytic_part().as_ref(), grid)?;
    let (residual, _) = shear_residual(f, params.zeta, params.n, grid)?;
    let curvature_slack = curv.inf_est - (params.alpha - tol);
    let residual_slack = tol - residual;
    let pass = curvature_slack >= 0.0 && residual_slack >= 0.0;
    Ok(BoundReport::new(
        format!(
            "membership M(α={}, ζ={}, n={})",
            params.alpha, params.zeta, params.n
        ),
        pass,
        curvature_slack.min(residual_slack),
    )
    .with_grid(grid.info())
    .with_witness(curv.argmin_z, curv.inf_est)
    .value("curvature_inf", curv.inf_est)
    .value("curvature_sup", curv.sup_est)
    .value("alpha", params.alpha)
    .value("shear_residual", residual)
    .value("tol", tol))
}

/// Sampled membership in `P(beta)`: `g' = z h'` and `Re(1 + z h''/h') < beta`.
pub fn check_pbeta(
    f: &HarmonicMapping,
    p: &PBetaParams,
    grid: &DiskGrid,
    tol: f64,
) -> Result<BoundReport> {
    let curv = curvature_extrema(f.analytic_part().as_ref(), grid)?;
    let (residual, _) = shear_residual(f, Complex64::new(1.0, 0.0), 1, grid)?;
    let curvature_slack = p.beta + tol - curv.sup_est;
    let residual_slack = tol - residual;
    let pass = curvature_slack >= 0.0 && residual_slack >= 0.0;
    Ok(BoundReport::new(
        format!("membership P(β={})", p.beta),
        pass,
        curvature_slack.min(residual_slack),
    )
    .with_grid(grid.info())
    .with_witness(curv.argmax_z, curv.sup_est)
    .value("curvature_sup", curv.sup_est)
    .value("beta", p.beta)
    .value("shear_residual", residual)
    .value("tol", tol))
}

/// Hypotheses of the `g' = lambda k z^n h'` criterion: delegates to
/// [`check_membership`] with `alpha = -1/2` and `zeta = lambda k`.
pub fn check_theorem_b_condition(
    f: &HarmonicMapping,
    lambda: Complex64,
    k: f64,
    n: u32,
    grid: &DiskGrid,
    tol: f64,
) -> Result<BoundReport> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::param(format!("|lambda| = {} must be 1", lambda.norm())));
    }
    if n == 0 {
        return Err(Error::Admissibility("n must be a positive integer".into()));
    }
    let bound = ClassParams::zeta_bound(n);
    if !(k > 0.0 && k <= bound * (1.0 + 1e-14)) {
        return Err(Error::Admissibility(format!(
            "k = {k} outside (0, 1/(2n-1)] = (0, {bound}]"
        )));
    }
    let params = ClassParams::new(-0.5, lambda * k, n)?;
    let mut report = check_membership(f, &params, grid, tol)?;
    report.check = format!("dilatation condition g' = λk zⁿh' (λ={lambda}, k={k}, n={n})");
    Ok(report
        .value("lambda_re", lambda.re)
        .value("lambda_im", lambda.im)
        .value("k", k)
        .note("zeta = lambda * k, alpha = -1/2"))
}

/// Result of the discrete Kaplan arc minimization on `|z| = r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcIntegral {
    /// Minimum over arcs of `∫ Re(1 + z F''/F') dθ`.
    pub min_integral: f64,
    pub start_angle: f64,
    pub arc_length: f64,
    /// Integral over the whole circle; `2π(1 + #zeros of F' inside)`.
    pub full_circle: f64,
}

/// Minimum over all arcs `θ1 < θ2 < θ1 + 2π` (endpoints on the `m` uniform
/// nodes, at least one step long) of the trapezoidal integral of
/// `Re(1 + z F''/F')` along `|z| = r`.
///
/// Kaplan's condition holds at radius `r` when this exceeds `-π`.
pub fn kaplan_min_arc_integral(f: &dyn AnalyticFn, r: f64, m: usize) -> Result<ArcIntegral> {
    if m < 64 {
        return Err(Error::param(format!("need at least 64 nodes, got {m}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param(format!("radius {r} outside (0, 1)")));
    }
    let step = TAU / m as f64;
    let mut phi = Vec::with_capacity(m);
    for j in 0..m {
        let z = Complex64::from_polar(r, step * j as f64);
        let fp = f.derivative(z)?;
        if fp.norm() < 1e-12 {
            return Err(Error::Singularity { z, modulus: fp.norm() });
        }
        phi.push((1.0 + z * f.second_derivative(z)? / fp).re);
    }
    // prefix sums of trapezoid segments over two turns
    let mut prefix = vec![0.0; 2 * m + 1];
    for k in 0..2 * m {
        let seg = 0.5 * (phi[k % m] + phi[(k + 1) % m]) * step;
        prefix[k + 1] = prefix[k] + seg;
    }
    // For each arc end e, the best start is the largest prefix value among
    // starts s < m with 1 <= e - s <= m - 1: a sliding-window maximum. Among
    // equal maxima the latest start (shortest arc) is kept.
    let mut best = (f64::INFINITY, 0usize, 0usize); // (integral, start, length)
    let mut window: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    for end in 1..2 * m {
        let s_new = end - 1;
        if s_new < m {
            while window.back().is_some_and(|&b| prefix[b] <= prefix[s_new]) {
                window.pop_back();
            }
            window.push_back(s_new);
        }
        while window.front().is_some_and(|&f| end - f > m - 1) {
            window.pop_front();
        }
        if let Some(&start) = window.front() {
            let v = prefix[end] - prefix[start];
            let len = end - start;
            if v < best.0 || (v == best.0 && (len, start) < (best.2, best.1)) {
                best = (v, start, len);
            }
        }
    }
    Ok(ArcIntegral {
        min_integral: best.0,
        start_angle: step * best.1 as f64,
        arc_length: step * best.2 as f64,
        full_circle: prefix[m],
    })
}

/// `r(alpha, n) = ((1 + 2 alpha)/(1 + 2n + 2 alpha))^(1/n)` for
/// `-1/2 < alpha < 0`, `n >= 2`.
pub fn cc_radius(alpha: f64, n: u32) -> Result<f64> {
    if !(alpha > -0.5 && alpha < 0.0) {
        return Err(Error::param(format!("alpha = {alpha} outside (-1/2, 0)")));
    }
    if n < 2 {
        return Err(Error::param(format!("n = {n} must be at least 2")));
    }
    let nf = n as f64;
    Ok(((1.0 + 2.0 * alpha) / (1.0 + 2.0 * nf + 2.0 * alpha)).powf(1.0 / nf))
}

/// `lambda_k = exp(2 pi i k / count)`.
pub fn unimodular_samples(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / count as f64))
        .collect()
}

/// Analytic parts for the close-to-convexity radius problem: `h` the
/// order-`alpha` kernel `∫(1 - t)^(2 alpha - 2)` and `g' = z^n h'`.
pub fn radius_problem_parts(alpha: f64, n: u32) -> (Arc<dyn AnalyticFn>, Arc<dyn AnalyticFn>) {
    let one = Complex64::new(1.0, 0.0);
    (
        Arc::new(ExtremalH { alpha, delta: one }),
        Arc::new(ExtremalG {
            alpha,
            zeta: one,
            n,
            delta: one,
        }),
    )
}

/// Kaplan check of `F_lambda = h - lambda g` at radius `r` over the sampled
/// `lambda`; the margin is `min_lambda(min arc integral) + π`.
pub fn kaplan_check(
    h: &Arc<dyn AnalyticFn>,
    g: &Arc<dyn AnalyticFn>,
    r: f64,
    m: usize,
    lambdas: &[Complex64],
) -> Result<BoundReport> {
    let results: Vec<(Complex64, ArcIntegral)> = lambdas
        .par_iter()
        .map(|&lambda| {
            let f = ShearCombination {
                h: h.clone(),
                g: g.clone(),
                lambda,
            };
            kaplan_min_arc_integral(&f, r, m).map(|a| (lambda, a))
        })
        .collect::<Result<_>>()?;
    let (worst_lambda, worst) = results
        .iter()
        .copied()
        .fold(None::<(Complex64, ArcIntegral)>, |acc, x| match acc {
            Some(a) if a.1.min_integral <= x.1.min_integral => Some(a),
            _ => Some(x),
        })
        .ok_or_else(|| Error::param("no lambda samples"))?;
    let margin = worst.min_integral + PI;
    Ok(BoundReport::new(format!("kaplan arc integral at r={r}"), margin > 0.0, margin)
        .with_witness(Complex64::from_polar(r, worst.start_angle), worst.min_integral)
        .value("radius", r)
        .value("min_arc_integral", worst.min_integral)
        .value("arc_length", worst.arc_length)
        .value("lambda_re", worst_lambda.re)
        .value("lambda_im", worst_lambda.im)
        .value("nodes", m as f64)
        .note(format!("{} unimodular lambda samples", lambdas.len())))
}

/// First radius (in the given order) at which the sampled Kaplan check
/// fails, with its report.
pub fn first_kaplan_violation(
    h: &Arc<dyn AnalyticFn>,
    g: &Arc<dyn AnalyticFn>,
    radii: &[f64],
    m: usize,
    lambdas: &[Complex64],
) -> Result<Option<BoundReport>> {
    for &r in radii {
        let report = kaplan_check(h, g, r, m, lambdas)?;
        if !report.pass {
            return Ok(Some(report));
        }
    }
    Ok(None)
}
