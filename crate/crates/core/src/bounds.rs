//! Sharp bounds for `M(alpha, zeta, n)`: Taylor coefficients, growth
//! `Φ(r) <= |f(z)| <= Ψ(r)`, the covering radius and the area of `f(D_r)`.
//!
//! Growth, covering and area follow the theorem hypotheses `0 <= alpha < 1`;
//! a complex `zeta` is replaced by `|zeta|` and the report says so.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complexfn::{hyp2f1, pow_m1_over_exponent, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::mappings::{extremal, ClassParams, ExtremalSpec, HarmonicMapping};
use crate::quadrature;
use crate::report::BoundReport;

/// `|2 alpha - 1|` below this selects the logarithmic branch.
pub const LOG_BRANCH_WIDTH: f64 = 1e-9;
/// Tolerance handed to the quadrature engine for the one-dimensional bound
/// integrals; well below the 1e-9 agreement the checks ask for.
pub const BOUND_QUAD_TOL: f64 = 1e-13;
/// Largest allowed gap between `|f(±r)|` of the extremal map and `Φ`, `Ψ`.
pub const SHARPNESS_TOL: f64 = 1e-8;

/// `(1/k!) ∏_{j=2}^{k} (j - 2 alpha)`, the bound on `|a_k|` for an analytic
/// part convex of order `alpha`. `k = 1` gives the normalization `1`.
pub fn coeff_bound_a(k: u32, alpha: f64) -> Result<f64> {
    if !(-0.5..1.0).contains(&alpha) {
        return Err(Error::param(format!("alpha = {alpha} outside [-1/2, 1)")));
    }
    if k == 0 {
        return Err(Error::param("coefficient index must be at least 1"));
    }
    Ok((2..=k).map(|j| (j as f64 - 2.0 * alpha) / j as f64).product())
}

/// Bound on `|b_{k+n}|`: `|zeta|/(n+1)` for `k = 1`, otherwise
/// `|zeta| / ((k+n)(k-1)!) ∏_{j=2}^{k} (j - 2 alpha)`.
pub fn coeff_bound_b(k: u32, n: u32, alpha: f64, zeta: Complex64) -> Result<f64> {
    let params = ClassParams::new(alpha, zeta, n).map_err(|e| Error::param(e.to_string()))?;
    if k == 0 {
        return Err(Error::param("coefficient index must be at least 1"));
    }
    let modulus = params.zeta.norm();
    let kn = (k + n) as f64;
    if k == 1 {
        return Ok(modulus / kn);
    }
    let prod: f64 = (2..=k).map(|j| (j as f64 - 2.0 * alpha) / (j - 1) as f64).product();
    Ok(modulus / kn * prod)
}

/// Largest `|(k+n) b_{k+n} - zeta k a_k|`, `1 <= k <= kmax`, on the Taylor
/// arrays of `f`; also `b_1 .. b_n` must vanish.
pub fn verify_coeff_relation(
    f: &HarmonicMapping,
    n: u32,
    zeta: Complex64,
    kmax: u32,
    tol: f64,
) -> Result<BoundReport> {
    let (a, b) = match (f.taylor_h(), f.taylor_g()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::MissingSeries("coefficient relation needs Taylor arrays")),
    };
    let need = (kmax + n) as usize;
    if a.order() < kmax as usize || b.order() < need {
        return Err(Error::MissingSeries("Taylor arrays too short for the requested order"));
    }
    let mut worst = (0.0f64, 0u32);
    for k in 1..=kmax {
        let res = ((k + n) as f64 * b.coeff((k + n) as usize) - zeta * k as f64 * a.coeff(k as usize)).norm();
        if res > worst.0 {
            worst = (res, k);
        }
    }
    let low = (1..=n as usize).map(|j| b.coeff(j).norm()).fold(0.0, f64::max);
    let residual = worst.0.max(low);
    Ok(BoundReport::new(
        format!("coefficient relation (k+n)b_(k+n) = ζ k a_k, n={n}, k<={kmax}"),
        residual <= tol,
        tol - residual,
    )
    .value("max_residual", residual)
    .value("worst_k", worst.1 as f64)
    .value("low_order_b", low)
    .value("tol", tol))
}

/// Compares the Taylor coefficients of the unrotated extremal map with the
/// coefficient bounds for `k <= kmax`.
pub fn check_coefficient_sharpness(params: &ClassParams, kmax: u32, tol: f64) -> Result<BoundReport> {
    let f = extremal(&ExtremalSpec::unrotated(*params))?;
    let (a, b) = (f.taylor_h().unwrap(), f.taylor_g().unwrap());
    let mut worst = 0.0f64;
    for k in 1..=kmax {
        let da = (a.coeff(k as usize).norm() - coeff_bound_a(k, params.alpha)?).abs();
        let db = (b.coeff((k + params.n) as usize).norm()
            - coeff_bound_b(k, params.n, params.alpha, params.zeta)?)
        .abs();
        worst = worst.max(da).max(db);
    }
    let relation = verify_coeff_relation(&f, params.n, params.zeta, kmax, DEFAULT_TOL)?;
    let residual = relation.values["max_residual"];
    Ok(BoundReport::new(
        format!(
            "coefficient sharpness (α={}, ζ={}, n={})",
            params.alpha, params.zeta, params.n
        ),
        worst <= tol && residual <= DEFAULT_TOL,
        (tol - worst).min(DEFAULT_TOL - residual),
    )
    .value("max_bound_gap", worst)
    .value("relation_residual", residual)
    .value("kmax", kmax as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMode {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthBounds {
    pub phi: f64,
    pub psi: f64,
    pub r: f64,
    pub params: ClassParams,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaBounds {
    pub lower: f64,
    pub upper: f64,
    pub r: f64,
    pub params: ClassParams,
    pub notes: Vec<String>,
}

/// Parameter-range check shared by growth, covering and area: returns
/// `(alpha, |zeta|, n)` and an annotation when `zeta` was not real
/// non-negative.
fn theorem_params(params: &ClassParams) -> Result<(f64, f64, u32, Vec<String>)> {
    if !(0.0..1.0).contains(&params.alpha) {
        return Err(Error::param(format!(
            "alpha = {} outside [0, 1) required by the growth/area bounds",
            params.alpha
        )));
    }
    let mut notes = Vec::new();
    if params.zeta.im != 0.0 || params.zeta.re < 0.0 {
        notes.push(format!("zeta = {} replaced by |zeta| = {}", params.zeta, params.zeta.norm()));
    }
    Ok((params.alpha, params.zeta.norm(), params.n, notes))
}

fn branch_exponent(alpha: f64) -> f64 {
    let p = 2.0 * alpha - 1.0;
    if p.abs() < LOG_BRANCH_WIDTH {
        0.0
    } else {
        p
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param(format!("radius {r} outside (0, 1)")));
    }
    Ok(())
}

/// `r^(n+1)/(n+1) 2F1(n+1, 2-2alpha; n+2; x r)`, i.e. `∫_0^r ρ^n (1 - xρ)^(2alpha-2) dρ`.
fn shear_integral(alpha: f64, n: u32, r: f64, x: f64) -> Result<f64> {
    let np1 = n as f64 + 1.0;
    let f = hyp2f1(np1, 2.0 - 2.0 * alpha, np1 + 1.0, Complex64::new(x * r, 0.0), DEFAULT_TOL)?;
    Ok(r.powf(np1) / np1 * f.re)
}

/// `Φ(r)` and `Ψ(r)`: the sharp lower and upper bounds for `|f(z)|` on `|z| = r`.
pub fn growth_bounds(r: f64, params: &ClassParams, mode: GrowthMode) -> Result<GrowthBounds> {
    check_radius(r)?;
    let (alpha, zeta, n, mut notes) = theorem_params(params)?;
    let (phi, psi) = match mode {
        GrowthMode::ClosedForm => {
            let p = branch_exponent(alpha);
            let one = |x: f64| Complex64::new(x, 0.0);
            let h_minus = pow_m1_over_exponent(one(1.0 + r), p)?.re;
            let h_plus = -pow_m1_over_exponent(one(1.0 - r), p)?.re;
            let (s_minus, s_plus) = if zeta == 0.0 {
                (0.0, 0.0)
            } else {
                (shear_integral(alpha, n, r, -1.0)?, shear_integral(alpha, n, r, 1.0)?)
            };
            if p == 0.0 {
                notes.push("logarithmic branch (alpha = 1/2)".into());
            }
            (h_minus - zeta * s_minus, h_plus + zeta * s_plus)
        }
        GrowthMode::Quadrature => {
            let e = 2.0 - 2.0 * alpha;
            let nn = n as i32;
            let phi = quadrature::integrate(
                |rho| Ok((1.0 - zeta * rho.powi(nn)) / (1.0 + rho).powf(e)),
                0.0,
                r,
                BOUND_QUAD_TOL,
            )?;
            let psi = quadrature::integrate(
                |rho| Ok((1.0 + zeta * rho.powi(nn)) / (1.0 - rho).powf(e)),
                0.0,
                r,
                BOUND_QUAD_TOL,
            )?;
            (phi, psi)
        }
    };
    Ok(GrowthBounds {
        phi,
        psi,
        r,
        params: *params,
        notes,
    })
}

/// Radius of the disk about the origin covered by every member: `Φ` at `r = 1`.
pub fn covering_radius(params: &ClassParams) -> Result<f64> {
    let (alpha, zeta, n, _) = theorem_params(params)?;
    let p = branch_exponent(alpha);
    let head = pow_m1_over_exponent(Complex64::new(2.0, 0.0), p)?.re;
    if zeta == 0.0 {
        return Ok(head);
    }
    let np1 = n as f64 + 1.0;
    let f = hyp2f1(np1, 2.0 - 2.0 * alpha, np1 + 1.0, Complex64::new(-1.0, 0.0), DEFAULT_TOL)?;
    Ok(head - zeta / np1 * f.re)
}

/// Node counts and tolerance for the polar area quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaQuad {
    pub radial: usize,
    pub angular: usize,
    pub tol: f64,
    pub max_doublings: u32,
}

impl Default for AreaQuad {
    fn default() -> Self {
        Self {
            radial: 128,
            angular: 256,
            tol: 1e-9,
            max_doublings: 6,
        }
    }
}

/// `∬_{|z|<r} (|h'|² - |g'|²) dx dy`, doubling both node counts until two
/// successive estimates agree to `tol` relative.
pub fn area(f: &HarmonicMapping, r: f64, quad: &AreaQuad) -> Result<f64> {
    check_radius(r)?;
    let jac = |z: Complex64| f.jacobian(z);
    let (mut radial, mut angular) = (quad.radial, quad.angular);
    let mut prev = quadrature::polar_disk(&jac, r, radial, angular)?;
    for _ in 0..quad.max_doublings {
        radial *= 2;
        angular *= 2;
        let next = quadrature::polar_disk(&jac, r, radial, angular)?;
        if (next - prev).abs() <= quad.tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        what: "polar area quadrature",
        limit: (quad.radial << quad.max_doublings) as u64 as usize,
    })
}

/// Monte-Carlo estimate of the same area with its standard error; used only
/// as an independent oracle.
pub fn area_monte_carlo(f: &HarmonicMapping, r: f64, samples: usize, seed: u64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        // uniform in the disk: radius ∝ sqrt(u)
        let rho = r * rng.gen::<f64>().sqrt();
        let theta = TAU * rng.gen::<f64>();
        let j = f.jacobian(Complex64::from_polar(rho, theta))?;
        sum += j;
        sum_sq += j * j;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    let disk = PI * r * r;
    Ok((disk * mean, disk * (var / m).sqrt()))
}

/// `2π ∫_0^r ρ (1 - |zeta|² ρ^(2n)) / (1 ± ρ)^(4(1-alpha)) dρ`.
pub fn area_bounds(params: &ClassParams, r: f64) -> Result<AreaBounds> {
    check_radius(r)?;
    let (alpha, zeta, n, notes) = theorem_params(params)?;
    let e = 4.0 * (1.0 - alpha);
    let z2 = zeta * zeta;
    let twice_n = 2 * n as i32;
    let integral = |sign: f64| {
        quadrature::integrate(
            |rho| Ok(rho * (1.0 - z2 * rho.powi(twice_n)) / (1.0 + sign * rho).powf(e)),
            0.0,
            r,
            BOUND_QUAD_TOL,
        )
        .map(|v| TAU * v)
    };
    Ok(AreaBounds {
        lower: integral(1.0)?,
        upper: integral(-1.0)?,
        r,
        params: *params,
        notes,
    })
}

/// Rotation of the extremal kernel for which `|f(-r conj(delta))| = Φ(r)`:
/// `delta^(n+2) = (-1)^(n+1)`, so `delta = 1` for odd `n`.
pub fn lower_extremal_rotation(n: u32) -> Complex64 {
    if n % 2 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, PI / (n as f64 + 2.0))
    }
}

/// Evaluates the extremal maps at the attainment points and compares with
/// the closed-form `Φ`, `Ψ`.
pub fn verify_sharpness(params: &ClassParams, radii: &[f64]) -> Result<BoundReport> {
    if params.zeta.im != 0.0 || params.zeta.re < 0.0 {
        return Err(Error::param("sharpness needs a real zeta >= 0"));
    }
    let upper_map = extremal(&ExtremalSpec::unrotated(*params))?;
    let delta = lower_extremal_rotation(params.n);
    let lower_map = extremal(&ExtremalSpec::new(*params, delta)?)?;
    let mut worst = (0.0f64, 0.0f64);
    for &r in radii {
        if r == 0.0 {
            continue;
        }
        let bounds = growth_bounds(r, params, GrowthMode::ClosedForm)?;
        let up = upper_map.evaluate(Complex64::new(r, 0.0))?.norm();
        let low = lower_map.evaluate(-r * delta.conj())?.norm();
        let dev = (up - bounds.psi).abs().max((low - bounds.phi).abs());
        if dev > worst.0 {
            worst = (dev, r);
        }
    }
    let mut report = BoundReport::new(
        format!(
            "growth sharpness (α={}, ζ={}, n={})",
            params.alpha, params.zeta, params.n
        ),
        worst.0 <= SHARPNESS_TOL,
        SHARPNESS_TOL - worst.0,
    )
    .value("max_deviation", worst.0)
    .value("worst_r", worst.1)
    .value("lower_delta_arg", delta.arg());
    if params.n % 2 == 0 {
        report = report.note("even n: lower bound attained by the rotated extremal map");
    }
    Ok(report)
}

/// Largest gap between closed-form and quadrature `Φ`, `Ψ` over `radii`.
pub fn growth_consistency(params: &ClassParams, radii: &[f64], tol: f64) -> Result<BoundReport> {
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for &r in radii {
        let closed = growth_bounds(r, params, GrowthMode::ClosedForm)?;
        let quad = growth_bounds(r, params, GrowthMode::Quadrature)?;
        worst = worst.max((closed.phi - quad.phi).abs()).max((closed.psi - quad.psi).abs());
        if !(closed.phi > 0.0 && closed.phi <= closed.psi) {
            return Err(Error::param(format!("growth bounds out of order at r = {r}")));
        }
        notes = closed.notes;
    }
    let mut report = BoundReport::new(
        format!(
            "growth closed form vs quadrature (α={}, ζ={}, n={})",
            params.alpha, params.zeta, params.n
        ),
        worst <= tol,
        tol - worst,
    )
    .value("max_difference", worst)
    .value("tol", tol);
    for n in notes {
        report = report.note(n);
    }
    Ok(report)
}

/// Covering radius against `Φ(1 - eps)`.
pub fn covering_check(params: &ClassParams, eps: f64, tol: f64) -> Result<BoundReport> {
    let radius = covering_radius(params)?;
    let phi = growth_bounds(1.0 - eps, params, GrowthMode::ClosedForm)?.phi;
    let gap = (radius - phi).abs();
    Ok(BoundReport::new(
        format!(
            "covering radius (α={}, ζ={}, n={})",
            params.alpha, params.zeta, params.n
        ),
        gap <= tol,
        tol - gap,
    )
    .value("covering_radius", radius)
    .value("phi_near_boundary", phi)
    .value("eps", eps))
}

/// Area of `f(D_r)` against the area bounds for each radius. The relative
/// slack `quad.tol` absorbs quadrature error.
pub fn area_sandwich(
    f: &HarmonicMapping,
    params: &ClassParams,
    radii: &[f64],
    quad: &AreaQuad,
) -> Result<BoundReport> {
    let mut margin = f64::INFINITY;
    let mut worst_r = 0.0;
    for &r in radii {
        let a = area(f, r, quad)?;
        let b = area_bounds(params, r)?;
        let slack = quad.tol * a.abs().max(1.0);
        let m = ((a - b.lower) + slack).min((b.upper - a) + slack) / a.abs().max(1e-300);
        if m < margin {
            margin = m;
            worst_r = r;
        }
    }
    Ok(BoundReport::new(
        format!(
            "area sandwich for {} (α={}, ζ={}, n={})",
            f.label(),
            params.alpha,
            params.zeta,
            params.n
        ),
        margin >= 0.0,
        margin,
    )
    .value("worst_r", worst_r))
}

/// Parameter lattice used by the bound verifications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub alphas: Vec<f64>,
    pub ns: Vec<u32>,
    pub radii: Vec<f64>,
}

impl Default for Lattice {
    fn default() -> Self {
        Self {
            alphas: vec![0.0, 0.25, 0.5, 0.75],
            ns: vec![1, 2, 3],
            radii: (1..=9).map(|k| k as f64 / 10.0).collect(),
        }
    }
}

impl Lattice {
    /// `zeta ∈ {0, 0.3, 0.99/(2n-1)}`, skipping values beyond `1/(2n-1)`.
    pub fn points(&self) -> Vec<ClassParams> {
        let mut out = Vec::new();
        for &n in &self.ns {
            let bound = ClassParams::zeta_bound(n);
            for &alpha in &self.alphas {
                for zeta in [0.0, 0.3, 0.99 * bound] {
                    if let Ok(p) = ClassParams::real(alpha, zeta, n) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}
