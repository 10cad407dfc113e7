//! Gauss–Legendre quadrature: fixed rules, composite rules with dyadic panel
//! refinement, and a polar tensor rule for integrals over `|z| <= r`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points per panel of the composite rule.
pub const PANEL_POINTS: usize = 16;
const MAX_PANEL_DOUBLINGS: u32 = 16;

/// Nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_POINTS))
}

/// Composite `PANEL_POINTS`-point rule with `panels` equal panels.
pub fn composite<F>(f: &F, a: f64, b: f64, panels: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let (nodes, weights) = panel_rule();
    let width = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights) {
            acc += f(mid + 0.5 * width * x)? * *w;
        }
        total += acc * (0.5 * width);
    }
    Ok(total)
}

/// Doubles the panel count until two successive composite estimates agree to
/// `tol * max(1, |I|)`.
pub fn integrate_complex<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut panels = 1;
    let mut coarse = composite(&f, a, b, panels)?;
    for _ in 0..MAX_PANEL_DOUBLINGS {
        panels *= 2;
        let fine = composite(&f, a, b, panels)?;
        if (fine - coarse).norm() <= tol * fine.norm().max(1.0) {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::NonConvergence {
        what: "adaptive Gauss-Legendre quadrature",
        limit: 1 << MAX_PANEL_DOUBLINGS,
    })
}

pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_complex(|x| f(x).map(|v| Complex64::new(v, 0.0)), a, b, tol).map(|v| v.re)
}

/// Tensor rule for `∫_0^r ∫_0^{2π} F(ρ e^{iθ}) ρ dθ dρ`: composite
/// Gauss–Legendre in `ρ` with `radial` nodes (rounded up to whole panels),
/// and the periodic trapezoid rule with `angular` nodes in `θ`.
pub fn polar_disk<F>(f: &F, r: f64, radial: usize, angular: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;

    let panels = radial.div_ceil(PANEL_POINTS).max(1);
    let (nodes, weights) = panel_rule();
    let width = r / panels as f64;
    let dtheta = std::f64::consts::TAU / angular as f64;
    let rings: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let mid = width * (p as f64 + 0.5);
            nodes
                .iter()
                .zip(weights)
                .map(move |(x, w)| (mid + 0.5 * width * x, 0.5 * width * w))
        })
        .collect();
    // per-ring sums, then an ordered reduction
    let ring_sums: Vec<f64> = rings
        .par_iter()
        .map(|&(rho, w)| -> Result<f64> {
            let mut acc = 0.0;
            for j in 0..angular {
                let theta = dtheta * j as f64;
                acc += f(Complex64::from_polar(rho, theta))?;
            }
            Ok(acc * dtheta * rho * w)
        })
        .collect::<Result<_>>()?;
    Ok(ring_sums.iter().sum())
}
