//! Gauss hypergeometric function `2F1(a, b; c; z)` for real parameters and
//! `|z| <= 1`.
//!
//! Evaluation strategy:
//!
//! - `|z| <= 1/2`: direct power series.
//! - `|z/(z-1)| <= 1/2`: Pfaff transformation
//!   `2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))`. This covers the
//!   left half of the disk, including `z = -1 -> 1/2`.
//! - otherwise: the series supplies `F` and `F'` at `|z| = 1/2` on the ray
//!   towards `z`, and the hypergeometric ODE
//!   `z(1-z)F'' + (c - (a+b+1)z)F' - abF = 0` is continued along the segment
//!   by local Taylor steps, each at most half the distance to the nearest
//!   singular point (0 or 1).
//! - `z = 1`: Gauss summation, requires `c - a - b > 0`.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::power::principal_pow;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_TERMS: usize = 10_000;

const SERIES_RADIUS: f64 = 0.5;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `2F1(a, b; c; z)` with absolute error at most `tol` (relative to
/// `max(1, |F|)`).
pub fn hyp2f1(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::param(format!("tolerance must be positive, got {tol}")));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::PolynomialPole { c });
    }
    let modulus = z.norm();
    if !modulus.is_finite() || modulus > 1.0 + 1e-15 {
        return Err(Error::param(format!("|z| = {modulus} exceeds 1")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let excess = c - a - b;
    if (z - 1.0).norm() < 1e-15 {
        if excess <= 0.0 {
            return Err(Error::Divergence { z, excess });
        }
        return Ok(Complex64::new(gauss_sum(a, b, c), 0.0));
    }
    // elsewhere on the circle the function is the boundary value of its
    // continuation to C \ [1, ∞), finite whatever the sign of `excess`

    // Internal target: a little tighter than requested so that the
    // transformation prefactors and ODE steps stay inside `tol`.
    let eps = (tol * 1e-3).max(f64::EPSILON);

    if modulus <= SERIES_RADIUS {
        return series(a, b, c, z, eps).map(|(f, _)| f);
    }
    let one = Complex64::new(1.0, 0.0);
    let pfaff_arg = z / (z - one);
    if pfaff_arg.norm() <= SERIES_RADIUS {
        let (f, _) = series(a, c - b, c, pfaff_arg, eps)?;
        return Ok(principal_pow(one - z, -a)? * f);
    }
    continue_along_segment(a, b, c, z, eps)
}

/// `d/dz 2F1(a,b;c;z) = (ab/c) 2F1(a+1, b+1; c+1; z)`.
pub fn hyp2f1_derivative(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    if is_nonpositive_integer(c) {
        return Err(Error::PolynomialPole { c });
    }
    Ok(hyp2f1(a + 1.0, b + 1.0, c + 1.0, z, tol)? * (a * b / c))
}

fn gauss_sum(a: f64, b: f64, c: f64) -> f64 {
    // 1/Gamma vanishes at the poles.
    if is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b) {
        return 0.0;
    }
    gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b))
}

/// Power series, returning `(F(z), F'(z))`.
///
/// Stops once the geometric tail bound `|t| q / (1 - q)` falls below
/// `eps * max(1, |F|)`, where `q` is the current term ratio.
fn series(a: f64, b: f64, c: f64, z: Complex64, eps: f64) -> Result<(Complex64, Complex64)> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    // derivative: sum of k t_k z^(k-1), carried as k t_k / z
    let mut dsum = Complex64::new(0.0, 0.0);
    let zm = z.norm();
    let finish = |sum: Complex64, dsum: Complex64| {
        let derivative = if zm > 0.0 {
            dsum / z
        } else {
            Complex64::new(a * b / c, 0.0)
        };
        (sum, derivative)
    };
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        let next = term * z * ratio;
        sum += next;
        dsum += next * (kf + 1.0);
        if next == Complex64::new(0.0, 0.0) {
            return Ok(finish(sum, dsum));
        }
        let q = (ratio.abs() * zm).max(zm);
        if q < 1.0 {
            let tail = next.norm() * q / (1.0 - q);
            if tail <= eps * sum.norm().max(1.0) {
                return Ok(finish(sum, dsum));
            }
        }
        term = next;
    }
    Err(Error::NonConvergence {
        what: "2F1 power series",
        limit: MAX_TERMS,
    })
}

/// Taylor step of the hypergeometric ODE from `p` (where `F = w`, `F' = dw`)
/// to `p + h`.
fn ode_step(
    a: f64,
    b: f64,
    c: f64,
    p: Complex64,
    w: Complex64,
    dw: Complex64,
    h: Complex64,
    eps: f64,
) -> Result<(Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    // z(1-z) around p: p0 + p1 t + p2 t^2
    let p0 = p * (one - p);
    let p1 = one - p * 2.0;
    let p2 = -1.0;
    let q0 = Complex64::new(c, 0.0) - p * (a + b + 1.0);
    let q1 = -(a + b + 1.0);
    let ab = a * b;

    // Work with the scaled terms e_k = c_k h^k: near z = 1 the raw Taylor
    // coefficients overflow long before h^k underflows.
    let mut prev = w; // e_k
    let mut cur = dw * h; // e_{k+1}
    let mut value = w + cur;
    let mut deriv_h = cur; // h * F'(p + h) = sum k e_k
    let h2 = h * h;
    let mut small_streak = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let next = -((p1 * kf + q0) * (kf + 1.0) * cur * h
            + (p2 * kf * (kf - 1.0) + q1 * kf - ab) * prev * h2)
            / (p0 * ((kf + 2.0) * (kf + 1.0)));
        if !next.is_finite() {
            break;
        }
        value += next;
        deriv_h += next * (kf + 2.0);
        let scale = value.norm().max(deriv_h.norm()).max(1.0);
        if next.norm() * (kf + 2.0) <= eps * scale {
            small_streak += 1;
            // Two consecutive negligible terms guard against an accidental
            // zero coefficient.
            if small_streak >= 2 {
                return Ok((value, deriv_h / h));
            }
        } else {
            small_streak = 0;
        }
        prev = cur;
        cur = next;
    }
    Err(Error::NonConvergence {
        what: "2F1 analytic continuation step",
        limit: MAX_TERMS,
    })
}

fn continue_along_segment(a: f64, b: f64, c: f64, z: Complex64, eps: f64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let start = z * (SERIES_RADIUS / z.norm());
    let (mut w, mut dw) = series(a, b, c, start, eps)?;
    let mut p = start;
    for _ in 0..MAX_TERMS {
        let remaining = z - p;
        let dist = remaining.norm();
        if dist <= 1e-16 {
            return Ok(w);
        }
        let radius = p.norm().min((one - p).norm());
        let step_len = dist.min(0.5 * radius);
        let h = remaining * (step_len / dist);
        let (nw, ndw) = ode_step(a, b, c, p, w, dw, h, eps)?;
        w = nw;
        dw = ndw;
        p = if step_len == dist { z } else { p + h };
        if step_len == dist {
            return Ok(w);
        }
    }
    Err(Error::NonConvergence {
        what: "2F1 continuation path",
        limit: MAX_TERMS,
    })
}
