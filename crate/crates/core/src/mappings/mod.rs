//! Harmonic mappings `f = h + conj(g)` on the unit disk and the concrete
//! families studied here.

mod families;
mod spec;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complexfn::PowerSeries;
use crate::error::{check_disk, Error, Result};

pub use families::{
    bl_polynomial, counterexample, extremal, from_h_fn, from_h_series, identity,
    CounterexampleG, CounterexampleH, ExtremalG, ExtremalH, QuadratureShear, ShearCombination,
};
pub use spec::{parse_complex_literal, parse_fraction, read_coefficients, FamilySpec};

/// Default gap `ε` used when a boundary limit `r -> 1-` is approximated by
/// evaluation at `1 - ε`.
pub const BOUNDARY_EPSILON: f64 = 1e-6;

/// Threshold below which `|h'|` is treated as zero.
pub const SINGULAR_DERIVATIVE: f64 = 1e-300;

/// An analytic function on the unit disk with its first two derivatives.
pub trait AnalyticFn: Send + Sync + fmt::Debug {
    fn value(&self, z: Complex64) -> Result<Complex64>;
    fn derivative(&self, z: Complex64) -> Result<Complex64>;
    fn second_derivative(&self, z: Complex64) -> Result<Complex64>;
}

impl AnalyticFn for PowerSeries {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z))
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_with_derivatives(z)[1])
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_with_derivatives(z)[2])
    }
}

/// `f(z) = h(z) + conj(g(z))`, with optional Taylor expansions of `h` and
/// `g` kept alongside the closed-form evaluators.
#[derive(Clone)]
pub struct HarmonicMapping {
    label: String,
    h: Arc<dyn AnalyticFn>,
    g: Arc<dyn AnalyticFn>,
    taylor_h: Option<PowerSeries>,
    taylor_g: Option<PowerSeries>,
}

impl fmt::Debug for HarmonicMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HarmonicMapping")
            .field("label", &self.label)
            .field("h", &self.h)
            .field("g", &self.g)
            .field("has_series", &self.taylor_h.is_some())
            .finish()
    }
}

impl HarmonicMapping {
    pub fn new(label: impl Into<String>, h: Arc<dyn AnalyticFn>, g: Arc<dyn AnalyticFn>) -> Self {
        Self {
            label: label.into(),
            h,
            g,
            taylor_h: None,
            taylor_g: None,
        }
    }

    pub fn with_series(mut self, taylor_h: PowerSeries, taylor_g: PowerSeries) -> Self {
        self.taylor_h = Some(taylor_h);
        self.taylor_g = Some(taylor_g);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn analytic_part(&self) -> &Arc<dyn AnalyticFn> {
        &self.h
    }

    pub fn co_analytic_part(&self) -> &Arc<dyn AnalyticFn> {
        &self.g
    }

    pub fn taylor_h(&self) -> Option<&PowerSeries> {
        self.taylor_h.as_ref()
    }

    pub fn taylor_g(&self) -> Option<&PowerSeries> {
        self.taylor_g.as_ref()
    }

    pub fn h(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        self.h.value(z)
    }

    pub fn g(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        self.g.value(z)
    }

    pub fn h_prime(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        self.h.derivative(z)
    }

    pub fn g_prime(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        self.g.derivative(z)
    }

    pub fn h_second(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        self.h.second_derivative(z)
    }

    /// `h(z) + conj(g(z))`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h(z)? + self.g(z)?.conj())
    }

    /// `|h'(z)|^2 - |g'(z)|^2`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        Ok(self.h_prime(z)?.norm_sqr() - self.g_prime(z)?.norm_sqr())
    }

    /// Second complex dilatation `g'/h'`.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64> {
        let hp = self.h_prime(z)?;
        if hp.norm() < SINGULAR_DERIVATIVE {
            return Err(Error::Singularity { z, modulus: hp.norm() });
        }
        Ok(self.g_prime(z)? / hp)
    }

    /// Real 2x2 derivative of `f` viewed as a map of `(x, y)`:
    /// `[[u_x, u_y], [v_x, v_y]]`.
    pub fn real_differential(&self, z: Complex64) -> Result<[[f64; 2]; 2]> {
        let hp = self.h_prime(z)?;
        let gp = self.g_prime(z)?.conj();
        let dx = hp + gp;
        let dy = Complex64::new(0.0, 1.0) * (hp - gp);
        Ok([[dx.re, dy.re], [dx.im, dy.im]])
    }

    /// Largest `|series - closed form|` over `h` and `g` at `samples` points
    /// of the circle `|z| = radius`.
    pub fn series_discrepancy(&self, radius: f64, samples: usize) -> Result<f64> {
        let (Some(th), Some(tg)) = (&self.taylor_h, &self.taylor_g) else {
            return Err(Error::MissingSeries("h and g"));
        };
        let mut worst: f64 = 0.0;
        for j in 0..samples {
            let z = Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / samples as f64);
            worst = worst
                .max((th.eval(z) - self.h(z)?).norm())
                .max((tg.eval(z) - self.g(z)?).norm());
        }
        Ok(worst)
    }
}

/// Parameters `(alpha, zeta, n)` of the class `M(alpha, zeta, n)`:
/// `Re(1 + z h''/h') > alpha` and `g' = zeta z^n h'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub alpha: f64,
    pub zeta: Complex64,
    pub n: u32,
}

impl ClassParams {
    /// Checks `-1/2 <= alpha < 1`, `n >= 1` and `|zeta| <= 1/(2n - 1)`.
    pub fn new(alpha: f64, zeta: Complex64, n: u32) -> Result<Self> {
        if !(-0.5..1.0).contains(&alpha) {
            return Err(Error::Admissibility(format!(
                "alpha = {alpha} outside [-1/2, 1)"
            )));
        }
        if n == 0 {
            return Err(Error::Admissibility("n must be a positive integer".into()));
        }
        let bound = Self::zeta_bound(n);
        if !(zeta.norm() <= bound * (1.0 + 1e-14)) {
            return Err(Error::Admissibility(format!(
                "|zeta| = {} exceeds 1/(2n-1) = {bound} for n = {n}",
                zeta.norm()
            )));
        }
        Ok(Self { alpha, zeta, n })
    }

    pub fn real(alpha: f64, zeta: f64, n: u32) -> Result<Self> {
        Self::new(alpha, Complex64::new(zeta, 0.0), n)
    }

    pub fn zeta_bound(n: u32) -> f64 {
        1.0 / (2.0 * n as f64 - 1.0)
    }
}

/// Class parameters plus the rotation `delta` of the extremal kernel
/// `(1 - delta t)^(2 alpha - 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub params: ClassParams,
    pub delta: Complex64,
}

impl ExtremalSpec {
    pub fn new(params: ClassParams, delta: Complex64) -> Result<Self> {
        if (delta.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::param(format!("|delta| = {} must be 1", delta.norm())));
        }
        Ok(Self { params, delta })
    }

    pub fn unrotated(params: ClassParams) -> Self {
        Self {
            params,
            delta: Complex64::new(1.0, 0.0),
        }
    }
}
