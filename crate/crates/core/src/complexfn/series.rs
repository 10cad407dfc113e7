//! Truncated power series `c_0 + c_1 z + ... + c_N z^N`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 64;

/// Taylor coefficients known up to `z^N` (the truncation order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// An empty coefficient list is read as the order-0 zero series.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); order + 1])
    }

    /// `c z^k` truncated at `order` (which must be at least `k`).
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order.max(k));
        s.coeffs[k] = c;
        s
    }

    /// Expansion of `(1 - delta z)^exponent` on the principal branch:
    /// `c_{k+1} = c_k (k - exponent) delta / (k + 1)`.
    pub fn binomial(delta: Complex64, exponent: f64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = Complex64::new(1.0, 0.0);
        coeffs.push(c);
        for k in 0..order {
            let kf = k as f64;
            c = c * delta * ((kf - exponent) / (kf + 1.0));
            coeffs.push(c);
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value, first and second derivative in one Horner pass.
    pub fn eval_with_derivatives(&self, z: Complex64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut dp, mut ddp) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            ddp = ddp * z + dp * 2.0;
            dp = dp * z + p;
            p = p * z + c;
        }
        [p, dp, ddp]
    }

    pub fn derive(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderUnderflow);
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        })
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        Self { coeffs }
    }

    /// Cauchy product kept through `z^order`. Coefficients beyond either
    /// operand's order are treated as zero, so this is exact for polynomials.
    pub fn truncated_mul(&self, other: &Self, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Multiplication by `z^n`; the order grows by `n`.
    pub fn shift(&self, n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|k| f(self.coeffs[k], other.coeffs[k])).collect(),
        }
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: Self) -> PowerSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: Self) -> PowerSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Formal product: the result is only known through the smaller order.
impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: Self) -> PowerSeries {
        self.truncated_mul(rhs, self.order().min(rhs.order()))
    }
}
