//! Principal-branch logarithms and powers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Principal logarithm, `Im` in `(-pi, pi]`.
///
/// Points on the negative real axis (including `-0.0` imaginary parts) are
/// given the argument `pi`.
pub fn principal_log(w: Complex64) -> Complex64 {
    let arg = w.im.atan2(w.re);
    // -0.0 imaginary parts and underflow both land on -pi; fold onto +pi
    let arg = if arg <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        arg
    };
    Complex64::new(w.norm().ln(), arg)
}

/// `exp(gamma * Log w)` on the plane slit along `(-inf, 0]`.
///
/// Positive reals go through `f64::powf` so the result matches the real power
/// exactly.
pub fn principal_pow(w: Complex64, gamma: f64) -> Result<Complex64> {
    if w.im == 0.0 {
        if w.re <= 0.0 || w.re.is_nan() {
            return Err(Error::BranchCut { w });
        }
        return Ok(Complex64::new(w.re.powf(gamma), 0.0));
    }
    Ok((principal_log(w) * gamma).exp())
}

/// `exp(z) - 1` without cancellation for small `z`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    let ex = z.re.exp();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, ex * s)
}

/// `(w^p - 1) / p` for the principal branch, continuous through `p = 0`
/// where it becomes `Log w`.
pub fn pow_m1_over_exponent(w: Complex64, p: f64) -> Result<Complex64> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::BranchCut { w });
    }
    let log = principal_log(w);
    if p == 0.0 {
        return Ok(log);
    }
    Ok(expm1(log * p) / p)
}

/// The kernel `z -> (1 - delta z)^exponent` on the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchedPower {
    pub delta: Complex64,
    pub exponent: f64,
}

impl BranchedPower {
    pub fn new(delta: Complex64, exponent: f64) -> Result<Self> {
        if (delta.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::param(format!("|delta| must be 1, got {}", delta.norm())));
        }
        Ok(Self { delta, exponent })
    }

    /// Plain `(1 - z)^exponent`.
    pub fn unrotated(exponent: f64) -> Self {
        Self {
            delta: Complex64::new(1.0, 0.0),
            exponent,
        }
    }

    pub fn base(&self, z: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.delta * z
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        principal_pow(self.base(z), self.exponent)
    }

    /// `d/dz (1 - delta z)^p = -p delta (1 - delta z)^(p-1)`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let w = principal_pow(self.base(z), self.exponent - 1.0)?;
        Ok(-self.delta * self.exponent * w)
    }

    pub fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        let p = self.exponent;
        let w = principal_pow(self.base(z), p - 2.0)?;
        Ok(self.delta * self.delta * p * (p - 1.0) * w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_base_is_one() {
        for g in [-3.5, -1.0, 0.0, 0.25, 2.0, 7.75] {
            assert_eq!(principal_pow(c(1.0, 0.0), g).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn real_square_root() {
        assert_eq!(principal_pow(c(4.0, 0.0), 0.5).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn argument_scales_with_exponent() {
        let w = c(1.0, -0.5);
        let g = 2.25;
        let v = principal_pow(w, g).unwrap();
        let expected_arg = g * (-0.5f64).atan2(1.0);
        let expected_mod = w.norm().powf(g);
        assert!((v.arg() - expected_arg).abs() < 1e-14);
        assert!((v.norm() - expected_mod).abs() < 1e-14);
    }

    #[test]
    fn cut_is_rejected() {
        assert!(matches!(
            principal_pow(c(-2.0, 0.0), 0.5),
            Err(Error::BranchCut { .. })
        ));
        assert!(matches!(
            principal_pow(c(0.0, 0.0), 0.5),
            Err(Error::BranchCut { .. })
        ));
        assert!(principal_pow(c(-2.0, -0.0), 0.5).is_err());
    }

    #[test]
    fn log_branch_range() {
        let l = principal_log(c(-1.0, 0.0));
        assert_eq!(l.im, std::f64::consts::PI);
        let l = principal_log(c(-1.0, -1e-3));
        assert!(l.im > -std::f64::consts::PI && l.im < 0.0);
        // below the cut the angle rounds to -pi; it must be folded back
        let l = principal_log(c(-1.0, -1e-300));
        assert!(l.im > -std::f64::consts::PI && l.im <= std::f64::consts::PI);
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let w = c(0.3, 0.7);
        let a = principal_pow(w, 2.25).unwrap();
        let b = principal_pow(w.conj(), 2.25).unwrap();
        assert_eq!(a.conj(), b);
    }

    #[test]
    fn expm1_small_argument() {
        let z = c(1e-12, -2e-12);
        let v = expm1(z);
        assert!((v - z).norm() < 1e-23);
        let z = c(0.3, 1.1);
        assert!((expm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn pow_m1_continuity_at_zero_exponent() {
        let w = c(0.6, -0.2);
        let at0 = pow_m1_over_exponent(w, 0.0).unwrap();
        let near = pow_m1_over_exponent(w, 1e-9).unwrap();
        assert!((at0 - near).norm() < 1e-9);
    }

    #[test]
    fn kernel_derivatives_match_differences() {
        let k = BranchedPower::new(Complex64::from_polar(1.0, 0.7), -1.3).unwrap();
        let z = c(0.2, -0.35);
        let h = 1e-5;
        let fd = (k.eval(z + h).unwrap() - k.eval(z - h).unwrap()) / (2.0 * h);
        assert!((fd - k.derivative(z).unwrap()).norm() < 1e-8);
        let fd2 = (k.derivative(z + h).unwrap() - k.derivative(z - h).unwrap()) / (2.0 * h);
        assert!((fd2 - k.second_derivative(z).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn non_unit_rotation_rejected() {
        assert!(BranchedPower::new(c(1.1, 0.0), 2.0).is_err());
    }
}
