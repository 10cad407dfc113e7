//! Closed-form kernels and constructors for the built-in families.

use std::sync::Arc;

use num_complex::Complex64;

use super::{AnalyticFn, ClassParams, ExtremalSpec, HarmonicMapping};
use crate::complexfn::{
    hyp2f1, pow_m1_over_exponent, principal_log, principal_pow, BranchedPower, PowerSeries,
    DEFAULT_ORDER, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::quadrature;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Branch switch for `alpha = 1/2` (logarithmic analytic part).
pub(crate) const HALF_BRANCH_WIDTH: f64 = 1e-9;

/// `h(z) = (1 - (1 - z)^gamma) / gamma`.
#[derive(Debug, Clone, Copy)]
pub struct CounterexampleH {
    pub gamma: f64,
}

impl AnalyticFn for CounterexampleH {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(-pow_m1_over_exponent(ONE - z, self.gamma)?)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        principal_pow(ONE - z, self.gamma - 1.0)
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(principal_pow(ONE - z, self.gamma - 2.0)? * (1.0 - self.gamma))
    }
}

/// `g(z) = (1 - (1 + gamma z)(1 - z)^gamma) / (gamma (1 + gamma))`, so that
/// `g' = z h'`.
#[derive(Debug, Clone, Copy)]
pub struct CounterexampleG {
    pub gamma: f64,
}

impl AnalyticFn for CounterexampleG {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        let gm = self.gamma;
        let w = principal_pow(ONE - z, gm)?;
        Ok((ONE - (ONE + z * gm) * w) / (gm * (1.0 + gm)))
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(z * principal_pow(ONE - z, self.gamma - 1.0)?)
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        let gm = self.gamma;
        let base = principal_pow(ONE - z, gm - 2.0)?;
        Ok(base * ((ONE - z) - z * (gm - 1.0)))
    }
}

/// `h(z) = ∫_0^z (1 - delta t)^(2 alpha - 2) dt`; for `delta = 1` this is
/// `-log(1 - z)` at `alpha = 1/2` and `(1 - (1 - z)^(2 alpha - 1))/(2 alpha - 1)`
/// otherwise.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalH {
    pub alpha: f64,
    pub delta: Complex64,
}

impl ExtremalH {
    fn kernel(&self) -> BranchedPower {
        BranchedPower {
            delta: self.delta,
            exponent: 2.0 * self.alpha - 2.0,
        }
    }

    fn is_log_branch(&self) -> bool {
        (2.0 * self.alpha - 1.0).abs() < HALF_BRANCH_WIDTH
    }
}

impl AnalyticFn for ExtremalH {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        let w = ONE - self.delta * z;
        if self.is_log_branch() {
            if w.im == 0.0 && w.re <= 0.0 {
                return Err(Error::BranchCut { w });
            }
            return Ok(-principal_log(w) / self.delta);
        }
        Ok(-pow_m1_over_exponent(w, 2.0 * self.alpha - 1.0)? / self.delta)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.kernel().eval(z)
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.kernel().derivative(z)
    }
}

/// `g(z) = ∫_0^z zeta t^n (1 - delta t)^(2 alpha - 2) dt
///       = zeta z^(n+1)/(n+1) 2F1(n+1, 2 - 2 alpha; n+2; delta z)`.
///
/// No admissibility check: the close-to-convexity radius computations use
/// `zeta = 1` with `n >= 2`, outside the class bound.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalG {
    pub alpha: f64,
    pub zeta: Complex64,
    pub n: u32,
    pub delta: Complex64,
}

impl ExtremalG {
    fn kernel(&self) -> BranchedPower {
        BranchedPower {
            delta: self.delta,
            exponent: 2.0 * self.alpha - 2.0,
        }
    }
}

impl AnalyticFn for ExtremalG {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        if self.zeta == ZERO {
            return Ok(ZERO);
        }
        let n = self.n as f64;
        let f = hyp2f1(n + 1.0, 2.0 - 2.0 * self.alpha, n + 2.0, self.delta * z, DEFAULT_TOL)?;
        Ok(self.zeta * z.powu(self.n + 1) / (n + 1.0) * f)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.zeta * z.powu(self.n) * self.kernel().eval(z)?)
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        let k = self.kernel();
        let n = self.n;
        let lead = if n == 0 {
            ZERO
        } else {
            z.powu(n - 1) * (n as f64) * k.eval(z)?
        };
        Ok(self.zeta * (lead + z.powu(n) * k.derivative(z)?))
    }
}

/// `g(z) = ∫_{[0, z]} zeta t^n h'(t) dt` by adaptive Gauss–Legendre on the
/// straight segment.
#[derive(Debug, Clone)]
pub struct QuadratureShear {
    pub h: Arc<dyn AnalyticFn>,
    pub zeta: Complex64,
    pub n: u32,
    pub tol: f64,
}

impl AnalyticFn for QuadratureShear {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        if z == ZERO || self.zeta == ZERO {
            return Ok(ZERO);
        }
        let integral = quadrature::integrate_complex(
            |s| {
                let t = z * s;
                Ok(t.powu(self.n) * self.h.derivative(t)?)
            },
            0.0,
            1.0,
            self.tol,
        )?;
        Ok(self.zeta * z * integral)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.zeta * z.powu(self.n) * self.h.derivative(z)?)
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        let n = self.n;
        let lead = if n == 0 {
            ZERO
        } else {
            z.powu(n - 1) * (n as f64) * self.h.derivative(z)?
        };
        Ok(self.zeta * (lead + z.powu(n) * self.h.second_derivative(z)?))
    }
}

/// The analytic function `F = h - lambda g`.
#[derive(Debug, Clone)]
pub struct ShearCombination {
    pub h: Arc<dyn AnalyticFn>,
    pub g: Arc<dyn AnalyticFn>,
    pub lambda: Complex64,
}

impl AnalyticFn for ShearCombination {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.value(z)? - self.lambda * self.g.value(z)?)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.derivative(z)? - self.lambda * self.g.derivative(z)?)
    }

    fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.second_derivative(z)? - self.lambda * self.g.second_derivative(z)?)
    }
}

pub fn identity() -> HarmonicMapping {
    let h = PowerSeries::from_real(&[0.0, 1.0]);
    let g = PowerSeries::from_real(&[0.0]);
    HarmonicMapping::new("identity", Arc::new(h.clone()), Arc::new(g.clone())).with_series(h, g)
}

/// The non-univalent member `f_gamma` of `P((1 + gamma)/2)`, `1 < gamma <= 7/4`.
pub fn counterexample(gamma: f64) -> Result<HarmonicMapping> {
    if !(gamma > 1.0 && gamma <= 1.75) {
        return Err(Error::param(format!("gamma = {gamma} outside (1, 7/4]")));
    }
    let h_prime = PowerSeries::binomial(ONE, gamma - 1.0, DEFAULT_ORDER - 1);
    let taylor_h = h_prime.integrate();
    let taylor_g = h_prime.shift(1).integrate();
    Ok(HarmonicMapping::new(
        format!("counterexample:γ={gamma}"),
        Arc::new(CounterexampleH { gamma }),
        Arc::new(CounterexampleG { gamma }),
    )
    .with_series(taylor_h, taylor_g))
}

/// Extremal member of `M(alpha, zeta, n)` rotated by `delta`.
pub fn extremal(spec: &ExtremalSpec) -> Result<HarmonicMapping> {
    let ExtremalSpec { params, delta } = *spec;
    let params = ClassParams::new(params.alpha, params.zeta, params.n)?;
    let ClassParams { alpha, zeta, n } = params;
    let kernel = PowerSeries::binomial(delta, 2.0 * alpha - 2.0, DEFAULT_ORDER - 1);
    let taylor_h = kernel.integrate();
    let taylor_g = kernel.shift(n as usize).scale(zeta).integrate();
    Ok(HarmonicMapping::new(
        format!("extremal:α={alpha},ζ={zeta},n={n},δ={delta}"),
        Arc::new(ExtremalH { alpha, delta }),
        Arc::new(ExtremalG {
            alpha,
            zeta,
            n,
            delta,
        }),
    )
    .with_series(taylor_h, taylor_g))
}

/// Polynomial map `h = z - lambda z^2`, `g = z^2/2 - 2 lambda z^3/3`,
/// `0 <= lambda < 1/2`.
pub fn bl_polynomial(lambda: f64) -> Result<HarmonicMapping> {
    if !(0.0..0.5).contains(&lambda) {
        return Err(Error::param(format!("lambda = {lambda} outside [0, 1/2)")));
    }
    let h = PowerSeries::from_real(&[0.0, 1.0, -lambda]);
    let g = PowerSeries::from_real(&[0.0, 0.0, 0.5, -2.0 * lambda / 3.0]);
    Ok(
        HarmonicMapping::new(format!("bl:λ={lambda}"), Arc::new(h.clone()), Arc::new(g.clone()))
            .with_series(h, g),
    )
}

fn check_shear(zeta: Complex64, n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Admissibility("n must be a positive integer".into()));
    }
    let bound = ClassParams::zeta_bound(n);
    if !(zeta.norm() <= bound * (1.0 + 1e-14)) {
        return Err(Error::Admissibility(format!(
            "|zeta| = {} exceeds 1/(2n-1) = {bound}",
            zeta.norm()
        )));
    }
    Ok(())
}

fn check_normalized(h0: Complex64, hp0: Complex64) -> Result<()> {
    if h0.norm() > 1e-12 || (hp0 - ONE).norm() > 1e-12 {
        return Err(Error::param(format!(
            "h must satisfy h(0) = 0, h'(0) = 1 (got {h0}, {hp0})"
        )));
    }
    Ok(())
}

/// Builds `g` from `g' = zeta z^n h'` by formal integration of the series.
pub fn from_h_series(h: PowerSeries, zeta: Complex64, n: u32) -> Result<HarmonicMapping> {
    check_shear(zeta, n)?;
    check_normalized(h.coeff(0), h.coeff(1))?;
    let g = match h.derive() {
        Ok(hp) => hp.shift(n as usize).scale(zeta).integrate(),
        Err(_) => PowerSeries::zero(n as usize + 1),
    };
    Ok(HarmonicMapping::new(
        format!("from-h:series,ζ={zeta},n={n}"),
        Arc::new(h.clone()),
        Arc::new(g.clone()),
    )
    .with_series(h, g))
}

/// Builds `g` from `g' = zeta z^n h'` by quadrature along `[0, z]`.
pub fn from_h_fn(h: Arc<dyn AnalyticFn>, zeta: Complex64, n: u32) -> Result<HarmonicMapping> {
    check_shear(zeta, n)?;
    check_normalized(h.value(ZERO)?, h.derivative(ZERO)?)?;
    let g = QuadratureShear {
        h: h.clone(),
        zeta,
        n,
        tol: 1e-14,
    };
    Ok(HarmonicMapping::new(
        format!("from-h:quadrature,ζ={zeta},n={n}"),
        h,
        Arc::new(g),
    ))
}
