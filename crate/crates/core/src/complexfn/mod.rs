//! Complex special functions and truncated power-series arithmetic.

mod hyp2f1;
mod power;
mod series;

pub use hyp2f1::{hyp2f1, hyp2f1_derivative, DEFAULT_TOL, MAX_TERMS};
pub use power::{expm1, pow_m1_over_exponent, principal_log, principal_pow, BranchedPower};
pub use series::{PowerSeries, DEFAULT_ORDER};
