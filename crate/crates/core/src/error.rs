use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {z} is outside the open unit disk")]
    Domain { z: Complex64 },

    #[error("{w} lies on the branch cut (-inf, 0]")]
    BranchCut { w: Complex64 },

    #[error("2F1 is undefined: c = {c} is a non-positive integer")]
    PolynomialPole { c: f64 },

    #[error("2F1 series diverges at z = {z} (c - a - b = {excess})")]
    Divergence { z: Complex64, excess: f64 },

    #[error("{what} did not converge within {limit} iterations")]
    NonConvergence { what: &'static str, limit: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("class admissibility violated: {0}")]
    Admissibility(String),

    #[error("derivative vanishes at {z} (|value| = {modulus:e})")]
    Singularity { z: Complex64, modulus: f64 },

    #[error("cannot differentiate an order-0 series")]
    OrderUnderflow,

    #[error("mapping carries no Taylor series for {0}")]
    MissingSeries(&'static str),

    #[error("collision search infeasible: r0 = {r0} must exceed sin(pi/(gamma+1)) = {threshold}")]
    Infeasible { r0: f64, threshold: f64 },

    #[error("point {w} is within {distance:e} of the curve")]
    OnCurve { w: Complex64, distance: f64 },

    #[error("failed to render at z = {z}: {source}")]
    Render {
        z: Complex64,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

/// Rejects points with `|z| >= 1`.
#[inline]
pub(crate) fn check_disk(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { z })
    }
}
