//! Numerical toolkit for planar harmonic mappings `f = h + conj(g)` on the
//! unit disk.
//!
//! - [`complexfn`]: principal powers, `2F1`, truncated power series.
//! - [`mappings`]: the mapping model and the built-in families.
//! - [`classcheck`]: curvature conditions, class membership, Kaplan's
//!   criterion, close-to-convexity radius.
//! - [`bounds`]: coefficient, growth, covering and area bounds for
//!   `M(alpha, zeta, n)`.
//! - [`univalence`]: injectivity scans and the symmetric collision of `f_gamma`.
//! - [`render`]: SVG pictures of image domains.

pub mod bounds;
pub mod classcheck;
pub mod complexfn;
pub mod error;
pub mod mappings;
pub mod quadrature;
pub mod render;
pub mod report;
pub mod univalence;

pub use error::{Error, Result};
pub use mappings::{ClassParams, ExtremalSpec, HarmonicMapping};
pub use report::BoundReport;

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
