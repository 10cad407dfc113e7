use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use harmap_core::mappings::{parse_complex_literal, parse_fraction, FamilySpec};
use num_complex::Complex64;
use serde::Serialize;

/// Harmonic mappings f = h + conj(g) on the unit disk: evaluation, class
/// checks, sharp bounds, injectivity scans and SVG pictures.
#[derive(Debug, Parser, Serialize)]
#[command(name = "harmap", version, about)]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the command's main tolerance.
    #[arg(long, global = true, value_parser = positive)]
    pub tol: Option<f64>,
    /// Write the output (JSON, text or SVG) to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for Monte-Carlo estimates.
    #[arg(long, global = true, default_value_t = 20_240_917)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// f(z), h(z), g(z), dilatation and Jacobian at one point.
    Eval(EvalArgs),
    /// Sampled membership in M(alpha, zeta, n) or P(beta).
    Check(CheckArgs),
    /// Coefficient, growth, covering and area bounds on a parameter lattice.
    VerifyBounds(VerifyArgs),
    /// Grid scan for two points with the same image.
    Univalence(ScanArgs),
    /// The conjugate pair z, conj(z) with f_gamma(z) = f_gamma(conj z).
    Counterexample(CounterexampleArgs),
    /// Area of f(|z| < r).
    Area(AreaArgs),
    /// SVG picture of the image domain.
    Render(RenderArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long, value_parser = family)]
    pub family: FamilySpec,
    /// Point as `re,im`.
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    pub z: Complex64,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("class_choice").required(true).args(["class", "pbeta", "dilatation"])))]
pub struct CheckArgs {
    #[arg(long, value_parser = family)]
    pub family: FamilySpec,
    /// `alpha,zeta,n`, e.g. `0.5,0.5,1` or `-1/2,1/3i,2`.
    #[arg(long, value_parser = class_triple, allow_hyphen_values = true)]
    pub class: Option<(f64, Complex64, u32)>,
    /// beta of P(beta).
    #[arg(long, value_parser = fraction)]
    pub pbeta: Option<f64>,
    /// `lambda,k,n` with |lambda| = 1: the alpha = -1/2 condition with zeta = lambda k.
    #[arg(long, value_parser = dilatation_triple, allow_hyphen_values = true)]
    pub dilatation: Option<(Complex64, f64, u32)>,
    /// Circles in the sampling grid (up to radius 1 - 1e-4).
    #[arg(long, default_value_t = 40)]
    pub radii: usize,
    /// Angles per circle.
    #[arg(long, default_value_t = 256)]
    pub angles: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    All,
    Coefficients,
    Growth,
    Covering,
    Area,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Bound::All)]
    pub bound: Bound,
    /// Comma-separated alpha values of the lattice.
    #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75")]
    pub alphas: Vec<f64>,
    /// Comma-separated n values of the lattice.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub ns: Vec<u32>,
    /// Highest coefficient index checked.
    #[arg(long, default_value_t = 12)]
    pub kmax: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, value_parser = family)]
    pub family: FamilySpec,
    #[arg(long, default_value_t = 0.999, value_parser = fraction)]
    pub r: f64,
    /// Angles per circle of the scan grid (at least 64).
    #[arg(long, default_value_t = 512)]
    pub cells: usize,
    /// Smallest accepted |z1 - z2|.
    #[arg(long, default_value_t = 0.05)]
    pub separation: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CounterexampleArgs {
    #[arg(long, value_parser = fraction)]
    pub gamma: f64,
    /// Explicit r0; defaults to the midpoint between the threshold and 1.
    #[arg(long, value_parser = fraction)]
    pub r0: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct AreaArgs {
    #[arg(long, value_parser = family)]
    pub family: FamilySpec,
    #[arg(long, value_parser = fraction)]
    pub r: f64,
    /// Also estimate by Monte Carlo with this many samples (0 disables).
    #[arg(long, default_value_t = 0)]
    pub mc_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    /// Circles and rays over the whole image.
    Image,
    /// Circles and rays around a point (the collision image for f_gamma).
    Zoom,
    /// Only the image of |z| = r.
    Boundary,
}

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    #[arg(long, value_parser = family)]
    pub family: FamilySpec,
    #[arg(long, value_enum, default_value_t = Figure::Image)]
    pub figure: Figure,
    #[arg(long, default_value_t = 0.999, value_parser = fraction)]
    pub r: f64,
    #[arg(long, default_value_t = 12)]
    pub circles: usize,
    #[arg(long, default_value_t = 24)]
    pub rays: usize,
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    /// Viewport center `re,im`.
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    pub center: Option<Complex64>,
    #[arg(long)]
    pub half_width: Option<f64>,
}

fn family(s: &str) -> Result<FamilySpec, String> {
    s.parse().map_err(|e: harmap_core::Error| e.to_string())
}

fn fraction(s: &str) -> Result<f64, String> {
    parse_fraction(s).map_err(|e| e.to_string())
}

fn positive(s: &str) -> Result<f64, String> {
    let v = fraction(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn pair(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, got '{s}'"))?;
    Ok(Complex64::new(fraction(re)?, fraction(im)?))
}

fn integer(s: &str) -> Result<u32, String> {
    s.trim().parse().map_err(|_| format!("expected a positive integer, got '{s}'"))
}

fn three(s: &str) -> Result<[&str; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    <[&str; 3]>::try_from(parts).map_err(|_| format!("expected three comma-separated values, got '{s}'"))
}

fn class_triple(s: &str) -> Result<(f64, Complex64, u32), String> {
    let [a, z, n] = three(s)?;
    let zeta = parse_complex_literal(z).map_err(|e| e.to_string())?;
    Ok((fraction(a)?, zeta, integer(n)?))
}

fn dilatation_triple(s: &str) -> Result<(Complex64, f64, u32), String> {
    let [l, k, n] = three(s)?;
    let lambda = parse_complex_literal(l).map_err(|e| e.to_string())?;
    Ok((lambda, fraction(k)?, integer(n)?))
}
