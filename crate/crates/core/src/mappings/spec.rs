//! Text form of the built-in families: `name[:key=value,...]`.
//!
//! ```text
//! identity
//! counterexample:γ=5/4
//! bl:λ=0.3
//! extremal:α=0.5,ζ=0.5,n=1,δ=1
//! from-h:file=coeffs.txt,ζ=1,n=1
//! ```
//!
//! Numbers accept fractions (`5/4`); complex values use `a+bi`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{families, ClassParams, ExtremalSpec, HarmonicMapping};
use crate::complexfn::PowerSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Identity,
    Counterexample {
        gamma: f64,
    },
    #[serde(rename = "bl")]
    Bl {
        lambda: f64,
    },
    Extremal {
        alpha: f64,
        zeta: Complex64,
        n: u32,
        delta: Complex64,
    },
    FromH {
        path: PathBuf,
        zeta: Complex64,
        n: u32,
    },
}

/// Parses `3`, `-0.25`, `1e-3` or `5/4`.
pub fn parse_fraction(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::param(format!("cannot parse number '{s}'"));
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| bad())?;
        let den: f64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0.0 {
            return Err(bad());
        }
        return Ok(num / den);
    }
    s.parse().map_err(|_| bad())
}

/// Parses `0.5`, `2i`, `-i`, `0.5+0.25i`, `1/3-1/4i`.
pub fn parse_complex_literal(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_fraction(s)?, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_fraction(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_fraction(other)?,
    };
    Ok(Complex64::new(re, im))
}

fn key_alias(key: &str) -> &str {
    match key {
        "γ" | "gamma" | "g" => "gamma",
        "λ" | "lambda" | "l" => "lambda",
        "α" | "alpha" | "a" => "alpha",
        "ζ" | "zeta" | "z" => "zeta",
        "δ" | "delta" | "d" => "delta",
        "file" | "path" => "file",
        other => other,
    }
}

struct Pairs(Vec<(String, String)>);

impl Pairs {
    fn parse(body: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (idx, item) in body.split(',').filter(|s| !s.trim().is_empty()).enumerate() {
            match item.split_once('=') {
                Some((k, v)) => out.push((key_alias(k.trim()).to_string(), v.trim().to_string())),
                // a bare first token is a file path (from-h:coeffs.txt)
                None if idx == 0 => out.push(("file".to_string(), item.trim().to_string())),
                None => return Err(Error::param(format!("expected key=value, got '{item}'"))),
            }
        }
        Ok(Self(out))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn real(&self, key: &str) -> Result<f64> {
        let v = self
            .get(key)
            .ok_or_else(|| Error::param(format!("missing parameter '{key}'")))?;
        parse_fraction(v)
    }

    fn complex_or(&self, key: &str, default: Complex64) -> Result<Complex64> {
        self.get(key).map_or(Ok(default), parse_complex_literal)
    }

    fn integer_or(&self, key: &str, default: u32) -> Result<u32> {
        self.get(key).map_or(Ok(default), |v| {
            v.parse()
                .map_err(|_| Error::param(format!("'{key}' must be a positive integer, got '{v}'")))
        })
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        for (k, _) in &self.0 {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::param(format!("unknown parameter '{k}'")));
            }
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        let pairs = Pairs::parse(body)?;
        let one = Complex64::new(1.0, 0.0);
        match name.trim() {
            "identity" | "id" => {
                pairs.reject_unknown(&[])?;
                Ok(FamilySpec::Identity)
            }
            "counterexample" | "fgamma" => {
                pairs.reject_unknown(&["gamma"])?;
                Ok(FamilySpec::Counterexample {
                    gamma: pairs.real("gamma")?,
                })
            }
            "bl" => {
                pairs.reject_unknown(&["lambda"])?;
                Ok(FamilySpec::Bl {
                    lambda: pairs.real("lambda")?,
                })
            }
            "extremal" => {
                pairs.reject_unknown(&["alpha", "zeta", "n", "delta"])?;
                Ok(FamilySpec::Extremal {
                    alpha: pairs.real("alpha")?,
                    zeta: pairs.complex_or("zeta", Complex64::new(0.0, 0.0))?,
                    n: pairs.integer_or("n", 1)?,
                    delta: pairs.complex_or("delta", one)?,
                })
            }
            "from-h" => {
                pairs.reject_unknown(&["file", "zeta", "n"])?;
                let path = pairs
                    .get("file")
                    .ok_or_else(|| Error::param("from-h needs a coefficient file"))?;
                Ok(FamilySpec::FromH {
                    path: PathBuf::from(path),
                    zeta: pairs.complex_or("zeta", one)?,
                    n: pairs.integer_or("n", 1)?,
                })
            }
            other => Err(Error::param(format!("unknown family '{other}'"))),
        }
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Identity => write!(f, "identity"),
            FamilySpec::Counterexample { gamma } => write!(f, "counterexample:γ={gamma}"),
            FamilySpec::Bl { lambda } => write!(f, "bl:λ={lambda}"),
            FamilySpec::Extremal {
                alpha,
                zeta,
                n,
                delta,
            } => write!(
                f,
                "extremal:α={alpha},ζ={},n={n},δ={}",
                fmt_complex(*zeta),
                fmt_complex(*delta)
            ),
            FamilySpec::FromH { path, zeta, n } => {
                write!(f, "from-h:file={},ζ={},n={n}", path.display(), fmt_complex(*zeta))
            }
        }
    }
}

/// Reads `c_0, c_1, ...` one per line as `re [im]` (commas or whitespace);
/// `#` starts a comment.
pub fn read_coefficients(text: &str) -> Result<PowerSeries> {
    let mut coeffs = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let re = parse_fraction(parts[0])?;
        let im = match parts.get(1) {
            Some(v) => parse_fraction(v)?,
            None => 0.0,
        };
        if parts.len() > 2 {
            return Err(Error::param(format!("too many fields in coefficient line '{line}'")));
        }
        coeffs.push(Complex64::new(re, im));
    }
    if coeffs.is_empty() {
        return Err(Error::param("coefficient file is empty"));
    }
    Ok(PowerSeries::new(coeffs))
}

impl FamilySpec {
    pub fn build(&self) -> Result<HarmonicMapping> {
        match self {
            FamilySpec::Identity => Ok(families::identity()),
            FamilySpec::Counterexample { gamma } => families::counterexample(*gamma),
            FamilySpec::Bl { lambda } => families::bl_polynomial(*lambda),
            FamilySpec::Extremal {
                alpha,
                zeta,
                n,
                delta,
            } => {
                let params = ClassParams::new(*alpha, *zeta, *n)?;
                families::extremal(&ExtremalSpec::new(params, *delta)?)
            }
            FamilySpec::FromH { path, zeta, n } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                families::from_h_series(read_coefficients(&text)?, *zeta, *n)
            }
        }
    }
}
