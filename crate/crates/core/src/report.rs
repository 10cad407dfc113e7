//! JSON reports shared by the checkers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Grid description embedded in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub radii: usize,
    pub max_radius: f64,
    pub angles_per_circle: usize,
}

/// Where the deciding value was observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: [f64; 2],
    pub value: f64,
}

impl Witness {
    pub fn new(z: Complex64, value: f64) -> Self {
        Self {
            z: [z.re, z.im],
            value,
        }
    }

    pub fn point(&self) -> Complex64 {
        Complex64::new(self.z[0], self.z[1])
    }
}

/// Outcome of a sampled check. `margin >= 0` iff the check passed; the sign
/// convention is per check and described in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub check: String,
    pub pass: bool,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(check: impl Into<String>, pass: bool, margin: f64) -> Self {
        Self {
            check: check.into(),
            pass,
            margin,
            grid: None,
            witness: None,
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_grid(mut self, grid: GridInfo) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn with_witness(mut self, z: Complex64, value: f64) -> Self {
        self.witness = Some(Witness::new(z, value));
        self
    }

    pub fn value(mut self, key: impl Into<String>, v: f64) -> Self {
        self.values.insert(key.into(), v);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
