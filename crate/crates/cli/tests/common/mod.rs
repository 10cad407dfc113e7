#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub elapsed: Duration,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}\nstderr: {}", self.stdout, self.stderr))
    }
}

pub fn harmap(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_harmap"))
        .args(args)
        .output()
        .expect("the harmap binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        elapsed: start.elapsed(),
    }
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn load(name: &str) -> Value {
    let path = schema_dir().join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Errors from validating `doc` against the envelope schema and `name`.
pub fn schema_errors(doc: &Value, name: &str) -> Vec<String> {
    let mut errors = Vec::new();
    for schema in ["envelope", name] {
        let validator = jsonschema::validator_for(&load(schema)).expect("schema compiles");
        errors.extend(
            validator
                .iter_errors(doc)
                .map(|e| format!("{schema}: {} at {}", e, e.instance_path())),
        );
    }
    errors
}

pub fn assert_schema(doc: &Value, name: &str) {
    let errors = schema_errors(doc, name);
    assert!(errors.is_empty(), "{name}: {errors:#?}\n{doc:#}");
}

pub fn complex(v: &Value) -> num_complex::Complex64 {
    let pair = v.as_array().expect("complex values are [re, im]");
    num_complex::Complex64::new(pair[0].as_f64().unwrap(), pair[1].as_f64().unwrap())
}
