mod common;

use std::f64::consts::PI;

use common::{assert_schema, complex, harmap};
use num_complex::Complex64;

#[test]
fn eval_examples() {
    let run = harmap(&["eval", "--family", "identity", "--z", "0.5,0.0", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = run.json();
    assert_schema(&doc, "eval");
    assert_eq!(complex(&doc["f"]), Complex64::new(0.5, 0.0));
    assert_eq!(doc["jacobian"].as_f64(), Some(1.0));

    let doc = harmap(&["eval", "--family", "counterexample:γ=1.25", "--z", "0,0", "--json"]).json();
    assert_eq!(complex(&doc["f"]), Complex64::new(0.0, 0.0));

    let doc = harmap(&["eval", "--family", "bl:λ=0.3", "--z", "0.5,0", "--json"]).json();
    assert!((complex(&doc["f"]) - Complex64::new(0.525, 0.0)).norm() < 1e-15);
    assert_eq!(doc["config"]["family"], "bl:λ=0.3");
    assert_eq!(doc["config"]["subcommand"], "eval");
}

#[test]
fn eval_text_and_negative_coordinates() {
    let run = harmap(&["eval", "--family", "bl:lambda=3/10", "--z", "-0.5,-0.25"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("f(z)"));
    assert!(run.stdout.contains("jacobian"));
}

#[test]
fn eval_where_h_prime_vanishes() {
    // h = z - z^2 from a coefficient file; h' = 1 - 2z vanishes at 1/2
    let path = std::env::temp_dir().join(format!("harmap-coeffs-{}.txt", std::process::id()));
    std::fs::write(&path, "# h = z - z^2\n0\n1\n-1\n").unwrap();
    let family = format!("from-h:{},ζ=1/2", path.display());
    let run = harmap(&["eval", "--family", &family, "--z", "0.5,0", "--json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = run.json();
    assert_schema(&doc, "eval");
    assert!(doc["dilatation"].is_null());
    assert!(doc["jacobian"].as_f64().unwrap().abs() < 1e-15);
}

#[test]
fn domain_and_usage_errors_exit_2() {
    let outside = harmap(&["eval", "--family", "identity", "--z", "1.5,0"]);
    assert_eq!(outside.code, 2);
    assert!(outside.stderr.contains("outside the open unit disk"), "{}", outside.stderr);
    assert_eq!(harmap(&["eval", "--family", "nonsense", "--z", "0,0"]).code, 2);
    assert_eq!(harmap(&["eval", "--family", "identity"]).code, 2);
    assert_eq!(harmap(&["--tol", "-1", "eval", "--family", "identity", "--z", "0,0"]).code, 2);
    assert_eq!(harmap(&["check", "--family", "identity"]).code, 2);
    assert_eq!(harmap(&["check", "--family", "identity", "--class", "0.5,2,1"]).code, 2);
    assert_eq!(harmap(&["counterexample", "--gamma", "1.25", "--r0", "0.5"]).code, 2);
    assert_eq!(harmap(&["counterexample", "--gamma", "2"]).code, 2);
    assert_eq!(harmap(&["render", "--family", "identity", "--figure", "zoom"]).code, 2);
}

#[test]
fn check_examples() {
    let run = harmap(&["check", "--family", "counterexample:γ=1.25", "--pbeta", "1.125", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let doc = run.json();
    assert_schema(&doc, "bound_report");
    assert_eq!(doc["pass"], true);
    assert!(doc["values"]["curvature_sup"].as_f64().unwrap() < 1.125);

    let run = harmap(&["check", "--family", "extremal:α=0.5,ζ=0.5,n=1", "--class", "0.5,0.5,1", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_schema(&run.json(), "bound_report");

    let run = harmap(&["check", "--family", "bl:λ=0.3", "--class", "0.9,1,1", "--json"]);
    assert_eq!(run.code, 1);
    let doc = run.json();
    assert_schema(&doc, "bound_report");
    assert_eq!(doc["pass"], false);
    assert!(doc["margin"].as_f64().unwrap() < 0.0);
    assert!(doc["values"]["curvature_inf"].as_f64().unwrap() < 0.9);
}

#[test]
fn check_the_alpha_minus_half_condition() {
    // g' = z h' with Re(1 + z h''/h') >= 1/2 > -1/2
    let run = harmap(&["check", "--family", "extremal:α=0.5,ζ=1,n=1", "--dilatation", "1,1,1"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    // ζ = i/3 for n = 2 on a map whose dilatation is z^2/3
    let run = harmap(&["check", "--family", "extremal:α=0,ζ=1/3i,n=2", "--dilatation", "i,1/3,2", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_schema(&run.json(), "bound_report");
}

#[test]
fn tolerance_override_is_recorded() {
    let doc = harmap(&["check", "--family", "identity", "--class", "0,0,1", "--tol", "1e-6", "--json"]).json();
    assert_eq!(doc["config"]["tolerances"]["check"].as_f64(), Some(1e-6));
    assert_eq!(doc["values"]["tol"].as_f64(), Some(1e-6));
}

#[test]
fn counterexample_example() {
    let run = harmap(&["counterexample", "--gamma", "5/4", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = run.json();
    assert_schema(&doc, "collision");
    let (z1, z2) = (complex(&doc["z1"]), complex(&doc["z2"]));
    assert!((z1 - z2).norm() > 0.05);
    assert!(doc["image_gap"].as_f64().unwrap() < 1e-8);
    // an explicit r0 above the threshold also works
    let doc = harmap(&["counterexample", "--gamma", "1.25", "--r0", "0.99", "--json"]).json();
    assert_eq!(doc["r0"].as_f64(), Some(0.99));
}

#[test]
fn univalence_examples() {
    let run = harmap(&["univalence", "--family", "bl:λ=0.30", "--r", "0.999", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let doc = run.json();
    assert_schema(&doc, "univalence_report");
    assert_eq!(doc["verdict"], "certified-at-resolution");
    assert!(doc["z1"].is_null());

    let run = harmap(&["univalence", "--family", "counterexample:γ=5/4", "--cells", "256", "--json"]);
    assert_eq!(run.code, 1);
    let doc = run.json();
    assert_schema(&doc, "univalence_report");
    assert_eq!(doc["verdict"], "collision");
    assert!(doc["image_gap"].as_f64().unwrap() < 1e-8);
}

#[test]
fn area_examples() {
    let run = harmap(&["area", "--family", "identity", "--r", "0.5", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = run.json();
    assert_schema(&doc, "area");
    assert!((doc["area"].as_f64().unwrap() - PI / 4.0).abs() < 1e-12);

    let args = ["area", "--family", "bl:λ=0.3", "--r", "0.6", "--mc-samples", "20000", "--seed", "11", "--json"];
    let (a, b) = (harmap(&args).json(), harmap(&args).json());
    assert_schema(&a, "area");
    assert_eq!(a, b, "Monte-Carlo output depends only on the seed");
    let (exact, mc) = (a["area"].as_f64().unwrap(), &a["monte_carlo"]);
    let err = mc["std_err"].as_f64().unwrap();
    assert!((mc["estimate"].as_f64().unwrap() - exact).abs() < 5.0 * err);
    let other = harmap(&["area", "--family", "bl:λ=0.3", "--r", "0.6", "--mc-samples", "20000", "--seed", "12", "--json"]).json();
    assert_ne!(other["monte_carlo"]["estimate"], mc["estimate"]);

    let doc = harmap(&["area", "--family", "extremal:α=1/2,ζ=1/2,n=1", "--r", "0.5", "--json"]).json();
    assert_schema(&doc, "area");
    assert_eq!(doc["bounds"]["inside"], true);
}

#[test]
fn verify_bounds_on_a_small_lattice() {
    let run = harmap(&["verify-bounds", "--alphas", "0.25", "--ns", "1", "--json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let doc = run.json();
    assert_schema(&doc, "verify_bounds");
    // three ζ values, five reports each
    assert_eq!(doc["checks"], 15);
    assert_eq!(doc["failures"], 0);

    let run = harmap(&["verify-bounds", "--bound", "covering", "--alphas", "0,0.5", "--ns", "2,3", "--json"]);
    assert_eq!(run.code, 0);
    let doc = run.json();
    // n = 3 drops ζ = 0.3 (above 1/5)
    assert_eq!(doc["checks"], 5 * 2);
}

#[test]
fn verify_bounds_fails_with_an_impossible_tolerance() {
    let run = harmap(&["verify-bounds", "--bound", "growth", "--alphas", "0.5", "--ns", "1", "--tol", "1e-300"]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert!(run.stdout.contains("FAIL"));
}

#[test]
fn render_writes_deterministic_svg() {
    let dir = std::env::temp_dir().join(format!("harmap-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zoom.svg");
    let p = path.to_str().unwrap();
    let run = harmap(&["render", "--family", "counterexample:γ=5/4", "--figure", "zoom", "--out", p, "--json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = run.json();
    assert_schema(&doc, "render");
    let first = std::fs::read(&path).unwrap();
    assert_eq!(doc["bytes"].as_u64(), Some(first.len() as u64));

    let stdout = harmap(&["render", "--family", "counterexample:γ=5/4", "--figure", "zoom"]);
    assert_eq!(stdout.stdout.as_bytes(), &first[..]);
    assert!(stdout.stdout.starts_with("<?xml"));

    let run = harmap(&[
        "render", "--family", "bl:λ=0.3", "--figure", "boundary", "--center", "0,0", "--half-width", "2",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout.matches("<polyline").count(), 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_goes_to_out_file() {
    let dir = std::env::temp_dir().join(format!("harmap-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eval.json");
    let run = harmap(&["eval", "--family", "identity", "--z", "0.1,0.2", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema(&doc, "eval");
    assert_eq!(doc["config"]["out"], path.to_str().unwrap());
    std::fs::remove_dir_all(&dir).ok();
}
