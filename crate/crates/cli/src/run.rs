use std::collections::BTreeMap;
use std::path::PathBuf;

use harmap_core::bounds::{
    area, area_bounds, area_monte_carlo, area_sandwich, check_coefficient_sharpness, covering_check,
    growth_consistency, verify_sharpness, AreaQuad, Lattice,
};
use harmap_core::classcheck::{check_membership, check_pbeta, check_theorem_b_condition, DiskGrid, PBetaParams};
use harmap_core::mappings::{extremal, HarmonicMapping};
use harmap_core::render::{
    auto_viewport, render_boundary_curve, render_image_domain, SceneSpec, Viewport,
};
use harmap_core::univalence::{
    find_symmetric_collision, univalence_scan, CollisionSearchParams, RStrategy, ScanParams, Verdict,
    DEFAULT_COLLISION_TOL,
};
use harmap_core::{BoundReport, ClassParams, Error, ExtremalSpec, Result, VERSION};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{
    AreaArgs, CheckArgs, Cli, Command, CounterexampleArgs, EvalArgs, Figure, RenderArgs, ScanArgs, Bound,
    VerifyArgs,
};

const CHECK_TOL: f64 = 1e-9;
const COLLISION_TOL: f64 = 1e-12;
const COEFF_TOL: f64 = 1e-10;
const GROWTH_TOL: f64 = 1e-9;
const COVERING_EPS: f64 = 1e-6;
const COVERING_TOL: f64 = 1e-4;

/// Everything that determines a run, echoed into every JSON report.
#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub parameters: Map<String, Value>,
    pub tolerances: BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub json: bool,
    pub seed: u64,
}

impl RunConfig {
    fn new(cli: &Cli) -> Self {
        let mut parameters = match serde_json::to_value(&cli.command) {
            Ok(Value::Object(m)) => m,
            _ => Map::new(),
        };
        let subcommand = match parameters.remove("subcommand") {
            Some(Value::String(s)) => s,
            _ => String::new(),
        };
        parameters.remove("family");
        Self {
            subcommand,
            family: cli.command.family().map(|f| f.to_string()),
            parameters,
            tolerances: BTreeMap::new(),
            out: cli.out.clone(),
            json: cli.json,
            seed: cli.seed,
        }
    }

    /// `--tol` when given, the command default otherwise; recorded either way.
    fn tol(&mut self, name: &'static str, user: Option<f64>, default: f64) -> f64 {
        let v = user.unwrap_or(default);
        self.tolerances.insert(name, v);
        v
    }
}

impl Command {
    fn family(&self) -> Option<&harmap_core::mappings::FamilySpec> {
        match self {
            Command::Eval(a) => Some(&a.family),
            Command::Check(a) => Some(&a.family),
            Command::Univalence(a) => Some(&a.family),
            Command::Area(a) => Some(&a.family),
            Command::Render(a) => Some(&a.family),
            Command::VerifyBounds(_) | Command::Counterexample(_) => None,
        }
    }
}

/// What a command produced: the document to print and whether the checked
/// property held.
pub struct Outcome {
    pub pass: bool,
    pub output: Output,
}

pub enum Output {
    Report { json: Value, text: String },
    Svg { svg: String, summary: Value },
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut config = RunConfig::new(cli);
    let (pass, result, text) = match &cli.command {
        Command::Eval(a) => eval(a)?,
        Command::Check(a) => check(a, cli.tol, &mut config)?,
        Command::VerifyBounds(a) => verify_bounds(a, cli.tol, &mut config)?,
        Command::Univalence(a) => univalence(a, cli.tol, &mut config)?,
        Command::Counterexample(a) => counterexample(a, cli.tol, &mut config)?,
        Command::Area(a) => area_cmd(a, cli.tol, cli.seed, &mut config)?,
        Command::Render(a) => return render(a, cli, config),
    };
    Ok(Outcome {
        pass,
        output: Output::Report {
            json: envelope(&config, result),
            text,
        },
    })
}

/// Report fields at the top level, plus `tool`, `version` and `config`.
fn envelope(config: &RunConfig, result: Value) -> Value {
    let mut out = Map::new();
    out.insert("tool".into(), json!("harmap"));
    out.insert("version".into(), json!(VERSION));
    out.insert("config".into(), serde_json::to_value(config).unwrap_or(Value::Null));
    if let Value::Object(fields) = result {
        out.extend(fields);
    }
    Value::Object(out)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn fmt_c(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{} - {}i", z.re, -z.im)
    } else {
        format!("{} + {}i", z.re, z.im)
    }
}

fn report_text(r: &BoundReport) -> String {
    let mut s = format!(
        "{}: {} (margin {:.3e})\n",
        r.check,
        if r.pass { "pass" } else { "FAIL" },
        r.margin
    );
    if let Some(w) = &r.witness {
        s += &format!("  witness z = {}, value = {}\n", fmt_c(w.point()), w.value);
    }
    for (k, v) in &r.values {
        s += &format!("  {k} = {v}\n");
    }
    for n in &r.notes {
        s += &format!("  note: {n}\n");
    }
    s
}

fn eval(a: &EvalArgs) -> Result<(bool, Value, String)> {
    let f = a.family.build()?;
    let z = a.z;
    let (fz, h, g) = (f.evaluate(z)?, f.h(z)?, f.g(z)?);
    let (hp, gp) = (f.h_prime(z)?, f.g_prime(z)?);
    // h' = 0 leaves the dilatation undefined; report it as null
    let dilatation = match f.dilatation(z) {
        Ok(w) => Some(w),
        Err(Error::Singularity { .. }) => None,
        Err(e) => return Err(e),
    };
    let jacobian = f.jacobian(z)?;
    let mut text = format!(
        "{}\nz         = {}\nf(z)      = {}\nh(z)      = {}\ng(z)      = {}\nh'(z)     = {}\ng'(z)     = {}\n",
        f.label(),
        fmt_c(z),
        fmt_c(fz),
        fmt_c(h),
        fmt_c(g),
        fmt_c(hp),
        fmt_c(gp)
    );
    text += &match dilatation {
        Some(w) => format!("g'/h'     = {}\n", fmt_c(w)),
        None => "g'/h'     = undefined (h' = 0)\n".to_string(),
    };
    text += &format!("jacobian  = {jacobian}\n");
    let result = json!({
        "z": z, "f": fz, "h": h, "g": g, "h_prime": hp, "g_prime": gp,
        "dilatation": dilatation, "jacobian": jacobian,
    });
    Ok((true, result, text))
}

fn check(a: &CheckArgs, tol: Option<f64>, config: &mut RunConfig) -> Result<(bool, Value, String)> {
    let tol = config.tol("check", tol, CHECK_TOL);
    let f = a.family.build()?;
    let grid = DiskGrid::to_boundary(a.radii, a.angles)?;
    let report = if let Some((alpha, zeta, n)) = a.class {
        check_membership(&f, &ClassParams::new(alpha, zeta, n)?, &grid, tol)?
    } else if let Some(beta) = a.pbeta {
        check_pbeta(&f, &PBetaParams::new(beta)?, &grid, tol)?
    } else if let Some((lambda, k, n)) = a.dilatation {
        check_theorem_b_condition(&f, lambda, k, n, &grid, tol)?
    } else {
        return Err(Error::Parameter("one of --class, --pbeta, --dilatation is required".into()));
    };
    Ok((report.pass, to_value(&report), report_text(&report)))
}

fn verify_bounds(a: &VerifyArgs, tol: Option<f64>, config: &mut RunConfig) -> Result<(bool, Value, String)> {
    let coeff_tol = config.tol("coefficients", tol, COEFF_TOL);
    let growth_tol = config.tol("growth", tol, GROWTH_TOL);
    let covering_tol = config.tol("covering", tol, COVERING_TOL);
    let quad = AreaQuad {
        tol: config.tol("area", tol, AreaQuad::default().tol),
        ..AreaQuad::default()
    };
    let lattice = Lattice {
        alphas: a.alphas.clone(),
        ns: a.ns.clone(),
        ..Lattice::default()
    };
    let want = |t: Bound| a.bound == Bound::All || a.bound == t;
    let mut reports = Vec::new();
    for p in lattice.points() {
        if want(Bound::Coefficients) {
            reports.push(check_coefficient_sharpness(&p, a.kmax, coeff_tol)?);
        }
        if want(Bound::Growth) {
            reports.push(growth_consistency(&p, &lattice.radii, growth_tol)?);
            reports.push(verify_sharpness(&p, &lattice.radii)?);
        }
        if want(Bound::Covering) {
            reports.push(covering_check(&p, COVERING_EPS, covering_tol)?);
        }
        if want(Bound::Area) {
            let f = extremal(&ExtremalSpec::unrotated(p))?;
            reports.push(area_sandwich(&f, &p, &lattice.radii, &quad)?);
        }
    }
    if reports.is_empty() {
        return Err(Error::Parameter("the lattice has no admissible points".into()));
    }
    let failures = reports.iter().filter(|r| !r.pass).count();
    let mut text = String::new();
    for r in &reports {
        text += &format!("{:<4} {:<90} margin {:.3e}\n", if r.pass { "ok" } else { "FAIL" }, r.check, r.margin);
    }
    text += &format!("{} checks, {} failed\n", reports.len(), failures);
    let result = json!({
        "pass": failures == 0,
        "checks": reports.len(),
        "failures": failures,
        "lattice": lattice,
        "reports": reports,
    });
    Ok((failures == 0, result, text))
}

fn univalence(a: &ScanArgs, tol: Option<f64>, config: &mut RunConfig) -> Result<(bool, Value, String)> {
    let p = ScanParams {
        r: a.r,
        cells: a.cells,
        collision_tol: config.tol("collision", tol, DEFAULT_COLLISION_TOL),
        separation_floor: a.separation,
    };
    p.validate()?;
    let f = a.family.build()?;
    let report = univalence_scan(&f, &p)?;
    let pass = report.verdict == Verdict::CertifiedAtResolution;
    let verdict = serde_json::to_value(report.verdict)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    let mut text = format!(
        "{} on |z| <= {} ({} angles x {} circles): {verdict}\n",
        f.label(),
        report.radius,
        report.resolution,
        report.circles
    );
    if let Some((z1, z2)) = report.collision_pair() {
        text += &format!(
            "  z1 = {}\n  z2 = {}\n  |f(z1) - f(z2)| = {:e}\n  |z1 - z2| = {}\n",
            fmt_c(z1),
            fmt_c(z2),
            report.image_gap.unwrap_or(f64::NAN),
            (z1 - z2).norm()
        );
    }
    text += &format!(
        "  min jacobian {:e}, {} candidates, {} unconfirmed\n",
        report.jacobian_min, report.candidates, report.unconfirmed
    );
    for n in &report.notes {
        text += &format!("  note: {n}\n");
    }
    Ok((pass, to_value(&report), text))
}

fn counterexample(a: &CounterexampleArgs, tol: Option<f64>, config: &mut RunConfig) -> Result<(bool, Value, String)> {
    let strategy = a.r0.map_or(RStrategy::Midpoint, RStrategy::Explicit);
    let p = CollisionSearchParams::new(a.gamma, strategy, config.tol("collision", tol, COLLISION_TOL))?;
    let c = find_symmetric_collision(&p)?;
    let text = format!(
        "f_γ with γ = {}: r0 = {} (threshold {}), θ0 = {}\n  z1 = {}\n  z2 = {}\n  f(z1) = {}\n  |f(z1) - f(z2)| = {:e}\n  |z1 - z2| = {}\n",
        c.gamma,
        c.r0,
        c.threshold,
        c.theta0,
        fmt_c(c.z1),
        fmt_c(c.z2),
        fmt_c(c.f_z1),
        c.image_gap,
        c.separation
    );
    Ok((true, to_value(&c), text))
}

fn area_cmd(a: &AreaArgs, tol: Option<f64>, seed: u64, config: &mut RunConfig) -> Result<(bool, Value, String)> {
    let quad = AreaQuad {
        tol: config.tol("area", tol, AreaQuad::default().tol),
        ..AreaQuad::default()
    };
    let f = a.family.build()?;
    let value = area(&f, a.r, &quad)?;
    let mut text = format!("area of {}(|z| < {}) = {}\n", f.label(), a.r, value);
    let mut result = json!({ "r": a.r, "area": value, "quadrature": quad });
    if a.mc_samples > 0 {
        let (estimate, std_err) = area_monte_carlo(&f, a.r, a.mc_samples, seed)?;
        text += &format!(
            "  monte carlo ({} samples, seed {seed}): {estimate} ± {std_err}\n",
            a.mc_samples
        );
        result["monte_carlo"] = json!({
            "estimate": estimate, "std_err": std_err, "samples": a.mc_samples, "seed": seed,
        });
    }
    if let Some(bounds) = class_area_bounds(&a.family, a.r)? {
        let inside = value >= bounds.lower * (1.0 - quad.tol) && value <= bounds.upper * (1.0 + quad.tol);
        text += &format!(
            "  class bounds [{}, {}]: {}\n",
            bounds.lower,
            bounds.upper,
            if inside { "inside" } else { "OUTSIDE" }
        );
        result["bounds"] = json!({ "lower": bounds.lower, "upper": bounds.upper, "inside": inside });
    }
    Ok((true, result, text))
}

/// Area bounds when the family is a class member with admissible parameters.
fn class_area_bounds(
    family: &harmap_core::mappings::FamilySpec,
    r: f64,
) -> Result<Option<harmap_core::bounds::AreaBounds>> {
    use harmap_core::mappings::FamilySpec;
    let FamilySpec::Extremal { alpha, zeta, n, .. } = *family else {
        return Ok(None);
    };
    match ClassParams::new(alpha, zeta, n) {
        Ok(p) if (0.0..1.0).contains(&alpha) => area_bounds(&p, r).map(Some),
        _ => Ok(None),
    }
}

fn render(a: &RenderArgs, cli: &Cli, config: RunConfig) -> Result<Outcome> {
    let f = a.family.build()?;
    let viewport = match (a.center, a.half_width) {
        (Some(c), Some(hw)) => Some(Viewport::new(c, hw)?),
        (Some(c), None) => Some(Viewport::new(c, if a.figure == Figure::Zoom { 0.05 } else { 1.0 })?),
        (None, Some(_)) => return Err(Error::Parameter("--half-width needs --center".into())),
        (None, None) => None,
    };
    let (svg, scene_viewport) = match a.figure {
        Figure::Image | Figure::Zoom => {
            let mut scene = if a.figure == Figure::Image {
                SceneSpec::whole_image(a.family.clone(), &f)?
            } else {
                SceneSpec::zoom(a.family.clone(), zoom_focus(&a.family, &f, viewport.as_ref())?)?
            };
            scene.r = a.r;
            scene.circles = a.circles;
            scene.rays = a.rays;
            scene.samples_per_curve = a.samples;
            match viewport {
                Some(vp) => scene.viewport = vp,
                None if a.figure == Figure::Image && a.r != 0.999 => scene.viewport = auto_viewport(&f, a.r, 0.05)?,
                None => {}
            }
            scene.validate()?;
            (render_image_domain(&scene, &f)?, scene.viewport)
        }
        Figure::Boundary => {
            let vp = match viewport {
                Some(vp) => vp,
                None => auto_viewport(&f, a.r, 0.05)?,
            };
            (render_boundary_curve(&f, a.r, a.samples, &vp)?, vp)
        }
    };
    let summary = envelope(
        &config,
        json!({
            "figure": a.figure,
            "viewport": scene_viewport,
            "bytes": svg.len(),
            "polylines": svg.matches("<polyline").count(),
            "out": cli.out,
        }),
    );
    Ok(Outcome {
        pass: true,
        output: Output::Svg { svg, summary },
    })
}

/// Explicit `--center`, or the common image of the conjugate collision pair
/// for the counterexample family.
fn zoom_focus(
    family: &harmap_core::mappings::FamilySpec,
    _f: &HarmonicMapping,
    viewport: Option<&Viewport>,
) -> Result<Complex64> {
    use harmap_core::mappings::FamilySpec;
    if let Some(vp) = viewport {
        return Ok(Complex64::new(vp.center[0], vp.center[1]));
    }
    match *family {
        FamilySpec::Counterexample { gamma } => {
            Ok(find_symmetric_collision(&CollisionSearchParams::midpoint(gamma)?)?.f_z1)
        }
        _ => Err(Error::Parameter(
            "zoom needs --center unless the family is counterexample".into(),
        )),
    }
}
