//! Command implementations behind the `confzero` binary: verify, classify,
//! zeroset, propagate and demo.

use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtin::{self, SURFACE_XI, SURFACE_XI_PRIME};
use crate::classify::{classify_zero, kernel_structure_check, PointClassification, ZeroCase};
use crate::config::{OutputFormat, Overrides, RawConfig, RunConfig};
use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::forms;
use crate::geodesics::{self, GeodesicState};
use crate::report::{points_csv, table_csv, CheckRecord, Report};
use crate::tolerances::{IDENTITY_TOL, UMBILICITY_TOL};
use crate::zeroset::{self, ZeroSample};

/// Verification checks in the order `verify` runs them, with the statement
/// each one certifies.
pub const CHECKS: &[(&str, &str)] = &[
    ("conformality", "Lie derivative of the metric along v equals phi times the metric"),
    ("trace-identity", "trace of the gradient of v equals n phi / 2"),
    ("second-derivative-identity", "second derivatives of v are determined by the gradient of phi"),
    ("kernel-structure", "Ker of the gradient at a zero: null if phi != 0, else even codimension with complement = image"),
    ("classification", "a zero is inessential (case i) or essential with the metric indefinite (ii) or semidefinite (iii) on H"),
    ("zero-sampling", "Newton zeros re-checked against the field evaluator"),
    ("model-comparison", "near z the zero set equals z + (null vectors of H), H = Ker grad v_z ∩ Ker dphi_z"),
    ("singular-set", "singular zeros are exactly z + (H ∩ H^perp) when the form on H is indefinite"),
    ("codimension-parity", "components have even codimension unless null and totally geodesic"),
    ("umbilicity", "non-null components are totally umbilical; null ones are totally geodesic"),
    ("divergence-constancy", "div v = n phi / 2 is constant on each component of the zero set"),
    ("geodesic-zero-lines", "null lines through z in H consist of zeros with phi = phi(z)"),
    ("geodesic-propagation", "the transported jet (x, v, grad_x v, phi) matches direct evaluation"),
    ("geodesic-char-poly", "the characteristic polynomial of grad v is constant along admissible null geodesics"),
];

/// Extra checks run by `demo`.
pub const DEMO_CHECKS: &[(&str, &str)] = &[
    ("surface-grid", "in dimension two any product grid is the zero set of a conformal field"),
    ("two-components", "phi takes independent constant values on separate components"),
    ("odd-codimension", "a null totally geodesic component of odd codimension"),
];

fn anchor(name: &str) -> &'static str {
    CHECKS
        .iter()
        .chain(DEMO_CHECKS)
        .find(|(n, _)| *n == name)
        .map(|(_, a)| *a)
        .unwrap_or("")
}

/// Result of a command: the report and, for sample/trajectory commands, CSV.
#[derive(Clone, Debug)]
pub struct CommandOutput {
    pub report: Report,
    pub csv: Option<String>,
}

impl CommandOutput {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

/// 2 for usage/config/I-O errors, 1 for anything a check would report.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::Csv(_)
        | Error::DimensionMismatch { .. }
        | Error::AsymmetricGram { .. }
        | Error::NotAntisymmetric { .. }
        | Error::DegenerateMetric
        | Error::NonFinite(_)
        | Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

fn push_check(report: &mut Report, name: &str, pass: bool, value: f64, tol: f64, witnesses: Vec<Vec<f64>>) {
    report.push(CheckRecord::new(name, anchor(name), pass, value, tol).with_witnesses(witnesses));
}

fn push_error(report: &mut Report, name: &str, err: &Error) {
    report.push(CheckRecord::new(name, anchor(name), false, f64::NAN, f64::NAN));
    report.detail(&format!("{name}.error"), err.to_string());
}

fn to_vec(x: &DVector<f64>) -> Vec<f64> {
    x.iter().copied().collect()
}

fn config_echo(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(&cfg.raw).unwrap_or(serde_json::Value::Null)
}

fn random_point(rng: &mut ChaCha8Rng, center: &DVector<f64>, radius: f64) -> DVector<f64> {
    center + DVector::from_fn(center.len(), |_, _| radius * rng.random_range(-1.0..=1.0))
}

const IDENTITY_POINTS: usize = 300;

fn identity_checks(report: &mut Report, cfg: &RunConfig) {
    let p = &cfg.params;
    let n = p.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1de7);
    let mut worst: [(f64, Option<DVector<f64>>); 3] = Default::default();
    for _ in 0..IDENTITY_POINTS {
        let x = random_point(&mut rng, &cfg.center, cfg.radius);
        let dir = random_point(&mut rng, &DVector::zeros(n), cfg.radius);
        let scale = p.identity_scale(&x);
        let trace = (p.gradient(&x).trace() - 0.5 * n as f64 * p.conformal_factor(&x)).abs();
        let vals = [
            p.lie_derivative_residual(&x) / scale,
            trace / scale,
            p.second_derivative_residual(&x, &dir) / (scale * (1.0 + dir.norm_squared())),
        ];
        for (w, v) in worst.iter_mut().zip(vals) {
            if v > w.0 || w.1.is_none() {
                *w = (v, Some(x.clone()));
            }
        }
    }
    for (name, (v, x)) in ["conformality", "trace-identity", "second-derivative-identity"].iter().zip(worst) {
        let pass = v <= IDENTITY_TOL;
        let wit = if pass { vec![] } else { x.iter().map(to_vec).collect() };
        push_check(report, name, pass, v, IDENTITY_TOL, wit);
    }
}

/// Points of the sample away from the model singular set.
fn regular_points(cls: &PointClassification, sample: &ZeroSample, flags: Option<&[bool]>, limit: usize) -> Vec<DVector<f64>> {
    let singular = cls.model.singular_set();
    sample
        .points
        .iter()
        .enumerate()
        .filter(|(i, _)| !flags.map(|f| f[*i]).unwrap_or(false))
        .filter(|(_, y)| match &singular {
            Some(v) => v.distance(&(*y - &cls.z)) > 0.05 * sample.radius,
            None => true,
        })
        .map(|(_, y)| y.clone())
        .take(limit)
        .collect()
}

fn geodesic_checks(report: &mut Report, cfg: &RunConfig, cls: &PointClassification) {
    let p = &cfg.params;
    let z = &cls.z;
    let dirs: Vec<DVector<f64>> = if cls.h.dim() == 0 {
        Vec::new()
    } else {
        forms::sample_null_cone(p.metric(), &cls.h, 50, 1.0, cfg.seed ^ 0x9e0)
            .unwrap_or_default()
            .into_iter()
            .filter(|w| w.norm() > 1e-6)
            .collect()
    };
    if dirs.is_empty() {
        report.detail("geodesic-zero-lines.note", "no null directions in H; lines through z are not applicable");
    } else {
        let mut worst = 0.0_f64;
        let mut failed = Vec::new();
        let mut tol = 0.0;
        let mut err = None;
        for w in &dirs {
            match geodesics::lemma_zeros_check(p, z, w, 21) {
                Ok(r) => {
                    worst = worst.max(r.max_v.max(r.max_phi_drift));
                    tol = r.tol;
                    if !r.pass {
                        failed.push(to_vec(w));
                    }
                }
                Err(e) => {
                    err = Some(e);
                    failed.push(to_vec(w));
                }
            }
        }
        if let Some(e) = err {
            report.detail("geodesic-zero-lines.error", e.to_string());
        }
        push_check(report, "geodesic-zero-lines", failed.is_empty(), worst, tol, failed);
    }

    // Propagation along null lines through z (random lines when the metric
    // is definite).
    let n = p.dim();
    let mut lines: Vec<DVector<f64>> = forms::sample_null_cone(p.metric(), &forms::Subspace::full(n), 4 + 2 * n, 1.0, cfg.seed ^ 0x961)
        .unwrap_or_default()
        .into_iter()
        .filter(|w| w.norm() > 1e-6)
        .collect();
    if lines.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x960);
        lines = (0..4).map(|_| random_point(&mut rng, &DVector::zeros(n), 1.0)).collect();
    }
    let mut worst = 0.0_f64;
    let mut failed = Vec::new();
    let mut tol = crate::tolerances::PROPAGATION_TOL;
    for xdot in lines.iter().rev().take(4) {
        let s0 = GeodesicState::from_field(p, z, xdot, 0.0);
        match geodesics::propagate(p, &s0, 1.0, 1000) {
            Ok(t) => {
                worst = worst.max(t.terminal_error);
                tol = t.tol;
                if !t.pass {
                    failed.push(to_vec(xdot));
                }
            }
            Err(e) => {
                report.detail("geodesic-propagation.error", e.to_string());
                failed.push(to_vec(xdot));
            }
        }
    }
    push_check(report, "geodesic-propagation", failed.is_empty(), worst, tol, failed);

    if !dirs.is_empty() {
        let mut worst = 0.0_f64;
        let mut failed = Vec::new();
        let mut tol = 0.0;
        for w in dirs.iter().take(10) {
            match geodesics::char_poly_constancy(p, z, w, 11) {
                Ok(r) => {
                    worst = worst.max(r.max_drift);
                    tol = r.tol;
                    if !r.pass {
                        failed.push(to_vec(w));
                    }
                }
                Err(e) => {
                    report.detail("geodesic-char-poly.error", e.to_string());
                    failed.push(to_vec(w));
                }
            }
        }
        push_check(report, "geodesic-char-poly", failed.is_empty(), worst, tol, failed);
    }
}

/// Worst `|v| / zero_tol` on lines from `z` through sample points.
fn line_containment(p: &ConformalFieldParams, z: &DVector<f64>, sample: &ZeroSample) -> f64 {
    let mut worst = 0.0_f64;
    for y in sample.points.iter().take(64) {
        for t in [-1.0, -0.5, 0.5, 1.5, 2.0] {
            let x = z + (y - z) * t;
            worst = worst.max(p.evaluate(&x).norm() / p.zero_tol(&x));
        }
    }
    worst
}

/// The full ordered suite at the zero `cfg.z`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = &cfg.params;
    let mut report = Report::new("verify", config_echo(cfg));
    identity_checks(&mut report, cfg);

    match kernel_structure_check(p, &cfg.z) {
        Ok(k) => {
            let value = if k.phi_nonzero { k.kernel_gram_max } else { k.codim as f64 };
            push_check(&mut report, "kernel-structure", k.pass, value, k.tol, vec![]);
            report.detail("kernel-structure", &k);
        }
        Err(e) => push_error(&mut report, "kernel-structure", &e),
    }

    let cls = match classify_zero(p, &cfg.z) {
        Ok(c) => c,
        Err(e) => {
            push_error(&mut report, "classification", &e);
            return Ok(CommandOutput { report, csv: None });
        }
    };
    let case_value = match cls.case {
        ZeroCase::I => 1.0,
        ZeroCase::II => 2.0,
        ZeroCase::III => 3.0,
    };
    push_check(&mut report, "classification", true, case_value, 0.0, vec![]);
    report.detail("classification", cls.summary());

    let sample = zeroset::find_zeros(p, &cfg.center, cfg.radius, cfg.seeds, cfg.seed)?;
    let ratio = sample
        .points
        .iter()
        .zip(&sample.residuals)
        .map(|(x, r)| r / p.zero_tol(x))
        .fold(0.0, f64::max);
    push_check(&mut report, "zero-sampling", !sample.is_empty() && ratio <= 1.0, ratio, 1.0, vec![]);
    report.detail("zero-sampling.count", sample.len());
    if sample.is_empty() {
        return Ok(CommandOutput { report, csv: None });
    }

    match zeroset::compare_to_model(p, &sample, &cls.model, cfg.tol, cfg.probes, cfg.seed ^ 0xc0) {
        Ok(c) => {
            let value = c.max_sample_distance.max(c.max_probe_distance) / sample.radius;
            let wit = c.outside_model.iter().chain(&c.not_zeros).cloned().collect();
            push_check(&mut report, "model-comparison", c.pass, value, cfg.tol, wit);
            report.detail("model-comparison", serde_json::json!({
                "subset": c.subset, "superset": c.superset, "probes": c.probes, "sample_size": c.sample_size,
            }));
        }
        Err(e) => push_error(&mut report, "model-comparison", &e),
    }

    let mut flags: Option<Vec<bool>> = None;
    if cls.case == ZeroCase::I {
        report.detail("singular-set.note", "case i: the zero set is an affine subspace; no singular-set check");
    } else {
        match zeroset::singular_set_check(p, &sample, &cls, cfg.tol, cfg.seed ^ 0x51) {
            Ok(s) => {
                // Largest distance of a flagged point from the model set.
                let spread = match cls.model.singular_set() {
                    Some(v) => s
                        .flagged_points
                        .iter()
                        .map(|y| v.distance(&(DVector::from_column_slice(y) - &cls.z)))
                        .fold(0.0, f64::max),
                    None if s.flagged_points.is_empty() => 0.0,
                    None => f64::INFINITY,
                };
                push_check(&mut report, "singular-set", s.pass, spread, s.vertex_threshold, s.flagged_points.clone());
                flags = Some(s.sample_flags.clone());
                report.detail("singular-set", serde_json::json!({
                    "regular_dim": s.regular_dim, "tested": s.tested, "base_flagged": s.base_flagged,
                    "flagged": s.flagged_points.len(), "false_positives": s.false_positives, "false_negatives": s.false_negatives,
                    "limits_of_regular": s.limits_of_regular,
                }));
            }
            Err(e) => push_error(&mut report, "singular-set", &e),
        }
    }

    let mut component_dim = None;
    let mut null_geodesic = None;
    match zeroset::codimension_parity_check(p, &cls, &sample, cfg.seed ^ 0x9a) {
        Ok(r) => {
            push_check(&mut report, "codimension-parity", r.pass, r.estimated_codim as f64, 0.0, vec![]);
            component_dim = Some(r.estimated_dim);
            if r.exempt {
                null_geodesic = Some((r.totally_geodesic, r.exact_geodesic));
            }
            report.detail("codimension-parity", &r);
        }
        Err(e) => push_error(&mut report, "codimension-parity", &e),
    }

    let mut umbilicity = None;
    match (component_dim, null_geodesic) {
        (_, Some((_, exact))) => {
            // Null component: totally geodesic test by radial-line containment.
            let ratio = line_containment(p, &cls.z, &sample);
            let pass = ratio <= 1.0 && (exact || p.exact().is_none());
            umbilicity = Some(0.0);
            push_check(&mut report, "umbilicity", pass, ratio, 1.0, vec![]);
            report.detail("umbilicity", serde_json::json!({"route": "null: radial-line containment", "exact": exact}));
        }
        (Some(0), None) => report.detail("umbilicity.note", "zero-dimensional component; curvature is not defined"),
        (Some(d), None) => {
            let pts = regular_points(&cls, &sample, flags.as_deref(), 24);
            match zeroset::umbilicity_check(p, &pts, d, p.metric(), 1e-3) {
                Ok(u) => {
                    umbilicity = Some(u.max_residual);
                    push_check(&mut report, "umbilicity", u.pass, u.max_residual, UMBILICITY_TOL, vec![]);
                    report.detail("umbilicity", &u);
                }
                Err(e) => push_error(&mut report, "umbilicity", &e),
            }
        }
        (None, None) => {}
    }

    match zeroset::divergence_constancy(p, &sample, flags.as_deref(), cfg.seed ^ 0xd1) {
        Ok(mut d) => {
            if let Some(u) = umbilicity {
                for c in d.components.iter_mut() {
                    c.umbilicity_residual = Some(u);
                }
            }
            push_check(&mut report, "divergence-constancy", d.pass, d.max_spread, d.tol, vec![]);
            report.detail("components", &d);
        }
        Err(e) => push_error(&mut report, "divergence-constancy", &e),
    }

    geodesic_checks(&mut report, cfg, &cls);
    Ok(CommandOutput { report, csv: None })
}

/// Classification of `cfg.z`; a non-zero `z` is a failed check.
pub fn cmd_classify(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = &cfg.params;
    let mut report = Report::new("classify", config_echo(cfg));
    match classify_zero(p, &cfg.z) {
        Ok(cls) => {
            let residual = p.evaluate(&cfg.z).norm();
            push_check(&mut report, "classification", true, residual, p.zero_tol(&cfg.z), vec![]);
            report.detail("classification", cls.summary());
        }
        Err(e @ Error::NotAZero { residual, tol }) => {
            report.push(CheckRecord::new("classification", anchor("classification"), false, residual, tol)
                .with_witnesses(vec![to_vec(&cfg.z)]));
            report.detail("classification.error", e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(CommandOutput { report, csv: None })
}

/// Sampled zeros as CSV plus the component report.
pub fn cmd_zeroset(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = &cfg.params;
    let mut report = Report::new("zeroset", config_echo(cfg));
    let sample = zeroset::find_zeros(p, &cfg.center, cfg.radius, cfg.seeds, cfg.seed)?;
    let ratio = sample
        .points
        .iter()
        .zip(&sample.residuals)
        .map(|(x, r)| r / p.zero_tol(x))
        .fold(0.0, f64::max);
    push_check(&mut report, "zero-sampling", ratio <= 1.0, ratio, 1.0, vec![]);
    report.detail("zero-sampling.count", sample.len());
    if !sample.is_empty() {
        let d = zeroset::divergence_constancy(p, &sample, None, cfg.seed ^ 0xd1)?;
        push_check(&mut report, "divergence-constancy", d.pass, d.max_spread, d.tol, vec![]);
        report.detail("components", &d);
    }
    let csv = points_csv(&sample.points, Some(&sample.residuals), p.dim())?;
    Ok(CommandOutput { report, csv: Some(csv) })
}

/// Transports the jet along `x0 + t xdot` and writes `(t, x.., v.., phi)`.
pub fn cmd_propagate(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = &cfg.params;
    let raw = &cfg.raw;
    let n = p.dim();
    let mut report = Report::new("propagate", config_echo(cfg));
    let vec_of = |v: &Option<Vec<f64>>| v.as_ref().map(|v| DVector::from_column_slice(v));
    let x0 = vec_of(&raw.x0).unwrap_or_else(|| cfg.z.clone());
    let xdot = vec_of(&raw.xdot).ok_or_else(|| Error::Config("propagate needs \"xdot\"".into()))?;
    let t0 = raw.t0.unwrap_or(0.0);
    let t1 = raw.t1.unwrap_or(1.0);
    let steps = raw.steps.unwrap_or(1000);
    let mut state = GeodesicState::from_field(p, &x0, &xdot, t0);
    if let Some(v) = vec_of(&raw.v0) {
        state.v = v;
    }
    if let Some(v) = vec_of(&raw.nabla_v0) {
        state.nabla_v = v;
    }
    if let Some(phi) = raw.phi0 {
        state.phi = phi;
    }
    if let Some(phidot) = raw.phidot0 {
        state.phidot = phidot;
    }
    let traj = match geodesics::propagate(p, &state, t1, steps) {
        Ok(t) => t,
        Err(e @ Error::Precondition(_)) => {
            report.push(CheckRecord::new("geodesic-propagation", anchor("geodesic-propagation"), false, state.mismatch(p), crate::tolerances::PROPAGATION_TOL));
            report.detail("geodesic-propagation.error", e.to_string());
            return Ok(CommandOutput { report, csv: None });
        }
        Err(e) => return Err(e),
    };
    push_check(&mut report, "geodesic-propagation", traj.pass, traj.terminal_error, traj.tol, vec![]);
    report.detail("geodesic-propagation.steps", traj.steps);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend((1..=n).map(|i| format!("v{i}")));
    header.push("phi".into());
    let rows: Vec<Vec<f64>> = traj
        .states
        .iter()
        .map(|s| {
            let mut r = vec![s.t];
            r.extend(s.x.iter());
            r.extend(s.v.iter());
            r.push(s.phi);
            r
        })
        .collect();
    Ok(CommandOutput {
        report,
        csv: Some(table_csv(&header, &rows)?),
    })
}

/// Default seeds for demos, smaller than the acceptance runs.
const DEMO_SEEDS: usize = 600;

/// Configuration for a registry field.
pub fn builtin_config(name: &str, overrides: &Overrides) -> Result<RunConfig> {
    let b = builtin::builtin(name).map_err(|e| Error::Config(e.to_string()))?;
    let mut raw = RawConfig::from_params(&b.params);
    raw.z = Some(to_vec(&b.z));
    raw.radius = Some(b.radius);
    raw.seeds = Some(DEMO_SEEDS);
    raw.validate(overrides)
}

/// Runs the suite matching a registry entry.
pub fn cmd_demo(name: &str, overrides: &Overrides) -> Result<CommandOutput> {
    if name == "surface-2d" {
        let mut report = Report::new("demo", serde_json::json!({"name": name, "xi": SURFACE_XI, "xi_prime": SURFACE_XI_PRIME}));
        let r = zeroset::surface_counterexample(SURFACE_XI, SURFACE_XI_PRIME, 16)?;
        let wit = r.found.iter().map(|x| x.to_vec()).collect();
        push_check(&mut report, "surface-grid", r.pass, r.max_conformality_residual, 1e-12, wit);
        report.detail("surface-grid", &r);
        return Ok(CommandOutput { report, csv: None });
    }
    let cfg = builtin_config(name, overrides)?;
    let mut out = cmd_verify(&cfg)?;
    out.report.command = "demo".into();
    out.report.detail("demo", name);
    match name {
        "bipolar" => {
            // Both poles in one box.
            let p = &cfg.params;
            let s = zeroset::find_zeros(p, &DVector::zeros(3), 2.0, cfg.seeds, cfg.seed)?;
            let d = zeroset::divergence_constancy(p, &s, None, cfg.seed)?;
            let phis: Vec<f64> = d.components.iter().map(|c| c.phi_values[0]).collect();
            let pass = d.pass && d.components.len() == 2 && !d.ambiguous;
            push_check(&mut out.report, "two-components", pass, d.components.len() as f64, 2.0, vec![phis]);
        }
        "odd-codim-null" | "case-b-null-H-31" => {
            let codim = out
                .report
                .checks
                .iter()
                .find(|c| c.name == "codimension-parity")
                .and_then(|c| c.value)
                .unwrap_or(f64::NAN);
            let pass = out.report.checks.iter().filter(|c| c.name == "codimension-parity").all(|c| c.pass)
                && codim % 2.0 == 1.0;
            push_check(&mut out.report, "odd-codimension", pass, codim, 0.0, vec![]);
        }
        _ => {}
    }
    Ok(out)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Emits a command's artefacts according to the format: CSV goes to `out`
/// (report beside it as `<out>.report.json`), JSON reports go to `out`.
pub fn emit(output: &CommandOutput, format: OutputFormat, out: Option<&Path>) -> Result<()> {
    match (format, &output.csv) {
        (OutputFormat::Csv, Some(csv)) => {
            write_output(out, csv)?;
            if let Some(path) = out {
                let mut side = PathBuf::from(path).into_os_string();
                side.push(".report.json");
                write_output(Some(Path::new(&side)), &output.report.to_json())?;
            }
            Ok(())
        }
        _ => write_output(out, &output.report.to_json()),
    }
}

/// Parameters of a random field for scripting and tests.
pub fn random_field(signature: (usize, usize), seed: u64) -> ConformalFieldParams {
    let mut diag = vec![1.0; signature.0];
    diag.extend(std::iter::repeat_n(-1.0, signature.1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ConformalFieldParams::random(forms::MetricForm::diagonal(&diag), &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_table_has_unique_names() {
        let mut names: Vec<_> = CHECKS.iter().chain(DEMO_CHECKS).map(|c| c.0).collect();
        names.sort_unstable();
        let len = names.len();
        names.dedup();
        assert_eq!(names.len(), len);
    }

    #[test]
    fn verify_dilation_passes() {
        let cfg = builtin_config("dilation", &Overrides::default()).unwrap();
        let out = cmd_verify(&cfg).unwrap();
        let failed: Vec<_> = out.report.failed().map(|c| c.name.clone()).collect();
        assert!(out.report.pass, "{failed:?}");
    }

    #[test]
    fn classify_rejects_non_zero() {
        let mut cfg = builtin_config("dilation", &Overrides::default()).unwrap();
        cfg.z = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let out = cmd_classify(&cfg).unwrap();
        assert_eq!(out.exit_code(), 1);
    }

    #[test]
    fn unknown_demo_is_a_config_error() {
        let err = cmd_demo("nope", &Overrides::default()).unwrap_err();
        assert_eq!(error_exit_code(&err), 2);
        assert!(err.to_string().contains("killing-block"));
    }
}
