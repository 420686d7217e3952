//! Propagation of `(v, ∇_ẋ v, phi, phi')` along straight geodesics and the
//! identities about zeros, proportionality and characteristic polynomials along
//! null lines.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::tolerances::{
    BISECTION_TOL, CHAR_POLY_DRIFT_TOL, LEMMA_ZEROS_TOL, MAX_STEP, PHI_ZERO_TOL, PROPAGATION_TOL,
    PROPORTIONALITY_TOL,
};

/// State `(t, x, ẋ, v, ∇_ẋ v, phi, phi')` along `x(t) = x(0) + t ẋ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicState {
    pub t: f64,
    pub x: DVector<f64>,
    pub xdot: DVector<f64>,
    pub v: DVector<f64>,
    pub nabla_v: DVector<f64>,
    pub phi: f64,
    pub phidot: f64,
}

impl GeodesicState {
    /// State at parameter `t` computed directly from the closed-form field.
    pub fn from_field(p: &ConformalFieldParams, x: &DVector<f64>, xdot: &DVector<f64>, t: f64) -> Self {
        Self {
            t,
            x: x.clone(),
            xdot: xdot.clone(),
            v: p.evaluate(x),
            nabla_v: p.gradient(x) * xdot,
            phi: p.conformal_factor(x),
            phidot: p.phi_differential().dot(xdot),
        }
    }

    /// Relative mismatch between this state and direct evaluation at `x`.
    pub fn mismatch(&self, p: &ConformalFieldParams) -> f64 {
        let direct = Self::from_field(p, &self.x, &self.xdot, self.t);
        let rel = |a: &DVector<f64>, b: &DVector<f64>| (a - b).norm() / b.norm().max(1.0);
        let rels = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        [
            rel(&self.v, &direct.v),
            rel(&self.nabla_v, &direct.nabla_v),
            rels(self.phi, direct.phi),
            rels(self.phidot, direct.phidot),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Integrated trajectory with the terminal cross-check.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<GeodesicState>,
    pub steps: usize,
    pub step: f64,
    /// Relative error of the terminal state against direct evaluation.
    pub terminal_error: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone)]
struct Packed {
    x: DVector<f64>,
    v: DVector<f64>,
    nv: DVector<f64>,
    phi: f64,
    phidot: f64,
}

impl Packed {
    fn axpy(&self, h: f64, k: &Packed) -> Packed {
        Packed {
            x: &self.x + &k.x * h,
            v: &self.v + &k.v * h,
            nv: &self.nv + &k.nv * h,
            phi: self.phi + h * k.phi,
            phidot: self.phidot + h * k.phidot,
        }
    }
}

/// Flat system: `x' = ẋ`, `v' = ∇_ẋ v`, `(∇_ẋ v)' = phi' ẋ - <ẋ,ẋ> ∇phi / 2`,
/// `phi'' = 0`.
fn rhs(y: &Packed, xdot: &DVector<f64>, xx: f64, grad_phi: &DVector<f64>) -> Packed {
    Packed {
        x: xdot.clone(),
        v: y.nv.clone(),
        nv: xdot * y.phidot - grad_phi * (0.5 * xx),
        phi: y.phidot,
        phidot: 0.0,
    }
}

/// Integrates from `state0` to `t1` with classical RK4. The step count is
/// raised if needed so that the step never exceeds `MAX_STEP`.
pub fn propagate(p: &ConformalFieldParams, state0: &GeodesicState, t1: f64, steps: usize) -> Result<Trajectory> {
    let n = p.dim();
    if state0.x.len() != n || state0.xdot.len() != n || state0.v.len() != n || state0.nabla_v.len() != n {
        return Err(Error::DimensionMismatch {
            what: "geodesic state",
            expected: n,
            got: state0.x.len(),
        });
    }
    if !t1.is_finite() {
        return Err(Error::NonFinite("t1"));
    }
    let mismatch = state0.mismatch(p);
    if mismatch > PROPAGATION_TOL {
        return Err(Error::Precondition(format!(
            "initial state is inconsistent with the field (relative mismatch {mismatch:e})"
        )));
    }
    let span = t1 - state0.t;
    let min_steps = (span.abs() / MAX_STEP).ceil() as usize;
    let steps = steps.max(min_steps).max(1);
    let h = span / steps as f64;
    let xdot = state0.xdot.clone();
    let xx = p.metric().norm_sq(&xdot);
    let grad_phi = p.phi_gradient();
    let mut y = Packed {
        x: state0.x.clone(),
        v: state0.v.clone(),
        nv: state0.nabla_v.clone(),
        phi: state0.phi,
        phidot: state0.phidot,
    };
    let mut states = Vec::with_capacity(steps + 1);
    let pack = |y: &Packed, t: f64| GeodesicState {
        t,
        x: y.x.clone(),
        xdot: xdot.clone(),
        v: y.v.clone(),
        nabla_v: y.nv.clone(),
        phi: y.phi,
        phidot: y.phidot,
    };
    states.push(pack(&y, state0.t));
    for k in 0..steps {
        let k1 = rhs(&y, &xdot, xx, &grad_phi);
        let k2 = rhs(&y.axpy(h / 2.0, &k1), &xdot, xx, &grad_phi);
        let k3 = rhs(&y.axpy(h / 2.0, &k2), &xdot, xx, &grad_phi);
        let k4 = rhs(&y.axpy(h, &k3), &xdot, xx, &grad_phi);
        y = y
            .axpy(h / 6.0, &k1)
            .axpy(h / 3.0, &k2)
            .axpy(h / 3.0, &k3)
            .axpy(h / 6.0, &k4);
        let t = state0.t + h * (k + 1) as f64;
        // Flat geodesics are straight lines; re-anchor x to avoid drift.
        y.x = &state0.x + &xdot * (t - state0.t);
        states.push(pack(&y, t));
    }
    let terminal_error = states.last().expect("at least one state").mismatch(p);
    Ok(Trajectory {
        states,
        steps,
        step: h,
        terminal_error,
        tol: PROPAGATION_TOL,
        pass: terminal_error <= PROPAGATION_TOL,
    })
}

fn uniform_samples(a: f64, b: f64, count: usize) -> impl Iterator<Item = f64> {
    let count = count.max(2);
    (0..count).map(move |k| a + (b - a) * k as f64 / (count - 1) as f64)
}

fn null_tol(p: &ConformalFieldParams, d: &DVector<f64>) -> f64 {
    1e-10 * p.metric().scale() * d.norm_squared().max(f64::MIN_POSITIVE)
}

fn check_zero(p: &ConformalFieldParams, z: &DVector<f64>, which: &str) -> Result<()> {
    let residual = p.evaluate(z).norm();
    let tol = p.zero_tol(z);
    if residual > tol {
        return Err(Error::Precondition(format!(
            "{which} is not a zero of v (|v| = {residual:e}, tolerance {tol:e})"
        )));
    }
    Ok(())
}

/// Euclidean distance of `a` from the line spanned by `d`.
fn off_line(a: &DVector<f64>, d: &DVector<f64>) -> f64 {
    let dn = d.normalize();
    (a - &dn * dn.dot(a)).norm()
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaZerosReport {
    pub samples: usize,
    pub max_v: f64,
    pub max_phi_drift: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Along `z + t w` (`t ∈ [-1, 1]`), with `w` null in `Ker ∇v_z ∩ Ker dphi_z`,
/// the field vanishes and `phi = phi(z)`.
pub fn lemma_zeros_check(
    p: &ConformalFieldParams,
    z: &DVector<f64>,
    w_dir: &DVector<f64>,
    t_samples: usize,
) -> Result<LemmaZerosReport> {
    check_zero(p, z, "z")?;
    let ww = p.metric().norm_sq(w_dir);
    if ww.abs() > null_tol(p, w_dir) {
        return Err(Error::Precondition(format!("w is not null (<w,w> = {ww:e})")));
    }
    let kw = (p.gradient(z) * w_dir).norm();
    let ktol = p.zero_tol(z) * w_dir.norm().max(1.0);
    if kw > ktol {
        return Err(Error::Precondition(format!("w is not in Ker ∇v_z (|∇v_z w| = {kw:e})")));
    }
    let dphi_w = p.phi_differential().dot(w_dir);
    if dphi_w.abs() > PHI_ZERO_TOL * p.param_scale() * w_dir.norm().max(1.0) {
        return Err(Error::Precondition(format!("w is not in Ker dphi_z (dphi(w) = {dphi_w:e})")));
    }
    let phi_z = p.conformal_factor(z);
    let (mut max_v, mut max_phi_drift) = (0.0_f64, 0.0_f64);
    for t in uniform_samples(-1.0, 1.0, t_samples) {
        let x = z + w_dir * t;
        max_v = max_v.max(p.evaluate(&x).norm());
        max_phi_drift = max_phi_drift.max((p.conformal_factor(&x) - phi_z).abs());
    }
    let tol = LEMMA_ZEROS_TOL * p.param_scale();
    Ok(LemmaZerosReport {
        samples: t_samples.max(2),
        max_v,
        max_phi_drift,
        tol,
        pass: max_v <= tol && max_phi_drift <= tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProportionalityReport {
    pub lambda: f64,
    pub samples: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

fn check_null_tangent(p: &ConformalFieldParams, x0: &DVector<f64>, xdot: &DVector<f64>) -> Result<()> {
    if xdot.norm() == 0.0 {
        return Err(Error::InvalidArgument("geodesic velocity must be nonzero".into()));
    }
    let xx = p.metric().norm_sq(xdot);
    if xx.abs() > null_tol(p, xdot) {
        return Err(Error::Precondition(format!("geodesic is not null (<ẋ,ẋ> = {xx:e})")));
    }
    let tol = p.zero_tol(x0) * xdot.norm().max(1.0);
    let v = p.evaluate(x0);
    if off_line(&v, xdot) > tol {
        return Err(Error::Precondition("v is not tangent to the geodesic at t = 0".into()));
    }
    let nv = p.gradient(x0) * xdot;
    if off_line(&nv, xdot) > tol {
        return Err(Error::Precondition("∇_ẋ v is not parallel to ẋ at t = 0".into()));
    }
    Ok(())
}

/// Along a null geodesic with `v` tangent, `∇_ẋ v = [λ + phi - phi(x(0))] ẋ`.
pub fn nvprl_proportionality(
    p: &ConformalFieldParams,
    x0: &DVector<f64>,
    xdot: &DVector<f64>,
    t_samples: usize,
) -> Result<ProportionalityReport> {
    check_null_tangent(p, x0, xdot)?;
    let nv0 = p.gradient(x0) * xdot;
    let lambda = nv0.dot(xdot) / xdot.norm_squared();
    let phi0 = p.conformal_factor(x0);
    let mut max_residual = 0.0_f64;
    for t in uniform_samples(-1.0, 1.0, t_samples) {
        let x = x0 + xdot * t;
        let nv = p.gradient(&x) * xdot;
        let predicted = xdot * (lambda + p.conformal_factor(&x) - phi0);
        max_residual = max_residual.max((nv - predicted).norm());
    }
    let tol = PROPORTIONALITY_TOL * p.param_scale();
    Ok(ProportionalityReport {
        lambda,
        samples: t_samples.max(2),
        max_residual,
        tol,
        pass: max_residual <= tol,
    })
}

/// Characteristic polynomial coefficients `[1, c_1, .., c_n]` of `m`
/// (`det(s I - m) = s^n + c_1 s^{n-1} + .. + c_n`) by Faddeev–LeVerrier.
pub fn char_poly_coeffs(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut coeffs = vec![1.0];
    let mut mk = DMatrix::<f64>::zeros(n, n);
    let id = DMatrix::<f64>::identity(n, n);
    let mut c_prev = 1.0;
    for k in 1..=n {
        mk = m * (&mk + &id * c_prev);
        let c = -mk.trace() / k as f64;
        coeffs.push(c);
        c_prev = c;
    }
    coeffs
}

#[derive(Clone, Debug, Serialize)]
pub struct CharPolyReport {
    pub coefficients: Vec<f64>,
    pub samples: usize,
    pub max_drift: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Along a null geodesic with `v` tangent and `phi` constant, `∇v` has the
/// same characteristic polynomial at every point.
pub fn char_poly_constancy(
    p: &ConformalFieldParams,
    x0: &DVector<f64>,
    xdot: &DVector<f64>,
    t_samples: usize,
) -> Result<CharPolyReport> {
    check_null_tangent(p, x0, xdot)?;
    let phidot = p.phi_differential().dot(xdot);
    if phidot.abs() > PHI_ZERO_TOL * p.param_scale() * xdot.norm().max(1.0) {
        return Err(Error::Precondition(format!("phi is not constant along the geodesic (phi' = {phidot:e})")));
    }
    let c0 = char_poly_coeffs(&p.gradient(x0));
    let scale = c0.iter().fold(1.0_f64, |a, c| a.max(c.abs()));
    let mut max_drift = 0.0_f64;
    for t in uniform_samples(-1.0, 1.0, t_samples) {
        let c = char_poly_coeffs(&p.gradient(&(x0 + xdot * t)));
        for (a, b) in c.iter().zip(&c0) {
            max_drift = max_drift.max((a - b).abs());
        }
    }
    let tol = CHAR_POLY_DRIFT_TOL * scale;
    Ok(CharPolyReport {
        coefficients: c0,
        samples: t_samples.max(2),
        max_drift,
        tol,
        pass: max_drift <= tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InteriorScanReport {
    pub null_segment: bool,
    /// Interior parameter where `phi` vanishes (non-null segments) or where
    /// `phi - phi(z)` vanishes (null segments).
    pub t_star: Option<f64>,
    pub phi_at_t_star: Option<f64>,
    /// Interior parameter where `phi'` vanishes (null segments only).
    pub t_phidot_zero: Option<f64>,
    pub samples: usize,
    pub found: bool,
}

/// Looks for interior points of the segment `[z, x]` joining two zeros where
/// `phi` vanishes (non-null segment) or where `phi - phi(z)` and `phi'`
/// vanish (null segment with `∇_ẋ v(z) = 0`).
pub fn interior_vanishing_scan(
    p: &ConformalFieldParams,
    z: &DVector<f64>,
    x: &DVector<f64>,
    t_samples: usize,
) -> Result<InteriorScanReport> {
    check_zero(p, z, "z")?;
    check_zero(p, x, "x")?;
    let d = x - z;
    if d.norm() <= crate::tolerances::DEDUPE_FACTOR * (1.0 + z.norm()) {
        return Err(Error::InvalidArgument("the two zeros coincide; the scan is vacuous".into()));
    }
    let samples = t_samples.max(3);
    let phi_at = |t: f64| p.conformal_factor(&(z + &d * t));
    let eps = PHI_ZERO_TOL * p.param_scale();
    let null_segment = p.metric().norm_sq(&d).abs() <= null_tol(p, &d);
    // Interior grid strictly inside (0, 1).
    let grid: Vec<f64> = (1..=samples).map(|k| k as f64 / (samples + 1) as f64).collect();
    let find_root = |f: &dyn Fn(f64) -> f64| -> Option<f64> {
        let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
        if let Some(i) = vals.iter().position(|v| v.abs() <= eps) {
            return Some(grid[i]);
        }
        for i in 0..grid.len() - 1 {
            if vals[i].signum() != vals[i + 1].signum() {
                let (mut lo, mut hi, mut flo) = (grid[i], grid[i + 1], vals[i]);
                while hi - lo > BISECTION_TOL {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid);
                    if fm == 0.0 {
                        return Some(mid);
                    }
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return Some(0.5 * (lo + hi));
            }
        }
        None
    };
    if !null_segment {
        let t_star = find_root(&phi_at);
        return Ok(InteriorScanReport {
            null_segment,
            t_star,
            phi_at_t_star: t_star.map(phi_at),
            t_phidot_zero: None,
            samples,
            found: t_star.is_some(),
        });
    }
    let nv = p.gradient(z) * &d;
    if nv.norm() > p.zero_tol(z) * d.norm().max(1.0) {
        return Err(Error::Precondition("null segment with ∇_ẋ v(z) ≠ 0".into()));
    }
    let phi_z = p.conformal_factor(z);
    let drift = |t: f64| phi_at(t) - phi_z;
    let t_star = find_root(&drift);
    let dphi = p.phi_differential();
    let phidot = |_: f64| dphi.dot(&d);
    let t_phidot_zero = find_root(&phidot);
    Ok(InteriorScanReport {
        null_segment,
        t_star,
        phi_at_t_star: t_star.map(phi_at),
        t_phidot_zero,
        samples,
        found: t_star.is_some() && t_phidot_zero.is_some(),
    })
}
