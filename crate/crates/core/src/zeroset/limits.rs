//! Limits of connecting directions `[y_j - x_j]` between zeros and the audit
//! of radial limit directions against the null cone.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::local::random_in_ball;
use super::{newton_root, seeded_rng, ZeroSample};
use crate::classify::{PointClassification, ZeroCase};
use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::forms::{self, ConePrediction, MetricForm, Subspace};
use crate::linalg::{self, RankTol};
use crate::tolerances::LIMIT_ANGLE_TOL;

/// Estimated projective limit of `[y_j - x_j]`.
#[derive(Clone, Debug, Serialize)]
pub struct LimitEstimate {
    pub direction: Vec<f64>,
    /// Angles (radians) between consecutive unit directions.
    pub increments: Vec<f64>,
    pub last_increment: f64,
}

impl LimitEstimate {
    pub fn direction(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.direction)
    }
}

fn angle(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    2.0 * ((a - b).norm() / 2.0).min(1.0).asin()
}

/// Sign-aligned unit directions of `y_j - x_j`; the limit is accepted when
/// the last angular increment is below the limit tolerance.
pub fn connecting_limit_estimate(xs: &[DVector<f64>], ys: &[DVector<f64>]) -> Result<LimitEstimate> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            what: "sequence length",
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientSample("need at least three pairs".into()));
    }
    let gaps: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (y - x).norm()).collect();
    if gaps.iter().any(|g| g.is_nan() || *g <= 0.0 || g.is_infinite()) {
        return Err(Error::Precondition("pairs must be distinct finite points".into()));
    }
    if gaps.windows(2).any(|w| w[1] >= w[0]) || gaps[gaps.len() - 1] > 1e-2 * gaps[0] {
        return Err(Error::Precondition("pair distances do not decay geometrically".into()));
    }
    let mut prev: Option<DVector<f64>> = None;
    let mut increments = Vec::new();
    for (x, y) in xs.iter().zip(ys) {
        let mut d = (y - x).normalize();
        if let Some(p) = &prev {
            if d.dot(p) < 0.0 {
                d = -d;
            }
            increments.push(angle(&d, p));
        }
        prev = Some(d);
    }
    let last_increment = *increments.last().expect("at least two increments");
    if last_increment >= LIMIT_ANGLE_TOL {
        return Err(Error::NonConvergent(format!(
            "connecting directions still turn by {last_increment:.3e} rad"
        )));
    }
    Ok(LimitEstimate {
        direction: prev.expect("nonempty").iter().copied().collect(),
        increments,
        last_increment,
    })
}

/// Audit of estimated radial directions at `z` and at other zeros.
#[derive(Clone, Debug, Serialize)]
pub struct RadialAuditReport {
    pub case: ZeroCase,
    /// Directions estimated at `z` itself.
    pub vertex_directions: usize,
    /// Largest distance of a unit vertex direction from the predicted cone.
    pub vertex_max_deviation: f64,
    pub vertex_span_dim: usize,
    pub expected_span_dim: usize,
    /// Directions estimated at zeros off the singular set.
    pub offvertex_directions: usize,
    /// Largest distance of a unit direction from the predicted set at its
    /// base point.
    pub offvertex_max_deviation: f64,
    pub skipped: usize,
    pub tol: f64,
    pub pass: bool,
}

/// Newton lands within ~1e-9 of quadratically degenerate zero sets, so the
/// finest offset is kept near 1e-4 of the radius.
const LEVELS: i32 = 12;

/// Sequence `x_j = base` (fixed), `y_j` = zero found by Newton from
/// `base + 2^-j r δ`.
fn sequence_limit(p: &ConformalFieldParams, base: &DVector<f64>, delta: &DVector<f64>, r: f64, first: i32) -> Result<LimitEstimate> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in first..first + LEVELS {
        let start = base + delta * (r * 2f64.powi(-j));
        if let Some((y, _)) = newton_root(p, &start) {
            let gap = (&y - base).norm();
            let last = ys.last().map(|q: &DVector<f64>| (q - base).norm()).unwrap_or(f64::INFINITY);
            if gap > 0.0 && gap < last {
                xs.push(base.clone());
                ys.push(y);
            }
        }
    }
    connecting_limit_estimate(&xs, &ys)
}

/// Unit-vector distance to the predicted direction set inside `H`.
fn deviation(prediction: &ConePrediction, restricted: &MetricForm, hb: &DMatrix<f64>, h: &Subspace, d: &DVector<f64>) -> f64 {
    let off_h = h.distance(d);
    let coords = hb.transpose() * d;
    let inside = match prediction {
        ConePrediction::WholeCone => {
            // Distance to the cone measured by the normalised form value.
            restricted.norm_sq(&coords).abs() / restricted.scale()
        }
        ConePrediction::Hyperplane(s) | ConePrediction::Nullspace(s) => s.distance(&coords),
    };
    off_h.max(inside)
}

/// Estimates radial limit directions at `z` along model directions and at
/// sampled zeros along random directions, and checks them against the null
/// cone of the restricted form.
pub fn radial_direction_audit(
    p: &ConformalFieldParams,
    cls: &PointClassification,
    sample: &ZeroSample,
    count: usize,
    seed: u64,
) -> Result<RadialAuditReport> {
    if cls.case == ZeroCase::I {
        return Err(Error::Precondition("radial audit needs an essential zero (case ii or iii)".into()));
    }
    let n = p.dim();
    let h = &cls.h;
    let hb = h.basis().clone();
    let tol = RankTol::default();
    let semidefinite = forms::is_semidefinite(p.metric(), h, tol)?;
    let expected_span_dim = if semidefinite { cls.v.dim() } else { h.dim() };
    let mut skipped = 0;
    if h.dim() == 0 {
        // Isolated zero: no directions to estimate.
        return Ok(RadialAuditReport {
            case: cls.case,
            vertex_directions: 0,
            vertex_max_deviation: 0.0,
            vertex_span_dim: 0,
            expected_span_dim,
            offvertex_directions: 0,
            offvertex_max_deviation: 0.0,
            skipped,
            tol: LIMIT_ANGLE_TOL,
            pass: true,
        });
    }
    let restricted = MetricForm::new(p.metric().restrict(h))?;

    let mut vertex_dirs: Vec<DVector<f64>> = Vec::new();
    let mut vertex_max_deviation = 0.0_f64;
    {
        let vertex_pred = forms::predicted_radial_directions(&restricted, &DVector::zeros(h.dim()), tol)?;
        let dirs = cls.model.sample(count, 1.0, seed)?;
        let mut rng = seeded_rng(seed, 0x7e);
        for m in dirs {
            let m = m - &cls.z;
            if m.norm() < 1e-3 {
                continue;
            }
            // Start off the cone so Newton has to find it.
            let delta = m.normalize() + random_in_ball(&mut rng, n, 0.2);
            match sequence_limit(p, &cls.z, &delta, 0.5, 1) {
                Ok(est) => {
                    let d = est.direction();
                    vertex_max_deviation = vertex_max_deviation.max(deviation(&vertex_pred, &restricted, &hb, h, &d));
                    vertex_dirs.push(d);
                }
                Err(_) => skipped += 1,
            }
        }
    }
    let vertex_span_dim = if vertex_dirs.is_empty() {
        0
    } else {
        let m = DMatrix::from_columns(&vertex_dirs);
        linalg::rank(&m, RankTol::relative(10.0 * LIMIT_ANGLE_TOL))
    };

    let singular = cls.model.singular_set();
    let mut off_count = 0;
    let mut offvertex_max_deviation = 0.0_f64;
    let mut rng = seeded_rng(seed, 0x0ff);
    for y in sample.points.iter().take(count) {
        let yz = y - &cls.z;
        let far = match &singular {
            Some(v) => v.distance(&yz) > 0.1 * sample.radius,
            None => yz.norm() > 0.1 * sample.radius,
        };
        if !far {
            continue;
        }
        let coords = hb.transpose() * &yz;
        let Ok(pred) = forms::predicted_radial_directions(&restricted, &coords, tol) else {
            skipped += 1;
            continue;
        };
        let delta = random_in_ball(&mut rng, n, 1.0).normalize();
        match sequence_limit(p, y, &delta, 0.1 * sample.radius, 2) {
            Ok(est) => {
                off_count += 1;
                offvertex_max_deviation = offvertex_max_deviation.max(deviation(&pred, &restricted, &hb, h, &est.direction()));
            }
            Err(_) => skipped += 1,
        }
    }
    let pass = vertex_max_deviation <= LIMIT_ANGLE_TOL
        && offvertex_max_deviation <= LIMIT_ANGLE_TOL
        && vertex_span_dim == expected_span_dim;
    Ok(RadialAuditReport {
        case: cls.case,
        vertex_directions: vertex_dirs.len(),
        vertex_max_deviation,
        vertex_span_dim,
        expected_span_dim,
        offvertex_directions: off_count,
        offvertex_max_deviation,
        skipped,
        tol: LIMIT_ANGLE_TOL,
        pass,
    })
}
