//! Singular points by multi-scale local fits, and codimension parity.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use super::local::local_fit;
use super::ZeroSample;
use crate::classify::{PointClassification, ZeroCase};
use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::tolerances::SINGULAR_VARIANCE_RATIO;

const LOCAL_STARTS: usize = 40;
/// Coarsest local scale is `radius / 4`; scales halve down to
/// `FLOOR_FACTOR * radius`.
const FIRST_LEVEL: i32 = 2;
const FLOOR_FACTOR: f64 = 1e-5;
/// Scale used for the regular-dimension vote.
const VOTE_LEVEL: i32 = 4;

/// Outcome of the singular-set check.
#[derive(Clone, Debug, Serialize)]
pub struct SingularReport {
    pub case: ZeroCase,
    pub regular_dim: usize,
    pub tested: usize,
    /// Whether the base zero `z` was flagged.
    pub base_flagged: bool,
    /// Flags aligned with the sample points.
    pub sample_flags: Vec<bool>,
    pub flagged_points: Vec<Vec<f64>>,
    /// Points farther than the vertex threshold from `z + (H ∩ H^⊥)`.
    pub off_vertex_tested: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    /// Each flagged point is approached by points that pass the smooth-fit
    /// test.
    pub limits_of_regular: bool,
    pub vertex_threshold: f64,
    pub pass: bool,
}

pub(crate) struct DimensionVote {
    pub dim: usize,
    pub share: f64,
}

/// Mode of the local dimension over `points` at scale `radius / 16`.
pub(crate) fn regular_dimension(p: &ConformalFieldParams, points: &[DVector<f64>], radius: f64, seed: u64) -> DimensionVote {
    let scale = radius * 2f64.powi(-VOTE_LEVEL);
    let dims: Vec<usize> = points
        .par_iter()
        .enumerate()
        .map(|(i, x)| local_fit(p, x, scale, LOCAL_STARTS, seed, (i as u64) << 8).dimension())
        .collect();
    let n = p.dim();
    let mut counts = vec![0usize; n + 1];
    for d in &dims {
        counts[*d] += 1;
    }
    let (dim, best) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(d, c)| (d, *c))
        .unwrap_or((0, 0));
    DimensionVote {
        dim,
        share: if dims.is_empty() { 0.0 } else { best as f64 / dims.len() as f64 },
    }
}

/// True when the local fit around `x` keeps an unstable gap after the
/// regular dimension at every scale down to the floor.
fn is_singular(p: &ConformalFieldParams, x: &DVector<f64>, d: usize, radius: f64, seed: u64, index: u64) -> bool {
    let floor = FLOOR_FACTOR * radius;
    let mut level = FIRST_LEVEL;
    loop {
        let scale = radius * 2f64.powi(-level);
        if scale < floor {
            return true;
        }
        let fit = local_fit(p, x, scale, LOCAL_STARTS, seed, (index << 8) | level as u64);
        if fit.gap_ratio(d) <= SINGULAR_VARIANCE_RATIO && fit.dimension() <= d {
            return false;
        }
        level += 1;
    }
}

/// A flagged point should be a limit of points that pass the smooth-fit
/// test: at shrinking scales pick a local zero at distance in `[r/4, r]` and
/// fit around it at a quarter of that distance.
fn limit_of_regular(p: &ConformalFieldParams, c: &DVector<f64>, d: usize, radius: f64, seed: u64, index: u64) -> bool {
    [6, 9, 12].iter().all(|&level| {
        let r = radius * 2f64.powi(-level);
        let fit = local_fit(p, c, r, LOCAL_STARTS, seed, (index << 8) | 0x80 | level as u64);
        let witness = fit
            .points
            .iter()
            .map(|y| (y, (y - c).norm()))
            .filter(|(_, dist)| *dist >= r / 4.0)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match witness {
            Some((y, dist)) => {
                let around = local_fit(p, y, dist / 4.0, LOCAL_STARTS, seed, (index << 8) | 0xc0 | level as u64);
                around.gap_ratio(d) <= SINGULAR_VARIANCE_RATIO
            }
            None => false,
        }
    })
}

/// Flags sample points (and `z`) whose local zero set has no stable tangent
/// fit and compares the flags with the model singular set `z + (H ∩ H^⊥)`.
pub fn singular_set_check(
    p: &ConformalFieldParams,
    sample: &ZeroSample,
    cls: &PointClassification,
    tol: f64,
    seed: u64,
) -> Result<SingularReport> {
    if cls.case == ZeroCase::I {
        return Err(Error::Precondition("singular-set check needs an essential zero (case ii or iii)".into()));
    }
    let radius = sample.radius;
    let mut points = vec![cls.z.clone()];
    points.extend(sample.points.iter().cloned());
    let vote = regular_dimension(p, &points, radius, seed);
    let d = vote.dim;
    let flags: Vec<bool> = points
        .par_iter()
        .enumerate()
        .map(|(i, x)| is_singular(p, x, d, radius, seed ^ 0x51, i as u64))
        .collect();
    let singular_model = cls.model.singular_set();
    let vertex_threshold = (tol * radius).max(4.0 * FLOOR_FACTOR * radius);
    let dist_to_vertex = |x: &DVector<f64>| singular_model.as_ref().map(|v| v.distance(&(x - &cls.z)));
    let mut false_positives = 0;
    let mut false_negatives = 0;
    let mut off_vertex_tested = 0;
    let mut flagged_points = Vec::new();
    for (x, &flag) in points.iter().zip(&flags) {
        let dist = dist_to_vertex(x);
        let near_vertex = matches!(dist, Some(dd) if dd <= vertex_threshold);
        if !near_vertex {
            off_vertex_tested += 1;
        }
        if flag {
            flagged_points.push(x.iter().copied().collect());
            if !near_vertex {
                false_positives += 1;
            }
        } else if matches!(dist, Some(dd) if dd <= tol * radius) {
            false_negatives += 1;
        }
    }
    let limits_of_regular = points
        .iter()
        .zip(&flags)
        .enumerate()
        .filter(|(_, (_, f))| **f)
        .collect::<Vec<_>>()
        .par_iter()
        .all(|(i, (x, _))| limit_of_regular(p, x, d, radius, seed ^ 0x77, *i as u64));
    let pass = false_positives == 0 && false_negatives == 0 && limits_of_regular;
    Ok(SingularReport {
        case: cls.case,
        regular_dim: d,
        tested: points.len(),
        base_flagged: flags[0],
        sample_flags: flags[1..].to_vec(),
        flagged_points,
        off_vertex_tested,
        false_positives,
        false_negatives,
        limits_of_regular,
        vertex_threshold,
        pass,
    })
}

/// Outcome of the codimension-parity check.
#[derive(Clone, Debug, Serialize)]
pub struct ParityReport {
    pub estimated_dim: usize,
    pub estimated_codim: usize,
    pub analytic_codim: usize,
    pub vote_share: f64,
    pub even: bool,
    /// The model is an affine null subspace, so odd codimension is allowed.
    pub exempt: bool,
    pub null: bool,
    pub totally_geodesic: bool,
    pub exact_geodesic: bool,
    pub pass: bool,
}

/// Estimates the component dimension from local fits and checks that its
/// codimension is even, unless the model is an affine null totally geodesic
/// subspace.
pub fn codimension_parity_check(
    p: &ConformalFieldParams,
    cls: &PointClassification,
    sample: &ZeroSample,
    seed: u64,
) -> Result<ParityReport> {
    let n = p.dim();
    let mut points = vec![cls.z.clone()];
    points.extend(sample.points.iter().cloned());
    // Keep points away from the model singular set.
    if let Some(v) = cls.model.singular_set() {
        let thr = 1e-2 * sample.radius;
        points.retain(|x| v.distance(&(x - &cls.z)) > thr);
    }
    if points.is_empty() {
        return Err(Error::InsufficientSample("no nonsingular zeros to estimate a dimension".into()));
    }
    let vote = regular_dimension(p, &points, sample.radius, seed);
    if vote.share < 0.5 {
        return Err(Error::NonConvergent(format!(
            "unstable dimension estimate (mode share {:.2})",
            vote.share
        )));
    }
    let estimated_codim = n - vote.dim;
    let analytic_codim = cls.model.analytic_codim();
    let linear = cls.model.linear_part();
    let null = linear
        .as_ref()
        .map(|s| crate::linalg::max_abs(&p.metric().restrict(s)) <= 1e-10 * p.metric().scale())
        .unwrap_or(false);
    let exempt = null;
    // Radial-line containment: lines from z through sample points stay in Z.
    let totally_geodesic = exempt
        && sample.points.iter().take(64).all(|y| {
            [-1.0, -0.5, 0.5, 1.5, 2.0].iter().all(|&t| {
                let x = &cls.z + (y - &cls.z) * t;
                p.evaluate(&x).norm() <= p.zero_tol(&x)
            })
        });
    let exact_geodesic = exempt && exact_line_containment(p, cls, linear.as_ref());
    let even = estimated_codim.is_multiple_of(2);
    let pass = estimated_codim == analytic_codim && (even || (exempt && totally_geodesic));
    Ok(ParityReport {
        estimated_dim: vote.dim,
        estimated_codim,
        analytic_codim,
        vote_share: vote.share,
        even,
        exempt,
        null,
        totally_geodesic,
        exact_geodesic,
        pass,
    })
}

/// Exact containment of integer points `z + k b` for an integer basis `b`
/// of the model subspace, when every input is integral.
fn exact_line_containment(
    p: &ConformalFieldParams,
    cls: &PointClassification,
    linear: Option<&crate::forms::Subspace>,
) -> bool {
    use crate::exact::RationalMatrix;
    let (Some(ex), Some(space)) = (p.exact(), linear) else {
        return false;
    };
    // Scale each basis vector to integers when its direction is rational
    // with small denominators (coordinate-aligned bases are the common case).
    space.basis_vectors().iter().all(|b| {
        let m = b.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        if m == 0.0 {
            return true;
        }
        let scaled = b / m;
        if scaled.iter().any(|x| (x - x.round()).abs() > 1e-12) {
            return false;
        }
        let b_int = scaled.map(|x| x.round());
        (-3..=3).all(|k| {
            let x = &cls.z + &b_int * k as f64;
            RationalMatrix::column_from_integral(&x).map(|xq| ex.is_zero_at(&xq)).unwrap_or(false)
        })
    })
}
