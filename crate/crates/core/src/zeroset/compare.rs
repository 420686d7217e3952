//! Two-sided comparison of a numerical zero sample with a model set.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use super::{newton_root, ZeroSample};
use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::model::ZeroModel;

/// Result of comparing zeros with a model in a ball.
#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub sample_size: usize,
    /// Largest distance from a sample zero to the model.
    pub max_sample_distance: f64,
    /// Sample zeros farther than `tol * radius` from the model.
    pub outside_model: Vec<Vec<f64>>,
    pub probes: usize,
    /// Probes whose Newton run converged.
    pub probes_converged: usize,
    /// Largest distance from a model probe to the zero it converged to.
    pub max_probe_distance: f64,
    /// Model probes not within `tol * radius` of a zero.
    pub not_zeros: Vec<Vec<f64>>,
    pub tol: f64,
    pub subset: bool,
    pub superset: bool,
    pub pass: bool,
}

/// `sample ⊆ model` within `tol * radius`, and `model ⊆ Z` checked by
/// running Newton from model points in the ball and requiring the landing
/// zero within `tol * radius`.
pub fn compare_to_model(
    p: &ConformalFieldParams,
    sample: &ZeroSample,
    model: &ZeroModel,
    tol: f64,
    probes: usize,
    seed: u64,
) -> Result<CompareReport> {
    if model.ambient_dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            what: "model",
            expected: p.dim(),
            got: model.ambient_dim(),
        });
    }
    if sample.is_empty() {
        return Err(Error::InsufficientSample("no zeros in the box".into()));
    }
    let radius = sample.radius;
    let thr = tol * radius;
    let dists: Vec<f64> = sample.points.par_iter().map(|x| model.distance(x)).collect();
    let outside_model: Vec<Vec<f64>> = sample
        .points
        .iter()
        .zip(&dists)
        .filter(|(_, d)| **d > thr)
        .map(|(x, _)| x.iter().copied().collect())
        .collect();
    let max_sample_distance = dists.iter().cloned().fold(0.0, f64::max);

    let model_points = model.sample(probes, 0.9 * radius, seed)?;
    let landed: Vec<(DVector<f64>, Option<f64>)> = model_points
        .par_iter()
        .map(|m| (m.clone(), newton_root(p, m).map(|(y, _)| (y - m).norm())))
        .collect();
    let probes_converged = landed.iter().filter(|(_, d)| d.is_some()).count();
    let max_probe_distance = landed
        .iter()
        .map(|(_, d)| d.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let not_zeros: Vec<Vec<f64>> = landed
        .iter()
        .filter(|(_, d)| !matches!(d, Some(dd) if *dd <= thr))
        .map(|(m, _)| m.iter().copied().collect())
        .collect();
    let subset = outside_model.is_empty();
    let superset = not_zeros.is_empty();
    Ok(CompareReport {
        sample_size: sample.len(),
        max_sample_distance,
        outside_model,
        probes: model_points.len(),
        probes_converged,
        max_probe_distance: if model_points.is_empty() { 0.0 } else { max_probe_distance },
        not_zeros,
        tol,
        subset,
        superset,
        pass: subset && superset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_zero;
    use crate::forms::{MetricForm, Subspace};
    use crate::zeroset::find_zeros;

    fn cone_field() -> ConformalFieldParams {
        ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]))
            .unwrap()
            .with_u(DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]))
            .unwrap()
    }

    #[test]
    fn cone_zeros_match_model() {
        let p = cone_field();
        let z = DVector::zeros(4);
        let cls = classify_zero(&p, &z).unwrap();
        let s = find_zeros(&p, &z, 1.0, 400, 5).unwrap();
        let rep = compare_to_model(&p, &s, &cls.model, 1e-6, 100, 9).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn wrong_models_fail_the_right_side() {
        let p = cone_field();
        let z = DVector::zeros(4);
        let s = find_zeros(&p, &z, 1.0, 400, 5).unwrap();
        // All of H: contains the zeros but is not a zero set.
        let e = |i: usize| {
            let mut v = DVector::zeros(4);
            v[i] = 1.0;
            v
        };
        let bigger = ZeroModel::Subspace {
            base: z.clone(),
            space: Subspace::span(4, &[e(1), e(2), e(3)]).unwrap(),
        };
        let rep = compare_to_model(&p, &s, &bigger, 1e-6, 100, 9).unwrap();
        assert!(rep.subset && !rep.superset);
        // A single null line: zeros, but misses most of the cone.
        let smaller = ZeroModel::Subspace {
            base: z,
            space: Subspace::span(4, &[e(1) + e(2)]).unwrap(),
        };
        let rep = compare_to_model(&p, &s, &smaller, 1e-6, 100, 9).unwrap();
        assert!(!rep.subset && rep.superset);
    }
}
