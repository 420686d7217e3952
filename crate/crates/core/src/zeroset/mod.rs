//! Numerical zero sets: sampling, comparison with the predicted model,
//! singular points, codimension, curvature, limits and components.

mod compare;
mod components;
mod curvature;
mod limits;
mod local;
pub mod newton;
mod singular;
mod surface;

pub use compare::{compare_to_model, CompareReport};
pub use components::{divergence_constancy, ComponentReport, DivergenceReport};
pub use curvature::{
    second_fundamental_form, umbilicity_check, ControlQuadric, ImplicitSet, SecondFundamentalForm,
    UmbilicityReport,
};
pub use limits::{connecting_limit_estimate, radial_direction_audit, LimitEstimate, RadialAuditReport};
pub use local::{local_fit, LocalFit};
pub use singular::{codimension_parity_check, singular_set_check, ParityReport, SingularReport};
pub use surface::{surface_counterexample, SurfaceField, SurfaceReport};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::tolerances::DEDUPE_FACTOR;

/// Zeros found in the box `center ± radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSample {
    pub points: Vec<DVector<f64>>,
    pub residuals: Vec<f64>,
    pub seeds_used: usize,
    pub center: DVector<f64>,
    pub radius: f64,
}

impl ZeroSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dedupe_radius(&self) -> f64 {
        DEDUPE_FACTOR * self.radius
    }
}

/// Random start in the box for seed index `index`; each index reads its own
/// stream so results do not depend on scheduling.
pub(crate) fn seeded_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn in_box(x: &DVector<f64>, center: &DVector<f64>, radius: f64) -> bool {
    (x - center).amax() <= radius
}

/// Newton from `n_seeds` uniform starts in the box; keeps converged zeros in
/// the box, deduplicated at `1e-6 * radius`. Deterministic in `seed`.
pub fn find_zeros(
    p: &ConformalFieldParams,
    center: &DVector<f64>,
    radius: f64,
    n_seeds: usize,
    seed: u64,
) -> Result<ZeroSample> {
    if center.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            what: "box center",
            expected: p.dim(),
            got: center.len(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    if n_seeds == 0 {
        return Err(Error::InvalidArgument("n_seeds must be at least 1".into()));
    }
    let n = p.dim();
    let found: Vec<Option<(DVector<f64>, f64)>> = (0..n_seeds)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(seed, i as u64);
            let start = center + DVector::from_fn(n, |_, _| radius * rng.random_range(-1.0..=1.0));
            let res = newton_root(p, &start);
            res.filter(|(x, _)| in_box(x, center, radius))
        })
        .collect();
    let mut points: Vec<DVector<f64>> = Vec::new();
    let mut residuals = Vec::new();
    let dedupe = DEDUPE_FACTOR * radius;
    for (x, r) in found.into_iter().flatten() {
        if points.iter().all(|q| (q - &x).norm() >= dedupe) {
            points.push(x);
            residuals.push(r);
        }
    }
    Ok(ZeroSample {
        points,
        residuals,
        seeds_used: n_seeds,
        center: center.clone(),
        radius,
    })
}

/// Newton from `x0`, accepted when the post-hoc residual meets the zero
/// tolerance.
pub(crate) fn newton_root(p: &ConformalFieldParams, x0: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let res = newton::newton_zero(p, x0);
    // Re-check with the evaluator rather than trusting the solver.
    let r = p.evaluate(&res.x).norm();
    (r.is_finite() && r <= p.zero_tol(&res.x)).then_some((res.x, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::MetricForm;
    use nalgebra::DMatrix;

    #[test]
    fn dilation_has_single_zero() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, 1.0, 1.0]))
            .unwrap()
            .with_c(1.0)
            .unwrap();
        let s = find_zeros(&p, &DVector::zeros(3), 1.0, 50, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.points[0].norm() < 1e-12);
    }

    #[test]
    fn killing_zeros_lie_on_kernel_line() {
        let mut sk = DMatrix::zeros(3, 3);
        sk[(1, 2)] = 1.0;
        sk[(2, 1)] = -1.0;
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, 1.0, 1.0]))
            .unwrap()
            .with_s(sk)
            .unwrap();
        let s = find_zeros(&p, &DVector::zeros(3), 1.0, 200, 2).unwrap();
        assert!(s.len() > 100);
        for x in &s.points {
            assert!(x.rows(1, 2).norm() <= 1e-8);
        }
    }

    #[test]
    fn deterministic_and_independent_of_thread_count() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]))
            .unwrap()
            .with_u(DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]))
            .unwrap();
        let a = find_zeros(&p, &DVector::zeros(4), 1.0, 64, 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| find_zeros(&p, &DVector::zeros(4), 1.0, 64, 11).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn no_zeros_in_box_is_empty() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[1.0, 1.0, 1.0]))
            .unwrap()
            .with_w(DVector::from_vec(vec![1.0, 2.0, 3.0]))
            .unwrap();
        let s = find_zeros(&p, &DVector::zeros(3), 1.0, 20, 3).unwrap();
        assert!(s.is_empty());
    }
}
