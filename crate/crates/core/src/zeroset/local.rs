//! Local principal-component fits of the zero set around a point.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{newton_root, seeded_rng};
use crate::field::ConformalFieldParams;
use crate::linalg;

/// Spectrum of the local covariance of zeros within a ball.
#[derive(Clone, Debug)]
pub struct LocalFit {
    pub scale: f64,
    /// Covariance eigenvalues in decreasing order, divided by `scale^2`.
    pub eigenvalues: Vec<f64>,
    /// Matching unit eigenvectors as columns.
    pub directions: DMatrix<f64>,
    pub count: usize,
    pub points: Vec<DVector<f64>>,
}

/// Relative share of the leading eigenvalue below which a direction is
/// treated as noise when counting local dimension.
const DIM_SHARE: f64 = 0.05;

impl LocalFit {
    /// Number of significant directions.
    pub fn dimension(&self) -> usize {
        let lead = self.eigenvalues.first().copied().unwrap_or(0.0);
        let floor = 1e-12;
        self.eigenvalues
            .iter()
            .filter(|&&l| l > floor && l >= DIM_SHARE * lead)
            .count()
    }

    /// `λ_{d+1} / λ_d` (zero when undefined).
    pub fn gap_ratio(&self, d: usize) -> f64 {
        if d == 0 || d >= self.eigenvalues.len() {
            return 0.0;
        }
        let ld = self.eigenvalues[d - 1];
        if ld <= 0.0 {
            return 0.0;
        }
        self.eigenvalues[d] / ld
    }

    /// Span of the leading `d` directions.
    pub fn tangent(&self, d: usize) -> DMatrix<f64> {
        self.directions.columns(0, d.min(self.directions.ncols())).into_owned()
    }
}

pub(crate) fn random_in_ball(rng: &mut ChaCha8Rng, n: usize, r: f64) -> DVector<f64> {
    loop {
        let x = DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
        let norm = x.norm();
        if norm <= 1.0 && norm > 0.0 {
            return x * r;
        }
    }
}

/// Resamples zeros in the ball of radius `scale` around `x` from `starts`
/// Newton runs and fits their covariance.
pub fn local_fit(p: &ConformalFieldParams, x: &DVector<f64>, scale: f64, starts: usize, seed: u64, stream: u64) -> LocalFit {
    let n = p.dim();
    let mut rng = seeded_rng(seed, stream);
    let mut points = vec![x.clone()];
    for _ in 0..starts {
        let start = x + random_in_ball(&mut rng, n, scale);
        if let Some((y, _)) = newton_root(p, &start) {
            if (&y - x).norm() <= scale {
                points.push(y);
            }
        }
    }
    fit_points(points, scale)
}

pub(crate) fn fit_points(points: Vec<DVector<f64>>, scale: f64) -> LocalFit {
    let n = points[0].len();
    let count = points.len();
    let mean = points.iter().fold(DVector::zeros(n), |a, b| a + b) / count as f64;
    let mut cov = DMatrix::zeros(n, n);
    for q in &points {
        let d = q - &mean;
        cov += &d * d.transpose();
    }
    cov /= count as f64 * scale * scale;
    let (vals, vecs) = linalg::sym_eigen(&cov);
    // Decreasing order.
    let eigenvalues: Vec<f64> = vals.iter().rev().map(|l| l.max(0.0)).collect();
    let directions = DMatrix::from_fn(n, n, |r, c| vecs[(r, n - 1 - c)]);
    LocalFit {
        scale,
        eigenvalues,
        directions,
        count,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::MetricForm;

    #[test]
    fn smooth_cone_point_has_dimension_two() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]))
            .unwrap()
            .with_u(DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]))
            .unwrap();
        let y = DVector::from_vec(vec![0.0, 0.5, 0.5, 0.0]);
        let fit = local_fit(&p, &y, 0.05, 48, 1, 0);
        assert_eq!(fit.dimension(), 2);
        assert!(fit.gap_ratio(2) < 0.1);
        let vertex = local_fit(&p, &DVector::zeros(4), 0.05, 48, 1, 1);
        assert!(vertex.gap_ratio(2) > 0.5, "{:?}", vertex.eigenvalues);
    }
}
