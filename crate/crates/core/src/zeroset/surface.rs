//! Conformal fields on the plane `(R^2, 2 dx1 dx2)`: `v = (P(x1), Q(x2))` is
//! conformal for any polynomials, so the zero set can be any finite grid.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, RankTol};
use crate::tolerances::DEDUPE_FACTOR;

/// `v = (Π (x1 - ξ_i), Π (x2 - ξ'_j))` on the split plane.
#[derive(Clone, Debug)]
pub struct SurfaceField {
    pub xi: Vec<f64>,
    pub xi_prime: Vec<f64>,
}

fn poly(roots: &[f64], s: Complex64) -> Complex64 {
    roots.iter().fold(Complex64::new(1.0, 0.0), |acc, r| acc * (s - r))
}

const STEP: f64 = 1e-20;

impl SurfaceField {
    pub fn new(xi: Vec<f64>, xi_prime: Vec<f64>) -> Result<Self> {
        for (name, list) in [("xi", &xi), ("xi'", &xi_prime)] {
            if list.is_empty() {
                return Err(Error::InvalidArgument(format!("{name} must be nonempty")));
            }
            if list.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("surface roots"));
            }
            let mut sorted = list.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("{name} has duplicate entries")));
            }
        }
        Ok(Self { xi, xi_prime })
    }

    /// The metric `2 dx1 dx2`.
    pub fn gram() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn evaluate(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![
            poly(&self.xi, Complex64::new(x[0], 0.0)).re,
            poly(&self.xi_prime, Complex64::new(x[1], 0.0)).re,
        ])
    }

    /// Jacobian by complex-step differentiation.
    pub fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(2, 2);
        for col in 0..2 {
            let z = |k: usize| Complex64::new(x[k], if k == col { STEP } else { 0.0 });
            j[(0, col)] = poly(&self.xi, z(0)).im / STEP;
            j[(1, col)] = poly(&self.xi_prime, z(1)).im / STEP;
        }
        j
    }

    /// `φ = ∂1 v^1 + ∂2 v^2`.
    pub fn conformal_factor(&self, x: &DVector<f64>) -> f64 {
        let j = self.jacobian(x);
        j[(0, 0)] + j[(1, 1)]
    }

    /// `max |M^T G + G M - φ G|` with `M` the Jacobian.
    pub fn conformality_residual(&self, x: &DVector<f64>) -> f64 {
        let m = self.jacobian(x);
        let g = Self::gram();
        let phi = self.conformal_factor(x);
        linalg::max_abs(&(m.transpose() * &g + &g * &m - g * phi))
    }

    fn scale(&self) -> f64 {
        self.xi.iter().chain(&self.xi_prime).fold(1.0_f64, |a, x| a.max(x.abs()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub found: Vec<[f64; 2]>,
    pub expected: usize,
    pub matched: usize,
    pub max_match_error: f64,
    pub max_conformality_residual: f64,
    pub pass: bool,
}

/// Newton from a `grid x grid` lattice of starts over the box spanned by the
/// roots (padded by one), compared with the product grid `ξ × ξ'`.
pub fn surface_counterexample(xi: &[f64], xi_prime: &[f64], grid: usize) -> Result<SurfaceReport> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2, got {grid}")));
    }
    let f = SurfaceField::new(xi.to_vec(), xi_prime.to_vec())?;
    let bounds = |l: &[f64]| {
        let lo = l.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
        let hi = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
        (lo, hi)
    };
    let (a0, a1) = bounds(xi);
    let (b0, b1) = bounds(xi_prime);
    let lerp = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (grid - 1) as f64;
    let scale = f.scale();
    let dedupe = DEDUPE_FACTOR * scale;
    let mut found: Vec<DVector<f64>> = Vec::new();
    let mut max_conformality_residual = 0.0_f64;
    for i in 0..grid {
        for k in 0..grid {
            let mut x = DVector::from_vec(vec![lerp(a0, a1, i), lerp(b0, b1, k)]);
            max_conformality_residual = max_conformality_residual.max(f.conformality_residual(&x));
            for _ in 0..100 {
                let v = f.evaluate(&x);
                let step = linalg::pinv_solve(&f.jacobian(&x), &v, RankTol::default());
                x -= &step;
                if step.norm() <= 1e-15 * (1.0 + x.norm()) {
                    break;
                }
            }
            let converged = f.evaluate(&x).norm() <= 1e-10 * scale.powi(xi.len().max(xi_prime.len()) as i32);
            if converged && x.iter().all(|c| c.is_finite()) && found.iter().all(|q| (q - &x).norm() >= dedupe) {
                found.push(x);
            }
        }
    }
    let mut matched = 0;
    let mut max_match_error = 0.0_f64;
    for a in xi {
        for b in xi_prime {
            let e = DVector::from_vec(vec![*a, *b]);
            let best = found.iter().map(|q| (q - &e).norm()).fold(f64::INFINITY, f64::min);
            if best <= 1e-8 * scale {
                matched += 1;
                max_match_error = max_match_error.max(best);
            }
        }
    }
    let expected = xi.len() * xi_prime.len();
    let pass = matched == expected && found.len() == expected && max_conformality_residual <= 1e-12 * scale;
    Ok(SurfaceReport {
        found: found.iter().map(|x| [x[0], x[1]]).collect(),
        expected,
        matched,
        max_match_error,
        max_conformality_residual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_grid_of_zeros() {
        let rep = surface_counterexample(&[-1.0, 0.5, 2.0], &[0.0, 1.5], 12).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.found.len(), 6);
    }

    #[test]
    fn conformal_factor_matches_derivatives() {
        let f = SurfaceField::new(vec![1.0, 2.0], vec![3.0]).unwrap();
        let x = DVector::from_vec(vec![0.5, -1.0]);
        // P' = 2 x1 - 3, Q' = 1.
        assert!((f.conformal_factor(&x) - (2.0 * 0.5 - 3.0 + 1.0)).abs() < 1e-14);
        assert_eq!(f.conformality_residual(&x), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(surface_counterexample(&[], &[1.0], 4).is_err());
        assert!(surface_counterexample(&[1.0, 1.0], &[1.0], 4).is_err());
        assert!(surface_counterexample(&[f64::NAN], &[1.0], 4).is_err());
        assert!(surface_counterexample(&[1.0], &[1.0], 1).is_err());
    }
}
