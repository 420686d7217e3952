//! Predicted local zero sets: affine subspaces and null cones inside an
//! affine copy of a subspace `H`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::forms::{self, MetricForm, Subspace};
use crate::linalg::{self, RankTol};

/// Predicted zero set near a zero `z`.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroModel {
    /// `z + E`.
    Subspace { base: DVector<f64>, space: Subspace },
    /// `{ z + h : h ∈ H, <h,h> = 0 }`.
    ConeInH {
        base: DVector<f64>,
        h: Subspace,
        metric: MetricForm,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Subspace,
    ConeInH,
}

/// The restricted form diagonalised in a Euclidean-orthonormal eigenbasis of
/// `H`: the cone is `Σ λ_i b_i^2 = 0` in eigen-coordinates `b`.
struct ConeFrame {
    basis: DMatrix<f64>,
    lambda: Vec<f64>,
}

impl ConeFrame {
    fn new(h: &Subspace, metric: &MetricForm) -> Self {
        let restricted = metric.restrict(h);
        let (vals, vecs) = linalg::sym_eigen(&restricted);
        let lmax = vals.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
        let tol = RankTol::default();
        let lambda = vals
            .into_iter()
            .map(|l| if tol.is_zero(l.abs(), lmax) { 0.0 } else { l })
            .collect();
        Self {
            basis: h.basis() * vecs,
            lambda,
        }
    }

    fn coords(&self, y: &DVector<f64>) -> DVector<f64> {
        self.basis.transpose() * y
    }

    fn point(&self, b: &DVector<f64>) -> DVector<f64> {
        &self.basis * b
    }

    fn quad(&self, b: &DVector<f64>) -> f64 {
        linalg::compensated_sum(self.lambda.iter().zip(b.iter()).map(|(l, x)| l * x * x))
    }

    /// Nearest cone point to `p` (eigen-coordinates) in the Euclidean norm.
    fn nearest(&self, p: &DVector<f64>) -> DVector<f64> {
        let k = p.len();
        let has_pos = self.lambda.iter().any(|&l| l > 0.0);
        let has_neg = self.lambda.iter().any(|&l| l < 0.0);
        if !(has_pos && has_neg) {
            // Semidefinite: the cone is the nullspace of the restriction.
            return DVector::from_fn(k, |i, _| if self.lambda[i] == 0.0 { p[i] } else { 0.0 });
        }
        if self.quad(p) == 0.0 {
            return p.clone();
        }
        let lmax = self.lambda.iter().cloned().fold(f64::MIN, f64::max);
        let lmin = self.lambda.iter().cloned().fold(f64::MAX, f64::min);
        let mut candidates = vec![DVector::zeros(k)];
        // Stationary points b_i = p_i / (1 + μ λ_i) with Σ λ_i b_i^2 = 0; the
        // constraint is strictly decreasing in μ on (-1/λ_max, -1/λ_min).
        let at = |mu: f64| DVector::from_fn(k, |i, _| p[i] / (1.0 + mu * self.lambda[i]));
        let f = |mu: f64| self.quad(&at(mu));
        let (mut lo, mut hi) = (-1.0 / lmax, -1.0 / lmin);
        let width = hi - lo;
        let (a, b) = (lo + width * 1e-15, hi - width * 1e-15);
        if f(a) > 0.0 && f(b) < 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mut sol = at(0.5 * (lo + hi));
            self.snap(&mut sol);
            candidates.push(sol);
        }
        // Boundary solutions: when p has no component along the extreme
        // eigenspace, the multiplier sits at the pole and that component is
        // free.
        for (mu, extreme) in [(-1.0 / lmax, lmax), (-1.0 / lmin, lmin)] {
            let idx: Vec<usize> = (0..k).filter(|&i| self.lambda[i] == extreme).collect();
            let mut b = DVector::zeros(k);
            for i in 0..k {
                if !idx.contains(&i) {
                    b[i] = p[i] / (1.0 + mu * self.lambda[i]);
                }
            }
            let need = -self.quad(&b) / extreme;
            if need >= 0.0 {
                let along: f64 = idx.iter().map(|&i| p[i] * p[i]).sum::<f64>().sqrt();
                let len = need.sqrt();
                if along > 0.0 {
                    for &i in &idx {
                        b[i] = p[i] / along * len;
                    }
                } else {
                    b[idx[0]] = len;
                }
                candidates.push(b);
            }
        }
        candidates
            .into_iter()
            .min_by(|x, y| (x - p).norm().total_cmp(&(y - p).norm()))
            .expect("vertex candidate is always present")
    }

    /// Rescale the positive block so the point lies exactly on the cone.
    fn snap(&self, b: &mut DVector<f64>) {
        let pos: f64 = self.lambda.iter().zip(b.iter()).filter(|(l, _)| **l > 0.0).map(|(l, x)| l * x * x).sum();
        let neg: f64 = -self.lambda.iter().zip(b.iter()).filter(|(l, _)| **l < 0.0).map(|(l, x)| l * x * x).sum::<f64>();
        if pos > 0.0 && neg > 0.0 {
            let r = (neg / pos).sqrt().sqrt();
            for (i, l) in self.lambda.iter().enumerate() {
                if *l > 0.0 {
                    b[i] *= r;
                } else if *l < 0.0 {
                    b[i] /= r;
                }
            }
        }
    }
}

impl ZeroModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ZeroModel::Subspace { .. } => ModelKind::Subspace,
            ZeroModel::ConeInH { .. } => ModelKind::ConeInH,
        }
    }

    pub fn base(&self) -> &DVector<f64> {
        match self {
            ZeroModel::Subspace { base, .. } | ZeroModel::ConeInH { base, .. } => base,
        }
    }

    /// The linear space carrying the model (`E` or `H`).
    pub fn carrier(&self) -> &Subspace {
        match self {
            ZeroModel::Subspace { space, .. } => space,
            ZeroModel::ConeInH { h, .. } => h,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.base().len()
    }

    /// True when the restriction of the metric to `H` is semidefinite, so the
    /// cone is the linear space `H ∩ H^⊥`.
    pub fn is_linear(&self) -> bool {
        match self {
            ZeroModel::Subspace { .. } => true,
            ZeroModel::ConeInH { h, metric, .. } => {
                forms::is_semidefinite(metric, h, RankTol::default()).expect("model dimensions agree")
            }
        }
    }

    /// The linear part of the model when it is a subspace.
    pub fn linear_part(&self) -> Option<Subspace> {
        match self {
            ZeroModel::Subspace { space, .. } => Some(space.clone()),
            ZeroModel::ConeInH { h, metric, .. } => {
                if self.is_linear() {
                    Some(forms::restricted_nullspace(metric, h, RankTol::default()).expect("model dimensions agree"))
                } else {
                    None
                }
            }
        }
    }

    /// Dimension of the model at its nonsingular points.
    pub fn analytic_dim(&self) -> usize {
        match self.linear_part() {
            Some(s) => s.dim(),
            None => self.carrier().dim() - 1,
        }
    }

    pub fn analytic_codim(&self) -> usize {
        self.ambient_dim() - self.analytic_dim()
    }

    /// Singular set `z + (H ∩ H^⊥)` of an indefinite cone model; `None` when
    /// the model is smooth.
    pub fn singular_set(&self) -> Option<Subspace> {
        match self {
            ZeroModel::ConeInH { h, metric, .. } if !self.is_linear() => {
                Some(forms::restricted_nullspace(metric, h, RankTol::default()).expect("model dimensions agree"))
            }
            _ => None,
        }
    }

    /// Nearest model point to `x` (Euclidean).
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        let base = self.base();
        let y = x - base;
        match self {
            ZeroModel::Subspace { space, .. } => base + space.project(&y),
            ZeroModel::ConeInH { h, metric, .. } => {
                let frame = ConeFrame::new(h, metric);
                let b = frame.nearest(&frame.coords(&y));
                base + frame.point(&b)
            }
        }
    }

    /// Euclidean distance from `x` to the model set.
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        (x - self.project(x)).norm()
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// Membership predicate evaluated directly (not through projection).
    pub fn satisfies_predicate(&self, x: &DVector<f64>, tol: f64) -> bool {
        let y = x - self.base();
        match self {
            ZeroModel::Subspace { space, .. } => space.distance(&y) <= tol,
            ZeroModel::ConeInH { h, metric, .. } => {
                h.distance(&y) <= tol && metric.norm_sq(&y).abs() <= tol * metric.scale() * (1.0 + y.norm())
            }
        }
    }

    /// Deterministic model points within Euclidean distance `radius` of the
    /// base point.
    pub fn sample(&self, count: usize, radius: f64, seed: u64) -> Result<Vec<DVector<f64>>> {
        let base = self.base();
        match self {
            ZeroModel::Subspace { space, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..count)
                    .map(|_| {
                        let mut y = DVector::zeros(base.len());
                        for b in space.basis_vectors() {
                            y.axpy(rng.random_range(-1.0..1.0), &b, 1.0);
                        }
                        let norm = y.norm();
                        if norm > 0.0 {
                            y *= radius * rng.random_range(0.05..=1.0) / norm;
                        }
                        base + y
                    })
                    .collect())
            }
            ZeroModel::ConeInH { h, metric, .. } => {
                let pts = forms::sample_null_cone(metric, h, count, radius, seed)?;
                Ok(pts.into_iter().map(|y| base + y).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    fn cone22() -> ZeroModel {
        let metric = MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]);
        let h = Subspace::span(4, &[e(4, 1), e(4, 2), e(4, 3)]).unwrap();
        ZeroModel::ConeInH {
            base: DVector::zeros(4),
            h,
            metric,
        }
    }

    #[test]
    fn cone_dimensions() {
        let m = cone22();
        assert_eq!(m.analytic_dim(), 2);
        assert_eq!(m.analytic_codim(), 2);
        assert_eq!(m.singular_set().unwrap().dim(), 0);
        assert!(!m.is_linear());
    }

    #[test]
    fn distance_to_light_cone_matches_closed_form() {
        // In H = span(e2,e3,e4) with form diag(-1,1,1) the cone is
        // |x2| = |(x3,x4)|; distance of (a, r) is |a - r|/sqrt(2) in the
        // meridian plane.
        let m = cone22();
        for (a, r) in [(1.0, 0.0), (0.3, 0.7), (-2.0, 0.5), (1.0, 1.0)] {
            let x = DVector::from_vec(vec![0.0, a, r, 0.0]);
            let expected = (f64::abs(a) - r).abs() / 2f64.sqrt();
            assert!((m.distance(&x) - expected).abs() < 1e-12, "({a},{r})");
        }
        // Off H the normal component adds in quadrature.
        let x = DVector::from_vec(vec![0.5, 1.0, 1.0, 0.0]);
        assert!((m.distance(&x) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn subspace_model() {
        let m = ZeroModel::Subspace {
            base: e(3, 2),
            space: Subspace::span(3, &[e(3, 0)]).unwrap(),
        };
        assert!((m.distance(&DVector::from_vec(vec![5.0, 1.0, 1.0])) - 1.0).abs() < 1e-15);
        assert_eq!(m.analytic_dim(), 1);
        assert!(m.singular_set().is_none());
        for p in m.sample(20, 1.0, 3).unwrap() {
            assert!(m.satisfies_predicate(&p, 1e-14));
        }
    }

    #[test]
    fn semidefinite_cone_is_its_nullspace() {
        let metric = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
        let h = Subspace::span(3, &[e(3, 0) + e(3, 1)]).unwrap();
        let m = ZeroModel::ConeInH {
            base: DVector::zeros(3),
            h,
            metric,
        };
        assert!(m.is_linear());
        assert_eq!(m.analytic_dim(), 1);
        assert!(m.singular_set().is_none());
        assert!(m.distance(&DVector::from_vec(vec![2.0, 2.0, 0.0])) < 1e-14);
    }

    fn brute_distance(m: &ZeroModel, x: &DVector<f64>) -> f64 {
        // Dense scan of the cone |x2| = |(x3,x4)| in H: points (s·σ, s cosθ, s sinθ).
        let mut best = f64::MAX;
        let steps = 720;
        for sign in [-1.0, 1.0] {
            for k in 0..steps {
                let th = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
                let dir = DVector::from_vec(vec![0.0, sign, th.cos(), th.sin()]) / 2f64.sqrt();
                let s = dir.dot(&(x - m.base())).max(0.0);
                best = best.min((x - m.base() - dir * s).norm());
            }
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn projection_lands_on_cone_and_is_nearest(
            coords in proptest::collection::vec(-2.0f64..2.0, 4)
        ) {
            let m = cone22();
            let x = DVector::from_vec(coords);
            let p = m.project(&x);
            prop_assert!(m.satisfies_predicate(&p, 1e-10));
            let d = (&x - &p).norm();
            prop_assert!(d <= brute_distance(&m, &x) + 1e-9);
            prop_assert!(d >= brute_distance(&m, &x) - 1e-2);
        }
    }
}
